#include "gridcodec/linearize.hpp"

#include "gridcodec/waterfill.hpp"

namespace gridcodec {

IndexSet identify_region(const LoadProfile& ell, const TaskSpec& task) {
  return solve_waterfill(ell, task).active;
}

LinearizationPoint linearize_at(const LoadProfile& ell, const TaskSpec& task) {
  const auto dim = ell.size();
  LinearizationPoint lin;
  lin.active = identify_region(ell, task);
  lin.nstar = static_cast<int>(lin.active.size());
  lin.H = Matrix::Zero(dim, dim);
  lin.b = Vector::Zero(dim);

  const double share = 1.0 / lin.nstar;
  for (int j : lin.active) {
    for (int k : lin.active) lin.H(j, k) = share;
    lin.H(j, j) = share - 1.0;
    lin.b[j] = task.energy * share;
  }
  return lin;
}

}  // namespace gridcodec
