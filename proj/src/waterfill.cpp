#include "gridcodec/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gridcodec {

double lp_norm(const Vector& v, Exponent p) {
  if (v.size() == 0) return 0.0;
  if (p.is_infinite()) return v.cwiseAbs().maxCoeff();
  if (p.value() == 1) return v.cwiseAbs().sum();
  if (p.value() == 2) return v.norm();
  // Scale by the max magnitude so |v_j|^p cannot overflow for large p.
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) acc += std::pow(std::abs(v[j]) / scale, p.value());
  return scale * std::pow(acc, 1.0 / p.value());
}

Eigen::Index argmax_abs(const Vector& v) {
  Eigen::Index k = 0;
  for (Eigen::Index j = 1; j < v.size(); ++j) {
    if (std::abs(v[j]) > std::abs(v[k])) k = j;
  }
  return k;
}

Vector lp_norm_gradient(const Vector& v, Exponent p) {
  Vector g = Vector::Zero(v.size());
  if (v.size() == 0) return g;
  const Eigen::Index k = argmax_abs(v);
  if (v[k] == 0.0) return g;
  if (p.is_infinite()) {
    g[k] = v[k] > 0.0 ? 1.0 : -1.0;
    return g;
  }
  // |v_j|^(p-1) sign(v_j) ||v||^(1-p), evaluated as a ratio power for stability.
  const double norm = lp_norm(v, p);
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double ratio = std::abs(v[j]) / norm;
    const double mag = p.value() == 1 ? 1.0 : std::pow(ratio, p.value() - 1);
    g[j] = v[j] > 0.0 ? mag : (v[j] < 0.0 ? -mag : 0.0);
  }
  return g;
}

double utility(const Vector& x, const Vector& ell, Exponent p) {
  if (x.size() != ell.size()) {
    throw Error(ErrorCode::DimensionMismatch, "decision has length " + std::to_string(x.size()) +
                                                  ", profile has length " + std::to_string(ell.size()));
  }
  return -lp_norm(x + ell, p);
}

int active_count(std::span<const double> ell_sorted, double energy) {
  int nstar = 1;
  double prefix = 0.0;  // sum_{j<n} l_j
  for (std::size_t n = 1; n <= ell_sorted.size(); ++n) {
    const double lhs = static_cast<double>(n - 1) * ell_sorted[n - 1] - prefix;
    if (lhs < energy) nstar = static_cast<int>(n);
    prefix += ell_sorted[n - 1];
  }
  return nstar;
}

Allocation solve_waterfill(const LoadProfile& ell, const TaskSpec& task) {
  validate_task(task);
  const auto dim = static_cast<int>(ell.size());
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "empty profile");

  std::vector<int> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ell[a] < ell[b]; });

  std::vector<double> sorted(dim);
  for (int k = 0; k < dim; ++k) sorted[k] = ell[order[k]];

  const int nstar = active_count(sorted, task.energy);
  const double loaded_sum = std::accumulate(sorted.begin(), sorted.begin() + nstar, 0.0);

  Allocation out;
  out.mu = (task.energy + loaded_sum) / nstar;
  out.x = Vector::Zero(dim);
  out.active.assign(order.begin(), order.begin() + nstar);
  std::sort(out.active.begin(), out.active.end());
  for (int j : out.active) out.x[j] = std::max(out.mu - ell[j], 0.0);
  return out;
}

Allocation oracle_solve(const LoadProfile& ell, const TaskSpec& task) {
  validate_task(task);
  const auto dim = static_cast<int>(ell.size());
  if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "empty profile");
  if (dim > kOracleMaxDim) {
    throw Error(ErrorCode::TooLarge, "oracle enumerates 2^P subsets; P=" + std::to_string(dim) + " exceeds " +
                                         std::to_string(kOracleMaxDim));
  }

  const double tol = 1e-9 * std::max(1.0, ell.cwiseAbs().maxCoeff() + task.energy);
  Allocation best;
  double best_utility = -std::numeric_limits<double>::infinity();

  for (unsigned mask = 1; mask < (1u << dim); ++mask) {
    double level_sum = task.energy;
    int count = 0;
    for (int j = 0; j < dim; ++j) {
      if (mask & (1u << j)) {
        level_sum += ell[j];
        ++count;
      }
    }
    // Stationarity on the subset: x_j + l_j is one common level.
    const double level = level_sum / count;

    bool feasible = true;
    Vector x = Vector::Zero(dim);
    for (int j = 0; j < dim && feasible; ++j) {
      if (mask & (1u << j)) {
        x[j] = level - ell[j];
        feasible = x[j] > -tol;
      } else {
        // Unloaded slot: its marginal cost must not undercut the level.
        feasible = ell[j] >= level - tol;
      }
    }
    if (!feasible) continue;

    x = x.cwiseMax(0.0);
    x *= task.energy / x.sum();
    const double u = utility(x, ell, task.p);
    if (u > best_utility + 1e-14 * std::max(1.0, std::abs(u))) {
      best_utility = u;
      best.x = x;
      best.mu = level;
      best.active.clear();
      for (int j = 0; j < dim; ++j) {
        if (x[j] > tolerance::kActivity) best.active.push_back(j);
      }
    }
  }
  if (best.x.size() == 0) {
    throw Error(ErrorCode::InvalidTask, "oracle found no feasible candidate");
  }
  return best;
}

}  // namespace gridcodec
