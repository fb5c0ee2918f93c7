#include "gridcodec/transforms.hpp"

#include "gridcodec/linearize.hpp"
#include "gridcodec/waterfill.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace gridcodec {

namespace {

void check_codec(const LinearCodec& codec, const ProfileDataset& dataset, const TaskSpec& task) {
  validate_dataset(dataset);
  check_task_matches(task, dataset);
  if (codec.dim() != dataset.dim) {
    throw Error(ErrorCode::DimensionMismatch, "codec expects P=" + std::to_string(codec.dim()) + ", dataset has P=" +
                                                  std::to_string(dataset.dim));
  }
}

double loss_with_reference(const LinearCodec& codec, const ProfileDataset& dataset, const TaskSpec& task,
                           const Vector& reference) {
  double acc = 0.0;
  for (int i = 0; i < dataset.size(); ++i) {
    const auto& ell = dataset.profiles[i];
    const Vector ell_hat = codec.B.transpose() * (codec.B * ell);
    const double decoded = utility(solve_waterfill(ell_hat, task).x, ell, task.p);
    const double gap = reference[i] - decoded;
    acc += gap * gap;
  }
  return acc / dataset.size();
}

Matrix gradient_with_reference(const LinearCodec& codec, const ProfileDataset& dataset, const TaskSpec& task,
                               const Vector& reference) {
  if (!task.p.is_infinite() && task.p.value() < 2) {
    throw Error(ErrorCode::UnsupportedExponent, "gradient requires p >= 2 or p = inf");
  }
  const Matrix& B = codec.B;
  Matrix grad = Matrix::Zero(B.rows(), B.cols());
  for (int i = 0; i < dataset.size(); ++i) {
    const auto& ell = dataset.profiles[i];
    const Vector theta = B * ell;
    const Vector ell_hat = B.transpose() * theta;
    const LinearizationPoint lin = linearize_at(ell_hat, task);
    const Vector v = solve_waterfill(ell_hat, task).x + ell;

    // d/dB of (u*_i + ||H_i B^T B l_i + b_i + l_i||_p)^2 with H_i, b_i frozen.
    const double coef = 2.0 * (reference[i] + lp_norm(v, task.p));
    if (coef == 0.0) continue;
    const Vector a = lin.H.transpose() * lp_norm_gradient(v, task.p);
    grad.noalias() += coef * (theta * a.transpose());
    grad.noalias() += coef * ((B * a) * ell.transpose());
  }
  return grad / dataset.size();
}

}  // namespace

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::MaxIterations: return "MaxIterations";
    case StopReason::RelativeImprovementBelowThreshold: return "RelativeImprovementBelowThreshold";
  }
  return "Unknown";
}

LinearCodec klt_fit(const ProfileDataset& dataset, int rank) {
  validate_dataset(dataset);
  if (rank > dataset.dim) {
    throw Error(ErrorCode::RankTooLarge,
                "rank N=" + std::to_string(rank) + " exceeds dimension P=" + std::to_string(dataset.dim));
  }
  if (rank < 1) throw Error(ErrorCode::InvalidArgument, "rank must be positive");

  const Matrix samples = dataset.as_matrix();
  const Matrix second_moment = (samples.transpose() * samples) / static_cast<double>(dataset.size());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(second_moment);

  // Eigen returns eigenvalues in ascending order.
  const Matrix& vectors = solver.eigenvectors();
  LinearCodec codec{Matrix(rank, dataset.dim)};
  for (int k = 0; k < rank; ++k) {
    Vector row = vectors.col(dataset.dim - 1 - k);
    for (Eigen::Index j = 0; j < row.size(); ++j) {
      if (std::abs(row[j]) > 1e-12) {
        if (row[j] < 0.0) row = -row;
        break;
      }
    }
    codec.B.row(k) = row.transpose();
  }
  return codec;
}

LinearReconstruction encode_decode(const LinearCodec& codec, const LoadProfile& ell) {
  if (ell.size() != codec.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "profile has length " + std::to_string(ell.size()) +
                                                  ", codec expects " + std::to_string(codec.dim()));
  }
  LinearReconstruction out;
  out.theta = codec.B * ell;
  out.ell_hat = codec.B.transpose() * out.theta;
  return out;
}

Vector reference_utilities(const ProfileDataset& dataset, const TaskSpec& task) {
  Vector ref(dataset.size());
  for (int i = 0; i < dataset.size(); ++i) {
    const auto& ell = dataset.profiles[i];
    ref[i] = utility(solve_waterfill(ell, task).x, ell, task.p);
  }
  return ref;
}

double empirical_loss(const LinearCodec& codec, const ProfileDataset& dataset, const TaskSpec& task) {
  check_codec(codec, dataset, task);
  return loss_with_reference(codec, dataset, task, reference_utilities(dataset, task));
}

Matrix gradient_B(const LinearCodec& codec, const ProfileDataset& dataset, const TaskSpec& task) {
  check_codec(codec, dataset, task);
  return gradient_with_reference(codec, dataset, task, reference_utilities(dataset, task));
}

std::pair<LinearCodec, FitReport> fit_utility_linear(const ProfileDataset& dataset, const TaskSpec& task, int rank,
                                                     int max_iterations, double learning_rate,
                                                     const ProgressFn& progress) {
  LinearCodec codec = klt_fit(dataset, rank);
  check_task_matches(task, dataset);
  const Vector reference = reference_utilities(dataset, task);

  FitReport report;
  double previous = loss_with_reference(codec, dataset, task, reference);
  report.loss_trace.push_back(previous);
  if (progress) progress(0, previous);

  LinearCodec best = codec;
  double best_loss = previous;

  for (int it = 1; it <= max_iterations; ++it) {
    codec.B -= learning_rate * gradient_with_reference(codec, dataset, task, reference);
    const double loss = loss_with_reference(codec, dataset, task, reference);
    report.loss_trace.push_back(loss);
    report.iterations = it;
    if (progress) progress(it, loss);

    if (loss < best_loss) {
      best_loss = loss;
      best = codec;
      report.best_iteration = it;
    }
    const bool stalled = previous <= 0.0 || (previous - loss) / previous < kMinRelativeImprovement;
    previous = loss;
    if (stalled) {
      report.stop_reason = StopReason::RelativeImprovementBelowThreshold;
      return {best, report};
    }
  }
  report.stop_reason = StopReason::MaxIterations;
  return {best, report};
}

}  // namespace gridcodec
