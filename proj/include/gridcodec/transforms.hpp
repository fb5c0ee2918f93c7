#pragma once

// Linear codecs: theta = B l, l_hat = B^T B l.
//
// Two ways to pick B are provided: the KLT (top eigenvectors of the
// second-moment matrix, optimal for reconstruction MSE) and a utility-aware
// fit that descends the empirical optimality loss
//
//   Gamma(B) = 1/T sum_i ( u(x*(l_i); l_i) - u(x*(B^T B l_i); l_i) )^2
//
// starting from the KLT.

#include "gridcodec/profiles.hpp"

#include <functional>
#include <vector>

namespace gridcodec {

struct LinearCodec {
  Matrix B;  // N x P

  int rank() const noexcept { return static_cast<int>(B.rows()); }
  int dim() const noexcept { return static_cast<int>(B.cols()); }
};

enum class StopReason { MaxIterations, RelativeImprovementBelowThreshold };

const char* to_string(StopReason reason);

struct FitReport {
  int iterations = 0;
  std::vector<double> loss_trace;  // loss_trace[0] is the initial loss
  StopReason stop_reason = StopReason::MaxIterations;
  int best_iteration = 0;
};

/// Relative one-step decrease below which gradient descent stops (0.01%).
inline constexpr double kMinRelativeImprovement = 1e-4;

/// KLT without mean removal: rows of B are the N leading unit eigenvectors of
/// R = 1/T sum_i l_i l_i^T, eigenvalues descending, and the first non-zero
/// component of each row is positive.
LinearCodec klt_fit(const ProfileDataset& dataset, int rank);

struct LinearReconstruction {
  Vector theta;
  Vector ell_hat;
};

LinearReconstruction encode_decode(const LinearCodec& codec, const LoadProfile& ell);

/// u(x*(l_i); l_i) for every profile. Independent of any codec.
Vector reference_utilities(const ProfileDataset& dataset, const TaskSpec& task);

/// Gamma(B), both decisions from the exact water-filling solver.
double empirical_loss(const LinearCodec& codec, const ProfileDataset& dataset, const TaskSpec& task);

/// dGamma/dB with the per-profile linearization (H_i, b_i) taken at the
/// current reconstruction and held constant. Finite p must be >= 2.
Matrix gradient_B(const LinearCodec& codec, const ProfileDataset& dataset, const TaskSpec& task);

using ProgressFn = std::function<void(int iteration, double loss)>;

/// Fixed-step gradient descent from the KLT. Stops after `max_iterations`
/// or when one step improves the exact loss by less than 0.01%, and returns
/// the best iterate seen.
std::pair<LinearCodec, FitReport> fit_utility_linear(const ProfileDataset& dataset, const TaskSpec& task, int rank,
                                                     int max_iterations, double learning_rate,
                                                     const ProgressFn& progress = {});

}  // namespace gridcodec
