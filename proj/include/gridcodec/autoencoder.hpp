#pragma once

// Single-hidden-layer autoencoder codec:
//
//   theta = sigmoid(W1 [l; 1])      (N coefficients in (0, 1))
//   l~    = W2 [theta; 1]           (linear decoder)
//
// trained on the squared utility loss
//   ( ||x*(l~) + l||_p - ||x*(l) + l||_p )^2
// by back-propagating through the region-frozen water-filling Jacobian H(l~).

#include "gridcodec/profiles.hpp"
#include "gridcodec/transforms.hpp"

#include <cstdint>

namespace gridcodec {

struct AutoencoderCodec {
  Matrix W1;  // N x (P+1), last column holds the hidden biases
  Matrix W2;  // P x (N+1), last column holds the output biases

  int width() const noexcept { return static_cast<int>(W1.rows()); }
  int dim() const noexcept { return static_cast<int>(W2.rows()); }
};

struct TrainConfig {
  int width = 4;  // hidden units N
  int epochs = 500;
  double learning_rate = 0.01;
  int batch_size = 0;  // 0 = full batch
  std::uint64_t seed = 0;
  double init_scale = 0.1;
};

/// Weights i.i.d. uniform(-init_scale, init_scale), biases zero.
AutoencoderCodec ae_init(int dim, int width, std::uint64_t seed, double init_scale);

struct AutoencoderOutput {
  Vector theta;      // hidden activations
  Vector ell_tilde;  // reconstruction
};

AutoencoderOutput ae_forward(const AutoencoderCodec& codec, const LoadProfile& ell);

/// Decoder half on its own; used after quantizing theta.
Vector ae_decode(const AutoencoderCodec& codec, const Vector& theta);

double ae_loss(const AutoencoderCodec& codec, const LoadProfile& ell, const TaskSpec& task);

double ae_mean_loss(const AutoencoderCodec& codec, const ProfileDataset& dataset, const TaskSpec& task);

struct AutoencoderGradient {
  Matrix dW1;
  Matrix dW2;
  double loss = 0.0;
};

/// Loss and weight gradients for one profile, with H(l~) held constant.
AutoencoderGradient ae_gradient(const AutoencoderCodec& codec, const LoadProfile& ell, const TaskSpec& task);

/// Plain gradient descent on the mean loss, full batch or seeded mini-batches.
/// Returns the best iterate by full-dataset mean loss.
std::pair<AutoencoderCodec, FitReport> ae_train(const ProfileDataset& dataset, const TaskSpec& task,
                                                const TrainConfig& config, const ProgressFn& progress = {});

}  // namespace gridcodec
