#include "gridcodec/autoencoder.hpp"

#include "gridcodec/linearize.hpp"
#include "gridcodec/waterfill.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace gridcodec {

namespace {

// Bit-reproducible uniform draws; std::uniform_real_distribution is not
// specified tightly enough to give identical streams across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double reference_norm(const LoadProfile& ell, const TaskSpec& task) {
  return lp_norm(solve_waterfill(ell, task).x + ell, task.p);
}

void check_profile(const AutoencoderCodec& codec, const LoadProfile& ell) {
  if (ell.size() != codec.dim() || codec.W1.cols() != codec.dim() + 1 || codec.W2.cols() != codec.width() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "autoencoder shape does not match profile of length " +
                                                  std::to_string(ell.size()));
  }
}

AutoencoderGradient gradient_with_reference(const AutoencoderCodec& codec, const LoadProfile& ell,
                                            const TaskSpec& task, double ref_norm) {
  const int dim = codec.dim();
  const int width = codec.width();

  Vector zeta(dim + 1);
  zeta << ell, 1.0;
  const AutoencoderOutput fwd = ae_forward(codec, ell);
  Vector eta(width + 1);
  eta << fwd.theta, 1.0;

  const LinearizationPoint lin = linearize_at(fwd.ell_tilde, task);
  const Vector v = solve_waterfill(fwd.ell_tilde, task).x + ell;
  const double gap = lp_norm(v, task.p) - ref_norm;

  AutoencoderGradient out;
  out.loss = gap * gap;

  const Vector d_out = 2.0 * gap * (lin.H.transpose() * lp_norm_gradient(v, task.p));
  out.dW2 = d_out * eta.transpose();
  const Vector d_hidden =
      (codec.W2.leftCols(width).transpose() * d_out).cwiseProduct(fwd.theta.cwiseProduct(
          (1.0 - fwd.theta.array()).matrix()));
  out.dW1 = d_hidden * zeta.transpose();
  return out;
}

}  // namespace

AutoencoderCodec ae_init(int dim, int width, std::uint64_t seed, double init_scale) {
  if (width < 1 || dim < 1) throw Error(ErrorCode::InvalidArgument, "autoencoder needs P >= 1 and N >= 1");
  if (!(init_scale >= 0.0)) throw Error(ErrorCode::InvalidArgument, "init_scale must be non-negative");

  std::mt19937_64 rng(seed);
  AutoencoderCodec codec{Matrix::Zero(width, dim + 1), Matrix::Zero(dim, width + 1)};
  auto draw = [&] { return init_scale * (2.0 * unit_uniform(rng) - 1.0); };
  for (int r = 0; r < width; ++r)
    for (int c = 0; c < dim; ++c) codec.W1(r, c) = draw();
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < width; ++c) codec.W2(r, c) = draw();
  return codec;
}

AutoencoderOutput ae_forward(const AutoencoderCodec& codec, const LoadProfile& ell) {
  check_profile(codec, ell);
  const int dim = codec.dim();
  AutoencoderOutput out;
  out.theta = (codec.W1.leftCols(dim) * ell + codec.W1.col(dim)).unaryExpr([](double t) { return sigmoid(t); });
  out.ell_tilde = ae_decode(codec, out.theta);
  return out;
}

Vector ae_decode(const AutoencoderCodec& codec, const Vector& theta) {
  if (theta.size() != codec.width()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(codec.width()) + " coefficients, got " +
                                                  std::to_string(theta.size()));
  }
  return codec.W2.leftCols(codec.width()) * theta + codec.W2.col(codec.width());
}

double ae_loss(const AutoencoderCodec& codec, const LoadProfile& ell, const TaskSpec& task) {
  const Vector ell_tilde = ae_forward(codec, ell).ell_tilde;
  const double gap = lp_norm(solve_waterfill(ell_tilde, task).x + ell, task.p) - reference_norm(ell, task);
  return gap * gap;
}

double ae_mean_loss(const AutoencoderCodec& codec, const ProfileDataset& dataset, const TaskSpec& task) {
  validate_dataset(dataset);
  double acc = 0.0;
  for (const auto& ell : dataset.profiles) acc += ae_loss(codec, ell, task);
  return acc / dataset.size();
}

AutoencoderGradient ae_gradient(const AutoencoderCodec& codec, const LoadProfile& ell, const TaskSpec& task) {
  if (!task.p.is_infinite() && task.p.value() < 2) {
    throw Error(ErrorCode::UnsupportedExponent, "gradient requires p >= 2 or p = inf");
  }
  check_profile(codec, ell);
  return gradient_with_reference(codec, ell, task, reference_norm(ell, task));
}

std::pair<AutoencoderCodec, FitReport> ae_train(const ProfileDataset& dataset, const TaskSpec& task,
                                                const TrainConfig& config, const ProgressFn& progress) {
  validate_dataset(dataset);
  check_task_matches(task, dataset);
  if (!task.p.is_infinite() && task.p.value() < 2) {
    throw Error(ErrorCode::UnsupportedExponent, "training requires p >= 2 or p = inf");
  }
  const int count = dataset.size();
  AutoencoderCodec codec = ae_init(dataset.dim, config.width, config.seed, config.init_scale);

  std::vector<double> ref_norms(count);
  for (int i = 0; i < count; ++i) ref_norms[i] = reference_norm(dataset.profiles[i], task);

  auto mean_loss = [&](const AutoencoderCodec& c) {
    double acc = 0.0;
    for (int i = 0; i < count; ++i) {
      const auto& ell = dataset.profiles[i];
      const double gap = lp_norm(solve_waterfill(ae_forward(c, ell).ell_tilde, task).x + ell, task.p) - ref_norms[i];
      acc += gap * gap;
    }
    return acc / count;
  };

  FitReport report;
  report.loss_trace.push_back(mean_loss(codec));
  if (progress) progress(0, report.loss_trace.back());
  AutoencoderCodec best = codec;
  double best_loss = report.loss_trace.back();

  const int batch = config.batch_size <= 0 ? count : std::min(config.batch_size, count);
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  // Separate stream from the weight initialisation.
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (batch < count) {
      for (int k = count - 1; k > 0; --k) {
        const auto r = static_cast<int>(shuffle_rng() % static_cast<std::uint64_t>(k + 1));
        std::swap(order[k], order[r]);
      }
    }
    for (int start = 0; start < count; start += batch) {
      const int stop = std::min(start + batch, count);
      Matrix dW1 = Matrix::Zero(codec.W1.rows(), codec.W1.cols());
      Matrix dW2 = Matrix::Zero(codec.W2.rows(), codec.W2.cols());
      for (int k = start; k < stop; ++k) {
        const int i = order[k];
        const AutoencoderGradient g = gradient_with_reference(codec, dataset.profiles[i], task, ref_norms[i]);
        dW1 += g.dW1;
        dW2 += g.dW2;
      }
      const double scale = config.learning_rate / (stop - start);
      codec.W1 -= scale * dW1;
      codec.W2 -= scale * dW2;
    }

    const double loss = mean_loss(codec);
    report.loss_trace.push_back(loss);
    report.iterations = epoch;
    if (progress) progress(epoch, loss);
    if (loss < best_loss) {
      best_loss = loss;
      best = codec;
      report.best_iteration = epoch;
    }
  }
  report.stop_reason = StopReason::MaxIterations;
  return {best, report};
}

}  // namespace gridcodec
