#include "gridcodec/quantize.hpp"

#include <algorithm>
#include <cmath>

namespace gridcodec {

namespace {

constexpr int kMaxBits = 52;

void check_bits(int bits) {
  if (bits < 1 || bits > kMaxBits) {
    throw Error(ErrorCode::InvalidBits, "bits per coefficient must be in [1, " + std::to_string(kMaxBits) +
                                            "], got " + std::to_string(bits));
  }
}

}  // namespace

const char* to_string(QuantMode mode) { return mode == QuantMode::Signed ? "signed" : "unit"; }

QuantMode parse_quant_mode(const std::string& token) {
  if (token == "signed") return QuantMode::Signed;
  if (token == "unit") return QuantMode::Unit;
  throw Error(ErrorCode::InvalidArgument, "unknown quantizer mode '" + token + "'");
}

QuantizerSpec calibrate(const Matrix& coefficient_samples, QuantMode mode) {
  QuantizerSpec spec;
  spec.mode = mode;
  if (mode == QuantMode::Unit) return spec;
  if (coefficient_samples.rows() < 1) throw Error(ErrorCode::DimensionMismatch, "calibration needs samples");

  spec.max_magnitude.resize(coefficient_samples.cols());
  for (Eigen::Index k = 0; k < coefficient_samples.cols(); ++k) {
    const double m = coefficient_samples.col(k).cwiseAbs().maxCoeff();
    spec.max_magnitude[k] = m > 0.0 ? m : 1.0;
  }
  return spec;
}

double quantizer_step(const QuantizerSpec& spec, int k, int bits) {
  check_bits(bits);
  if (spec.mode == QuantMode::Unit) return std::ldexp(1.0, -bits);
  return spec.max_magnitude.at(k) * std::ldexp(1.0, -(bits - 1));
}

Quantized quantize_dequantize(const Vector& theta, const QuantizerSpec& spec, int bits) {
  check_bits(bits);
  const auto n = theta.size();
  if (spec.mode == QuantMode::Signed && static_cast<Eigen::Index>(spec.max_magnitude.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "quantizer calibrated for " + std::to_string(spec.max_magnitude.size()) +
                                                  " coefficients, got " + std::to_string(n));
  }

  Quantized out;
  out.indices.resize(n);
  out.theta_hat.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double step = quantizer_step(spec, static_cast<int>(k), bits);
    if (spec.mode == QuantMode::Unit) {
      const auto top = (std::int64_t{1} << bits) - 1;
      const auto idx = std::clamp(static_cast<std::int64_t>(std::floor(theta[k] / step)), std::int64_t{0}, top);
      out.indices[k] = idx;
      out.theta_hat[k] = (static_cast<double>(idx) + 0.5) * step;
    } else {
      const auto top = (std::int64_t{1} << (bits - 1)) - 1;
      const auto mag = std::min(static_cast<std::int64_t>(std::floor(std::abs(theta[k]) / step)), top);
      const std::int64_t idx = theta[k] < 0.0 ? -mag : mag;
      out.indices[k] = idx;
      out.theta_hat[k] = idx == 0 ? 0.0 : (idx < 0 ? -1.0 : 1.0) * (static_cast<double>(mag) + 0.5) * step;
    }
  }
  return out;
}

}  // namespace gridcodec
