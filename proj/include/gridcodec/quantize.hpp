#pragma once

// Fixed-rate scalar quantization of encoded coefficients.
//
// SIGNED coefficients use a dead-zone uniform quantizer on [-m_k, m_k] whose
// zero cell (-step, step) is twice as wide as the others. UNIT coefficients
// (sigmoid outputs) use a plain uniform quantizer on [0, 1]. The rate is
// N * bits per profile.

#include "gridcodec/profiles.hpp"

#include <cstdint>
#include <vector>

namespace gridcodec {

enum class QuantMode { Signed, Unit };

const char* to_string(QuantMode mode);
QuantMode parse_quant_mode(const std::string& token);

struct QuantizerSpec {
  QuantMode mode = QuantMode::Signed;
  std::vector<double> max_magnitude;  // m_k per coefficient, SIGNED only
};

/// SIGNED: m_k = max_i |theta_k^(i)|, or 1 for an all-zero column.
/// UNIT: fixed range, the samples are ignored.
QuantizerSpec calibrate(const Matrix& coefficient_samples, QuantMode mode);

struct Quantized {
  std::vector<std::int64_t> indices;
  Vector theta_hat;
};

Quantized quantize_dequantize(const Vector& theta, const QuantizerSpec& spec, int bits);

/// Cell width for coefficient k at the given rate.
double quantizer_step(const QuantizerSpec& spec, int k, int bits);

}  // namespace gridcodec
