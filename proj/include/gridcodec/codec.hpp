#pragma once

#include "gridcodec/autoencoder.hpp"
#include "gridcodec/transforms.hpp"

#include <variant>

namespace gridcodec {

using Codec = std::variant<LinearCodec, AutoencoderCodec>;

/// Coefficients theta = g(l).
Vector encode(const Codec& codec, const LoadProfile& ell);
/// Reconstruction l_hat = h(theta).
Vector decode(const Codec& codec, const Vector& theta);

int codec_dim(const Codec& codec);
int codec_rank(const Codec& codec);
const char* codec_kind(const Codec& codec);

}  // namespace gridcodec
