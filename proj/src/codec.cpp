#include "gridcodec/codec.hpp"

namespace gridcodec {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

Vector encode(const Codec& codec, const LoadProfile& ell) {
  return std::visit(overloaded{[&](const LinearCodec& c) { return encode_decode(c, ell).theta; },
                               [&](const AutoencoderCodec& c) { return ae_forward(c, ell).theta; }},
                    codec);
}

Vector decode(const Codec& codec, const Vector& theta) {
  return std::visit(overloaded{[&](const LinearCodec& c) -> Vector {
                                 if (theta.size() != c.rank()) {
                                   throw Error(ErrorCode::DimensionMismatch, "coefficient count does not match rank");
                                 }
                                 return c.B.transpose() * theta;
                               },
                               [&](const AutoencoderCodec& c) { return ae_decode(c, theta); }},
                    codec);
}

int codec_dim(const Codec& codec) {
  return std::visit([](const auto& c) { return c.dim(); }, codec);
}

int codec_rank(const Codec& codec) {
  return std::visit(overloaded{[](const LinearCodec& c) { return c.rank(); },
                               [](const AutoencoderCodec& c) { return c.width(); }},
                    codec);
}

const char* codec_kind(const Codec& codec) {
  return std::holds_alternative<LinearCodec>(codec) ? "linear" : "autoencoder";
}

}  // namespace gridcodec
