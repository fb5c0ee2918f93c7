#pragma once

// Optimality-loss evaluation of codecs, with or without quantization, and
// rate sweeps. Every report carries both the raw mean squared utility loss
// and a relative loss in percent:
//
//   mse_loss              = 1/T sum_i (u*_i - u^_i)^2
//   relative_percent      = 100 * sum_i |u*_i - u^_i| / sum_i |u*_i|   (pooled)
//   mean_relative_percent = 100 * 1/T sum_i |u*_i - u^_i| / |u*_i|     (per profile)

#include "gridcodec/codec.hpp"
#include "gridcodec/quantize.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gridcodec {

struct QuantizerSetting {
  QuantizerSpec spec;
  int bits = 8;
};

struct CurvePoint {
  int bits = 0;
  double mse_loss = 0.0;
  double relative_percent = 0.0;
  double mean_relative_percent = 0.0;
};

struct CodecReport {
  std::string name;
  double mse_loss = 0.0;
  double relative_percent = 0.0;
  double mean_relative_percent = 0.0;
  double mean_true_utility = 0.0;
  std::optional<QuantizerSetting> quantizer;
  std::vector<CurvePoint> curve;
};

struct EvalReport {
  TaskSpec task;
  std::vector<CodecReport> codecs;
};

/// Quantizer matching the codec's coefficient range: SIGNED calibrated on
/// `calibration` for linear codecs, UNIT for autoencoders.
QuantizerSpec default_quantizer(const Codec& codec, const ProfileDataset& calibration);

/// Encode, optionally quantize, decode, and score every profile against the
/// decision made from the true profile.
CodecReport eval_codec(const Codec& codec, const ProfileDataset& dataset, const TaskSpec& task,
                       const std::optional<QuantizerSetting>& quantizer = std::nullopt, std::string name = {});

/// Unquantized report plus one curve point per entry of `bits_list`, with
/// the quantizer calibrated once on `dataset`.
CodecReport sweep_bits(const Codec& codec, const ProfileDataset& dataset, const TaskSpec& task,
                       const std::vector<int>& bits_list, std::string name = {});

/// Same, calibrating on a separate split.
CodecReport sweep_bits(const Codec& codec, const ProfileDataset& dataset, const ProfileDataset& calibration,
                       const TaskSpec& task, const std::vector<int>& bits_list, std::string name = {});

nlohmann::json report_to_json(const EvalReport& report);
nlohmann::json quantizer_to_json(const QuantizerSetting& setting);

/// Throws ParseError describing the first schema violation.
void validate_report_json(const nlohmann::json& report);

/// "codec,bits,mse_loss,relative_percent"; unquantized rows leave bits empty.
std::string report_to_csv(const EvalReport& report);

}  // namespace gridcodec
