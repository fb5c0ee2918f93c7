#include "gridcodec/evaluate.hpp"

#include "gridcodec/waterfill.hpp"

#include <cmath>
#include <sstream>

namespace gridcodec {

namespace {

struct LossTotals {
  double squared = 0.0;
  double abs_gap = 0.0;
  double abs_reference = 0.0;
  double per_profile_ratio = 0.0;
  double reference = 0.0;
};

LossTotals accumulate(const Codec& codec, const ProfileDataset& dataset, const TaskSpec& task,
                      const std::optional<QuantizerSetting>& quantizer) {
  validate_dataset(dataset);
  check_task_matches(task, dataset);
  if (codec_dim(codec) != dataset.dim) {
    throw Error(ErrorCode::DimensionMismatch, "codec expects P=" + std::to_string(codec_dim(codec)) +
                                                  ", dataset has P=" + std::to_string(dataset.dim));
  }

  LossTotals totals;
  for (const auto& ell : dataset.profiles) {
    Vector theta = encode(codec, ell);
    if (quantizer) theta = quantize_dequantize(theta, quantizer->spec, quantizer->bits).theta_hat;
    const Vector ell_hat = decode(codec, theta);

    const double truth = utility(solve_waterfill(ell, task).x, ell, task.p);
    const double decoded = utility(solve_waterfill(ell_hat, task).x, ell, task.p);
    const double gap = truth - decoded;
    totals.squared += gap * gap;
    totals.abs_gap += std::abs(gap);
    totals.abs_reference += std::abs(truth);
    totals.reference += truth;
    if (truth != 0.0) totals.per_profile_ratio += std::abs(gap) / std::abs(truth);
  }
  return totals;
}

double pooled_percent(const LossTotals& t) { return t.abs_reference > 0.0 ? 100.0 * t.abs_gap / t.abs_reference : 0.0; }

nlohmann::json exponent_to_json(Exponent p) {
  return p.is_infinite() ? nlohmann::json("inf") : nlohmann::json(p.value());
}

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::ParseError, "report schema: " + what);
}

}  // namespace

QuantizerSpec default_quantizer(const Codec& codec, const ProfileDataset& calibration) {
  if (std::holds_alternative<AutoencoderCodec>(codec)) return calibrate(Matrix(), QuantMode::Unit);
  validate_dataset(calibration);
  Matrix samples(calibration.size(), codec_rank(codec));
  for (int i = 0; i < calibration.size(); ++i) samples.row(i) = encode(codec, calibration.profiles[i]).transpose();
  return calibrate(samples, QuantMode::Signed);
}

CodecReport eval_codec(const Codec& codec, const ProfileDataset& dataset, const TaskSpec& task,
                       const std::optional<QuantizerSetting>& quantizer, std::string name) {
  const LossTotals totals = accumulate(codec, dataset, task, quantizer);
  const double count = dataset.size();

  CodecReport report;
  report.name = std::move(name);
  report.mse_loss = totals.squared / count;
  report.relative_percent = pooled_percent(totals);
  report.mean_relative_percent = 100.0 * totals.per_profile_ratio / count;
  report.mean_true_utility = totals.reference / count;
  report.quantizer = quantizer;
  return report;
}

CodecReport sweep_bits(const Codec& codec, const ProfileDataset& dataset, const TaskSpec& task,
                       const std::vector<int>& bits_list, std::string name) {
  return sweep_bits(codec, dataset, dataset, task, bits_list, std::move(name));
}

CodecReport sweep_bits(const Codec& codec, const ProfileDataset& dataset, const ProfileDataset& calibration,
                       const TaskSpec& task, const std::vector<int>& bits_list, std::string name) {
  if (bits_list.empty()) throw Error(ErrorCode::InvalidBits, "bits list is empty");
  const QuantizerSpec spec = default_quantizer(codec, calibration);

  CodecReport report = eval_codec(codec, dataset, task, std::nullopt, std::move(name));
  for (int bits : bits_list) {
    const CodecReport point = eval_codec(codec, dataset, task, QuantizerSetting{spec, bits});
    report.curve.push_back({bits, point.mse_loss, point.relative_percent, point.mean_relative_percent});
  }
  return report;
}

nlohmann::json quantizer_to_json(const QuantizerSetting& setting) {
  return {{"bits", setting.bits}, {"mode", to_string(setting.spec.mode)}, {"m", setting.spec.max_magnitude}};
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json codecs = nlohmann::json::array();
  for (const auto& c : report.codecs) {
    nlohmann::json entry = {
        {"name", c.name},
        {"mse_loss", c.mse_loss},
        {"relative_percent", c.relative_percent},
        {"mean_relative_percent", c.mean_relative_percent},
        {"mean_true_utility", c.mean_true_utility},
    };
    if (c.quantizer) entry["quantizer"] = quantizer_to_json(*c.quantizer);
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& pt : c.curve) curve.push_back({pt.bits, pt.mse_loss, pt.relative_percent});
    entry["curve"] = std::move(curve);
    codecs.push_back(std::move(entry));
  }
  return {{"task", {{"p", exponent_to_json(report.task.p)}, {"E", report.task.energy}}}, {"codecs", codecs}};
}

void validate_report_json(const nlohmann::json& report) {
  if (!report.is_object()) schema_error("top level must be an object");
  if (!report.contains("task") || !report["task"].is_object()) schema_error("missing object 'task'");
  const auto& task = report["task"];
  if (!task.contains("p")) schema_error("task.p missing");
  const auto& p = task["p"];
  if (!((p.is_number_integer() && p.get<long long>() >= 1) || (p.is_string() && p.get<std::string>() == "inf"))) {
    schema_error("task.p must be a positive integer or \"inf\"");
  }
  if (!task.contains("E") || !task["E"].is_number() || !(task["E"].get<double>() > 0.0)) {
    schema_error("task.E must be a positive number");
  }
  if (!report.contains("codecs") || !report["codecs"].is_array()) schema_error("missing array 'codecs'");
  for (const auto& c : report["codecs"]) {
    if (!c.is_object()) schema_error("codec entry must be an object");
    if (!c.contains("name") || !c["name"].is_string()) schema_error("codec.name must be a string");
    for (const char* key : {"mse_loss", "relative_percent"}) {
      if (!c.contains(key) || !c[key].is_number()) schema_error(std::string("codec.") + key + " must be a number");
      if (c[key].get<double>() < 0.0) schema_error(std::string("codec.") + key + " must be non-negative");
    }
    if (c.contains("curve")) {
      if (!c["curve"].is_array()) schema_error("codec.curve must be an array");
      for (const auto& pt : c["curve"]) {
        if (!pt.is_array() || pt.size() != 3 || !pt[0].is_number_integer() || !pt[1].is_number() ||
            !pt[2].is_number()) {
          schema_error("curve entries must be [bits, mse_loss, relative_percent]");
        }
        if (pt[0].get<int>() < 1) schema_error("curve bits must be >= 1");
      }
    }
    if (c.contains("quantizer")) {
      const auto& q = c["quantizer"];
      if (!q.is_object() || !q.contains("bits") || !q["bits"].is_number_integer() || !q.contains("mode") ||
          !q["mode"].is_string() || !q.contains("m") || !q["m"].is_array()) {
        schema_error("quantizer must be {\"bits\":int,\"mode\":str,\"m\":[...]}");
      }
      const auto mode = q["mode"].get<std::string>();
      if (mode != "signed" && mode != "unit") schema_error("quantizer.mode must be \"signed\" or \"unit\"");
    }
  }
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "codec,bits,mse_loss,relative_percent\n";
  for (const auto& c : report.codecs) {
    out << c.name << ',';
    if (c.quantizer) out << c.quantizer->bits;
    out << ',' << c.mse_loss << ',' << c.relative_percent << '\n';
    for (const auto& pt : c.curve) {
      out << c.name << ',' << pt.bits << ',' << pt.mse_loss << ',' << pt.relative_percent << '\n';
    }
  }
  return out.str();
}

}  // namespace gridcodec
