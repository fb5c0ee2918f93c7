#include "gridcodec/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace gridcodec {

namespace {

constexpr int kAusgridFixedColumns = 5;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Minimal RFC 4180 field splitter: quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  fields.push_back(trim(field));
  return fields;
}

std::optional<double> parse_double(const std::string& token) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) return std::nullopt;
  return value;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": " + what);
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Matrix matrix_from_json(const nlohmann::json& rows, Eigen::Index expect_rows, Eigen::Index expect_cols,
                        const char* name) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != expect_rows) {
    throw Error(ErrorCode::ParseError, std::string(name) + " must have " + std::to_string(expect_rows) + " rows");
  }
  Matrix m(expect_rows, expect_cols);
  for (Eigen::Index r = 0; r < expect_rows; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != expect_cols) {
      throw Error(ErrorCode::ParseError, std::string(name) + " row " + std::to_string(r) + " must have " +
                                             std::to_string(expect_cols) + " entries");
    }
    for (Eigen::Index c = 0; c < expect_cols; ++c) {
      if (!row[c].is_number()) throw Error(ErrorCode::ParseError, std::string(name) + " entries must be numbers");
      m(r, c) = row[c].get<double>();
    }
  }
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, std::string(name) + " has a non-finite entry");
  return m;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ProfileDataset load_ausgrid(const std::filesystem::path& path, const std::optional<std::string>& customer_id,
                            const std::string& category) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  const std::string source = path.filename().string();

  ProfileDataset dataset;
  dataset.dim = kAusgridSlots;
  std::size_t header_fields = 0;
  std::string first_date;
  std::string last_date;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (header_fields == 0) {
      if (fields[0] == "Customer") {
        header_fields = fields.size();
        if (header_fields < kAusgridFixedColumns + kAusgridSlots) {
          parse_error(source, line_no, "header has " + std::to_string(header_fields - kAusgridFixedColumns) +
                                           " interval columns, expected " + std::to_string(kAusgridSlots));
        }
      }
      continue;  // title rows before the header
    }

    const std::size_t intervals = fields.size() < kAusgridFixedColumns ? 0 : fields.size() - kAusgridFixedColumns;
    if (fields.size() < kAusgridFixedColumns + kAusgridSlots || fields.size() > header_fields) {
      parse_error(source, line_no, "row has " + std::to_string(intervals) + " interval columns, expected " +
                                       std::to_string(kAusgridSlots));
    }
    if (customer_id && fields[0] != *customer_id) continue;
    if (fields[3] != category) continue;

    LoadProfile profile(kAusgridSlots);
    for (int k = 0; k < kAusgridSlots; ++k) {
      const auto& token = fields[kAusgridFixedColumns + k];
      const auto value = parse_double(token);
      if (!value || !std::isfinite(*value)) {
        parse_error(source, line_no, "interval " + std::to_string(k + 1) + " is not a number: '" + token + "'");
      }
      profile[k] = *value;
    }
    if (first_date.empty()) first_date = fields[4];
    last_date = fields[4];
    dataset.profiles.push_back(std::move(profile));
  }
  if (header_fields == 0) parse_error(source, line_no, "no header row starting with 'Customer'");
  if (dataset.profiles.empty()) {
    throw Error(ErrorCode::EmptySelection, "no rows for customer " + customer_id.value_or("*") + " in category " +
                                               category + " in " + source);
  }

  dataset.metadata["source"] = path.string();
  dataset.metadata["customer"] = customer_id.value_or("*");
  dataset.metadata["category"] = category;
  dataset.metadata["first_date"] = first_date;
  dataset.metadata["last_date"] = last_date;
  validate_dataset(dataset);
  return dataset;
}

ProfileDataset synth_generate(std::uint64_t seed, int count, int dim, const SynthParams& params) {
  if (count < 1 || dim < 1) throw Error(ErrorCode::InvalidArgument, "synthetic dataset needs T >= 1 and P >= 1");
  if (params.bump_count < 0 || params.bump_scale < 0.0 || params.noise_scale < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "synthetic parameters must be non-negative");
  }

  std::mt19937_64 rng(seed);
  ProfileDataset dataset;
  dataset.dim = dim;
  dataset.profiles.reserve(count);
  const double max_width = 0.6 + 0.08 * dim;

  for (int i = 0; i < count; ++i) {
    LoadProfile profile = LoadProfile::Zero(dim);
    for (int b = 0; b < params.bump_count; ++b) {
      const double center = unit_uniform(rng) * dim;
      const double width = 0.4 + unit_uniform(rng) * (max_width - 0.4);
      const double height = unit_uniform(rng) * params.bump_scale;
      for (int t = 0; t < dim; ++t) {
        const double z = (t - center) / width;
        profile[t] += height * std::exp(-0.5 * z * z);
      }
    }
    for (int t = 0; t < dim; ++t) profile[t] = std::max(0.0, profile[t] + unit_uniform(rng) * params.noise_scale);
    dataset.profiles.push_back(std::move(profile));
  }

  dataset.metadata["source"] = "synthetic";
  dataset.metadata["seed"] = std::to_string(seed);
  return dataset;
}

std::string dataset_to_csv(const ProfileDataset& dataset) {
  validate_dataset(dataset);
  std::string out;
  char buf[64];
  for (const auto& profile : dataset.profiles) {
    for (Eigen::Index j = 0; j < profile.size(); ++j) {
      if (j > 0) out += ',';
      const auto res = std::to_chars(buf, buf + sizeof(buf), profile[j]);
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

ProfileDataset dataset_from_csv(const std::string& text) {
  ProfileDataset dataset;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (dataset.profiles.empty()) dataset.dim = static_cast<int>(fields.size());
    if (static_cast<int>(fields.size()) != dataset.dim) {
      parse_error("dataset", line_no, "row has " + std::to_string(fields.size()) + " columns, expected " +
                                          std::to_string(dataset.dim));
    }
    LoadProfile profile(dataset.dim);
    for (int j = 0; j < dataset.dim; ++j) {
      const auto value = parse_double(fields[j]);
      if (!value) parse_error("dataset", line_no, "not a number: '" + fields[j] + "'");
      profile[j] = *value;
    }
    dataset.profiles.push_back(std::move(profile));
  }
  if (dataset.profiles.empty()) throw Error(ErrorCode::EmptySelection, "dataset file holds no profiles");
  validate_dataset(dataset);
  return dataset;
}

void save_dataset(const std::filesystem::path& path, const ProfileDataset& dataset) {
  write_text(path, dataset_to_csv(dataset));
}

ProfileDataset load_dataset(const std::filesystem::path& path) {
  ProfileDataset dataset = dataset_from_csv(read_text(path));
  dataset.metadata["source"] = path.string();
  return dataset;
}

nlohmann::json codec_to_json(const Codec& codec) {
  if (const auto* linear = std::get_if<LinearCodec>(&codec)) {
    return {{"kind", "linear"}, {"N", linear->rank()}, {"P", linear->dim()}, {"B", matrix_to_json(linear->B)}};
  }
  const auto& ae = std::get<AutoencoderCodec>(codec);
  return {{"kind", "autoencoder"},
          {"N", ae.width()},
          {"P", ae.dim()},
          {"W1", matrix_to_json(ae.W1)},
          {"W2", matrix_to_json(ae.W2)}};
}

Codec codec_from_json(const nlohmann::json& json) {
  if (!json.is_object() || !json.contains("kind") || !json["kind"].is_string()) {
    throw Error(ErrorCode::ParseError, "codec JSON needs a string 'kind'");
  }
  for (const char* key : {"N", "P"}) {
    if (!json.contains(key) || !json[key].is_number_integer() || json[key].get<int>() < 1) {
      throw Error(ErrorCode::ParseError, std::string("codec JSON needs a positive integer '") + key + "'");
    }
  }
  const int rank = json["N"].get<int>();
  const int dim = json["P"].get<int>();
  const auto kind = json["kind"].get<std::string>();
  if (kind == "linear") {
    if (rank > dim) throw Error(ErrorCode::RankTooLarge, "linear codec has N > P");
    if (!json.contains("B")) throw Error(ErrorCode::ParseError, "linear codec JSON needs 'B'");
    return LinearCodec{matrix_from_json(json["B"], rank, dim, "B")};
  }
  if (kind == "autoencoder") {
    if (!json.contains("W1") || !json.contains("W2")) {
      throw Error(ErrorCode::ParseError, "autoencoder codec JSON needs 'W1' and 'W2'");
    }
    return AutoencoderCodec{matrix_from_json(json["W1"], rank, dim + 1, "W1"),
                            matrix_from_json(json["W2"], dim, rank + 1, "W2")};
  }
  throw Error(ErrorCode::ParseError, "unknown codec kind '" + kind + "'");
}

void save_codec(const std::filesystem::path& path, const Codec& codec) {
  write_text(path, codec_to_json(codec).dump(2) + "\n");
}

Codec load_codec(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return codec_from_json(json);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace gridcodec
