#include "gridcodec/profiles.hpp"

#include <charconv>
#include <cmath>

namespace gridcodec {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidTask: return "InvalidTask";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::RankTooLarge: return "RankTooLarge";
    case ErrorCode::UnsupportedExponent: return "UnsupportedExponent";
    case ErrorCode::InvalidBits: return "InvalidBits";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Exponent Exponent::finite(int p) {
  if (p < 1) throw Error(ErrorCode::InvalidTask, "exponent must be >= 1, got " + std::to_string(p));
  return Exponent(p);
}

Exponent Exponent::parse(const std::string& token) {
  if (token == "inf" || token == "infinity" || token == "INF") return infinity();
  int p = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), p);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::InvalidArgument, "exponent must be a positive integer or 'inf', got '" + token + "'");
  }
  return finite(p);
}

std::string Exponent::to_string() const {
  return is_infinite() ? std::string("inf") : std::to_string(value_);
}

Matrix ProfileDataset::as_matrix() const {
  Matrix m(size(), dim);
  for (int i = 0; i < size(); ++i) m.row(i) = profiles[i].transpose();
  return m;
}

void validate_dataset(const ProfileDataset& dataset) {
  if (dataset.dim < 1) throw Error(ErrorCode::DimensionMismatch, "dataset dimension must be positive");
  if (dataset.profiles.empty()) throw Error(ErrorCode::DimensionMismatch, "dataset holds no profiles");
  for (int i = 0; i < dataset.size(); ++i) {
    const auto& profile = dataset.profiles[i];
    if (profile.size() != dataset.dim) {
      throw Error(ErrorCode::DimensionMismatch, "profile " + std::to_string(i) + " has length " +
                                                    std::to_string(profile.size()) + ", expected " +
                                                    std::to_string(dataset.dim));
    }
    if (!profile.allFinite()) {
      throw Error(ErrorCode::NonFinite, "profile " + std::to_string(i) + " has a non-finite entry");
    }
  }
}

ProfileDataset dataset_from_rows(const Matrix& rows) {
  ProfileDataset dataset;
  dataset.dim = static_cast<int>(rows.cols());
  dataset.profiles.reserve(rows.rows());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) dataset.profiles.emplace_back(rows.row(i).transpose());
  return dataset;
}

void validate_task(const TaskSpec& task) {
  if (!(task.energy > 0.0) || !std::isfinite(task.energy)) {
    throw Error(ErrorCode::InvalidTask, "energy budget must be positive and finite");
  }
  if (task.dim < 0) throw Error(ErrorCode::InvalidTask, "task dimension must be non-negative");
}

void check_task_matches(const TaskSpec& task, const ProfileDataset& dataset) {
  validate_task(task);
  if (task.dim != 0 && task.dim != dataset.dim) {
    throw Error(ErrorCode::DimensionMismatch, "task is for P=" + std::to_string(task.dim) + ", dataset has P=" +
                                                  std::to_string(dataset.dim));
  }
}

}  // namespace gridcodec
