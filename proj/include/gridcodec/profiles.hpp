#pragma once

// Core domain types shared by every gridcodec module: load profiles, the
// decision task, allocations and local linearizations of the decision map.

#include <Eigen/Dense>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridcodec {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IndexSet = std::vector<int>;  // ascending, 0-based

namespace tolerance {
/// Relative tolerance on the budget constraint sum(x) == E.
inline constexpr double kBudgetRelative = 1e-9;
/// Allocations at or below this value count as unloaded.
inline constexpr double kActivity = 1e-12;

inline double budget(double energy) { return kBudgetRelative * std::max(1.0, energy); }
}  // namespace tolerance

enum class ErrorCode {
  DimensionMismatch,
  NonFinite,
  InvalidTask,
  TooLarge,
  RankTooLarge,
  UnsupportedExponent,
  InvalidBits,
  ParseError,
  EmptySelection,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Exponent of the Lp utility: a positive integer or infinity.
class Exponent {
 public:
  static Exponent finite(int p);
  static Exponent infinity() { return Exponent(0); }

  /// Accepts "inf" (also "infinity") or a positive integer literal.
  static Exponent parse(const std::string& token);

  bool is_infinite() const noexcept { return value_ == 0; }
  /// Only meaningful for finite exponents.
  int value() const noexcept { return value_; }
  std::string to_string() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  explicit Exponent(int v) : value_(v) {}
  int value_;
};

using LoadProfile = Vector;

struct ProfileDataset {
  std::vector<LoadProfile> profiles;
  int dim = 0;
  std::map<std::string, std::string> metadata;

  int size() const noexcept { return static_cast<int>(profiles.size()); }
  /// T x P copy, one profile per row.
  Matrix as_matrix() const;
};

/// Throws DimensionMismatch or NonFinite if the dataset is malformed.
void validate_dataset(const ProfileDataset& dataset);

ProfileDataset dataset_from_rows(const Matrix& rows);

struct TaskSpec {
  Exponent p = Exponent::infinity();
  double energy = 50.0;
  int dim = 0;  // 0 = take P from the data
};

void validate_task(const TaskSpec& task);
/// validate_task plus agreement of task.dim (when set) with the dataset.
void check_task_matches(const TaskSpec& task, const ProfileDataset& dataset);

struct Allocation {
  Vector x;
  double mu = 0.0;
  IndexSet active;
};

/// Affine model x*(l') = H l' + b valid on the region containing the point.
struct LinearizationPoint {
  Matrix H;
  Vector b;
  int nstar = 0;
  IndexSet active;
};

}  // namespace gridcodec
