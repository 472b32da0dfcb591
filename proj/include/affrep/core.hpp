#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace affrep {

using Point = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

enum class ErrorCode {
  overflow,
  unsupported_branch,
  singular_system,
  domain_error,
  empty_curve,
  degenerate_ordering,
  alpha1_zero,
  inconsistent,
  not_periodic,
  orbit_leaves_quadrant,
  no_string,
  not_invertible,
  unsupported_case,
  shape_mismatch,
  corner_without_periodicity,
  unsupported_regime,
  parse_error,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::overflow: return "Overflow";
    case ErrorCode::unsupported_branch: return "UnsupportedBranch";
    case ErrorCode::singular_system: return "SingularSystem";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::empty_curve: return "EmptyCurve";
    case ErrorCode::degenerate_ordering: return "DegenerateOrdering";
    case ErrorCode::alpha1_zero: return "Alpha1Zero";
    case ErrorCode::inconsistent: return "Inconsistent";
    case ErrorCode::not_periodic: return "NotPeriodic";
    case ErrorCode::orbit_leaves_quadrant: return "OrbitLeavesPositiveQuadrant";
    case ErrorCode::no_string: return "NoString";
    case ErrorCode::not_invertible: return "NotInvertible";
    case ErrorCode::unsupported_case: return "UnsupportedCase";
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::corner_without_periodicity: return "CornerWithoutPeriodicity";
    case ErrorCode::unsupported_regime: return "UnsupportedRegime";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library is an Error carrying a machine-readable code.
/// `index` is set where a position is meaningful (e.g. the first orbit step
/// that leaves the positive quadrant).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<long> index = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<long> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<long> index_;
};

struct Tolerances {
  double orbit = 1e-8;        // periodicity / orbit matching (Euclidean, absolute)
  double relation = 1e-10;    // linear-algebra residuals, scaled by dimension where stated
  double magnitude_bound = 1e12;
};

inline bool near_zero(double x, double scale, double rel = 1e-12) {
  return std::abs(x) <= rel * std::max(1.0, std::abs(scale));
}

inline bool strictly_positive(const Point& p) { return p.x() > 0.0 && p.y() > 0.0; }

}  // namespace affrep
