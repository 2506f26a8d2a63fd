#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace epk {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RowVec = Eigen::RowVectorXcd;

/// Point in the two-dimensional real parameter plane.
struct Params {
  double alpha = 0.0;
  double beta = 0.0;

  friend bool operator==(const Params&, const Params&) = default;
};

inline double distance(Params a, Params b) {
  return std::hypot(a.alpha - b.alpha, a.beta - b.beta);
}

enum class ErrorKind {
  NearDefective,
  NoConvergence,
  EscapedRegion,
  AmbiguousMatching,
  LoopTooCloseToEP,
  DimensionMismatch,
  IndexOutOfRange,
  InvalidInput,
  ConfigError,
  IoError,
};

inline const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NearDefective: return "NearDefective";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::EscapedRegion: return "EscapedRegion";
    case ErrorKind::AmbiguousMatching: return "AmbiguousMatching";
    case ErrorKind::LoopTooCloseToEP: return "LoopTooCloseToEP";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  const char* name() const { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

/// Tolerances are relative to max(1, max-norm) so O(1) model families and
/// rescaled user input get the same treatment.
template <typename Derived>
double matrix_scale(const Eigen::MatrixBase<Derived>& m) {
  return std::max(1.0, m.cwiseAbs().maxCoeff());
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

inline void require_finite_params(Params p, const char* where) {
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta))
    throw Error(ErrorKind::InvalidInput, std::string(where) + ": non-finite parameters");
}

template <typename Derived>
void require_small_square(const Eigen::MatrixBase<Derived>& m, const char* where) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 3))
    throw Error(ErrorKind::DimensionMismatch,
                std::string(where) + ": expected a 2x2 or 3x3 matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  if (!all_finite(m))
    throw Error(ErrorKind::InvalidInput, std::string(where) + ": non-finite matrix entry");
}

}  // namespace epk
