#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualgraph {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

enum class Errc {
  NonSymmetric,
  ColumnMismatch,
  LengthMismatch,
  AsymmetricInput,
  NegativeWeight,
  DimensionMismatch,
  RowMismatch,
  ZeroCovariance,
  IndefiniteInput,
  OrderMismatch,
  SingularPascal,
  InvalidArgument,
  ParseError,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::NonSymmetric: return "NonSymmetric";
    case Errc::ColumnMismatch: return "ColumnMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::AsymmetricInput: return "AsymmetricInput";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::RowMismatch: return "RowMismatch";
    case Errc::ZeroCovariance: return "ZeroCovariance";
    case Errc::IndefiniteInput: return "IndefiniteInput";
    case Errc::OrderMismatch: return "OrderMismatch";
    case Errc::SingularPascal: return "SingularPascal";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Numerical failures (as opposed to malformed input) map to CLI exit code 3.
inline bool is_numerical(Errc code) {
  return code == Errc::NonSymmetric || code == Errc::ZeroCovariance ||
         code == Errc::IndefiniteInput || code == Errc::SingularPascal;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool condition, Errc code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

/// Non-fatal diagnostics collected by estimators (rank deficiency, degenerate fits).
using Warnings = std::vector<std::string>;

}  // namespace dualgraph
