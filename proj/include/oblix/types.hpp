#pragma once

#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "oblix/error.hpp"

namespace oblix {

using Real = double;
using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Real kInfinity = std::numeric_limits<Real>::infinity();

/// Numerical thresholds shared by every operation.
///
/// `rel_rank` is the relative singular-value cutoff used for rank decisions;
/// `abs_eq` is the absolute tolerance for matrix identities.
struct Tolerance {
  Real rel_rank = 1e-10;
  Real abs_eq = 1e-8;

  void validate() const {
    if (!(rel_rank > 0.0 && rel_rank < 1.0 && abs_eq > 0.0)) {
      throw Error(Errc::invalid_input, "tolerance must satisfy 0 < rel_rank < 1 and abs_eq > 0");
    }
  }
};

inline bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

inline void require_finite(const Matrix& m, const char* what) {
  if (!all_finite(m)) throw Error(Errc::invalid_input, std::string(what) + " has non-finite entries");
}

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

}  // namespace oblix
