#pragma once

#include <cmath>
#include <string>

#include "oblix/types.hpp"

namespace oblix {

enum class WeightKind { positive_definite, positive_semidefinite, mu_cone };

/// Diagonal weight D = diag(entries).
class DiagonalWeight {
 public:
  static DiagonalWeight positive_definite(const RealVector& entries) {
    for (Index i = 0; i < entries.size(); ++i) {
      if (!std::isfinite(entries(i)) || !(entries(i) > 0.0)) {
        throw Error(Errc::invalid_weight, "positive definite weight needs entries > 0");
      }
    }
    return DiagonalWeight(entries.cast<Complex>(), WeightKind::positive_definite, 0.0);
  }

  static DiagonalWeight semidefinite(const RealVector& entries) {
    for (Index i = 0; i < entries.size(); ++i) {
      if (!std::isfinite(entries(i)) || entries(i) < 0.0) {
        throw Error(Errc::invalid_weight, "semidefinite weight needs entries >= 0");
      }
    }
    return DiagonalWeight(entries.cast<Complex>(), WeightKind::positive_semidefinite, 0.0);
  }

  /// Entries from C_mu = {z != 0 : |Im z| <= mu Re z}.
  static DiagonalWeight mu_cone(const Vector& entries, Real mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw Error(Errc::invalid_weight, "mu must be >= 0");
    require_finite(entries, "weight");
    for (Index i = 0; i < entries.size(); ++i) {
      const Complex z = entries(i);
      // Relative slack absorbs rounding on samples drawn at the cone boundary.
      if (z == Complex(0.0, 0.0) || std::abs(z.imag()) > mu * z.real() * (1.0 + 1e-12)) {
        throw Error(Errc::invalid_weight, "entry " + std::to_string(i) + " is outside the mu-cone");
      }
    }
    return DiagonalWeight(entries, WeightKind::mu_cone, mu);
  }

  Index dim() const noexcept { return entries_.size(); }
  const Vector& entries() const noexcept { return entries_; }
  WeightKind kind() const noexcept { return kind_; }
  Real mu() const noexcept { return mu_; }
  bool is_real() const noexcept { return kind_ != WeightKind::mu_cone; }

  RealVector real_entries() const { return entries_.real(); }
  Matrix as_matrix() const { return entries_.asDiagonal(); }

  /// (D^*)^{-1}; defined only when every entry is nonzero.
  DiagonalWeight adjoint_inverse() const {
    Vector inv(entries_.size());
    for (Index i = 0; i < entries_.size(); ++i) {
      if (entries_(i) == Complex(0.0, 0.0)) throw Error(Errc::invalid_weight, "weight is singular");
      inv(i) = 1.0 / std::conj(entries_(i));
    }
    if (kind_ == WeightKind::mu_cone) return DiagonalWeight(inv, kind_, mu_);
    return DiagonalWeight(inv, WeightKind::positive_definite, 0.0);
  }

 private:
  DiagonalWeight(Vector entries, WeightKind kind, Real mu)
      : entries_(std::move(entries)), kind_(kind), mu_(mu) {}

  Vector entries_;
  WeightKind kind_;
  Real mu_;
};

}  // namespace oblix
