#pragma once

#include <utility>

#include "oblix/types.hpp"

namespace oblix {

/// A subspace of C^n stored through an orthonormal column basis.
///
/// The basis is `ambient_dim x dim`; a zero subspace has zero columns. The
/// tolerance used when the subspace was built travels with it so that later
/// rank decisions stay consistent.
class Subspace {
 public:
  Subspace() = default;

  explicit Subspace(Matrix basis, Tolerance tol = {}) : basis_(std::move(basis)), tol_(tol) {
    tol_.validate();
    require_finite(basis_, "subspace basis");
    if (basis_.cols() > basis_.rows()) {
      throw Error(Errc::invalid_input, "subspace basis has more columns than rows");
    }
    if (basis_.cols() > 0) {
      const Matrix gram = basis_.adjoint() * basis_;
      const Real defect = (gram - Matrix::Identity(gram.rows(), gram.cols())).norm();
      if (defect > tol_.abs_eq) {
        throw Error(Errc::invalid_input, "subspace basis is not orthonormal");
      }
    }
  }

  static Subspace zero(Index ambient_dim, Tolerance tol = {}) {
    return Subspace(Matrix(ambient_dim, 0), tol);
  }

  static Subspace whole(Index ambient_dim, Tolerance tol = {}) {
    return Subspace(Matrix::Identity(ambient_dim, ambient_dim), tol);
  }

  Index ambient_dim() const noexcept { return basis_.rows(); }
  Index dim() const noexcept { return basis_.cols(); }
  bool is_zero() const noexcept { return basis_.cols() == 0; }
  const Matrix& basis() const noexcept { return basis_; }
  const Tolerance& tol() const noexcept { return tol_; }

 private:
  Matrix basis_{Matrix(0, 0)};
  Tolerance tol_{};
};

inline void require_same_ambient(const Subspace& m, const Subspace& n) {
  if (m.ambient_dim() != n.ambient_dim()) {
    throw Error(Errc::ambient_mismatch, "subspaces live in C^" + std::to_string(m.ambient_dim()) +
                                            " and C^" + std::to_string(n.ambient_dim()));
  }
}

}  // namespace oblix
