#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "oblix/geometry.hpp"
#include "oblix/linalg.hpp"
#include "oblix/weights.hpp"

namespace oblix {

/// An idempotent matrix together with orthonormal bases of its range and
/// nullspace, both read off a single SVD of the matrix.
struct ObliqueProjection {
  Matrix matrix;
  Subspace range;
  Subspace nullsp;

  Index ambient_dim() const noexcept { return matrix.rows(); }

  static ObliqueProjection from_matrix(const Matrix& p, const Tolerance& tol = {}) {
    if (p.rows() != p.cols()) throw Error(Errc::invalid_input, "projection must be square");
    require_finite(p, "projection");
    const Index n = p.rows();
    if (n == 0) return {p, Subspace::zero(0, tol), Subspace::zero(0, tol)};
    const SvdResult s = svd(p);
    const Real norm = s.singular_values(0);
    const Real defect = operator_norm(p * p - p);
    if (defect > tol.abs_eq * std::max(1.0, norm * norm)) {
      throw Error(Errc::invalid_input, "matrix is not idempotent");
    }
    const Index r = detail::count_above(s.singular_values, detail::cutoff(s.singular_values, tol));
    return {p, Subspace(s.left.leftCols(r), tol), Subspace(s.right.rightCols(n - r), tol)};
  }
};

/// Outcome of the block test for a semidefinite weight and a subspace S.
/// With D = [a b; b* c] relative to S ⊕ S^⊥, the pair is compatible when
/// R(b) ⊆ R(a), and the reduced solution of a x = b is a^† b.
struct CompatibilityReport {
  bool compatible = false;
  Index n_subspace_dim = 0;  // dim(N(D) ∩ S)
  Matrix reduced_solution;   // k x (n - k)
};

namespace detail {

inline Real scale_of(const Matrix& m) { return std::max(1.0, operator_norm(m)); }

inline void require_psd(const Matrix& d, const Subspace& s) {
  if (d.rows() != d.cols()) throw Error(Errc::invalid_weight, "weight must be square");
  if (d.rows() != s.ambient_dim()) {
    throw Error(Errc::ambient_mismatch, "weight and subspace have different dimensions");
  }
  require_finite(d, "weight");
  const Real scale = scale_of(d);
  if ((d - d.adjoint()).norm() > s.tol().abs_eq * scale) {
    throw Error(Errc::invalid_weight, "weight is not selfadjoint");
  }
  if (d.rows() == 0) return;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(d, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -s.tol().abs_eq * scale) {
    throw Error(Errc::invalid_weight, "weight is not positive semidefinite");
  }
}

struct Blocks {
  Subspace perp;
  Matrix a;  // U^* D U
  Matrix b;  // U^* D W
};

inline Blocks blocks(const Matrix& d, const Subspace& s) {
  Blocks out{complement(s), Matrix(), Matrix()};
  out.a = s.basis().adjoint() * d * s.basis();
  out.b = s.basis().adjoint() * d * out.perp.basis();
  return out;
}

}  // namespace detail

inline CompatibilityReport compatibility(const Matrix& d, const Subspace& s) {
  detail::require_psd(d, s);
  const Tolerance& tol = s.tol();
  const auto blk = detail::blocks(d, s);
  CompatibilityReport out;
  if (s.is_zero() || blk.perp.is_zero()) {
    out.compatible = true;
    out.reduced_solution = Matrix::Zero(s.dim(), blk.perp.dim());
    out.n_subspace_dim = s.is_zero() ? 0 : intersect(nullspace(d, tol), s).dim();
    return out;
  }
  // R(b) ⊆ R(a) is tested as (I - a a^†) b = 0. Directions of a dropped by
  // the rank cutoff can leave a residual of order sqrt(rel_rank) in b.
  const Matrix a_pinv = pinv(blk.a, tol);
  const Matrix residual = blk.b - blk.a * (a_pinv * blk.b);
  out.compatible = operator_norm(residual) <= 10.0 * std::sqrt(tol.rel_rank) * detail::scale_of(d);
  out.reduced_solution = a_pinv * blk.b;
  out.n_subspace_dim = intersect(nullspace(d, tol), s).dim();
  return out;
}

/// The distinguished D-selfadjoint projection onto S,
///   P = U U^* + U (a^† b) W^*,
/// valid for every positive semidefinite D (diagonal or not).
inline ObliqueProjection distinguished_projection(const Matrix& d, const Subspace& s) {
  const CompatibilityReport rep = compatibility(d, s);
  if (!rep.compatible) throw Error(Errc::precondition_failed, "pair (D, S) is not compatible");
  const Index n = s.ambient_dim();
  Matrix p = orthogonal_projector(s);
  if (!s.is_zero() && s.dim() < n) {
    p += s.basis() * rep.reduced_solution * complement(s).basis().adjoint();
  }
  return ObliqueProjection::from_matrix(p, s.tol());
}

inline ObliqueProjection distinguished_projection(const DiagonalWeight& d, const Subspace& s) {
  if (!d.is_real()) throw Error(Errc::invalid_weight, "block formula needs a real semidefinite weight");
  return distinguished_projection(d.as_matrix(), s);
}

/// N = N(D) ∩ S, the freedom left in the family of D-selfadjoint projections.
inline Subspace family_freedom(const Matrix& d, const Subspace& s) {
  detail::require_psd(d, s);
  return intersect(nullspace(d, s.tol()), s);
}

/// Member Q = P_{D,S} + z of the family; z must map S^⊥ into N(D) ∩ S
/// (equivalently z = P_N z P_{S^⊥}).
inline ObliqueProjection projection_family(const Matrix& d, const Subspace& s, const Matrix& z) {
  const ObliqueProjection base = distinguished_projection(d, s);
  const Index n = s.ambient_dim();
  if (z.rows() != n || z.cols() != n) throw Error(Errc::invalid_parameter, "parameter has wrong shape");
  require_finite(z, "family parameter");
  const Matrix pn = orthogonal_projector(family_freedom(d, s));
  const Matrix perp = identity(n) - orthogonal_projector(s);
  const Real defect = operator_norm(z - pn * z * perp);
  if (defect > s.tol().abs_eq * std::max(1.0, operator_norm(z))) {
    throw Error(Errc::invalid_parameter, "parameter does not map S^perp into N(D) ∩ S");
  }
  return ObliqueProjection::from_matrix(base.matrix + z, s.tol());
}

/// A (A^* D A)^{-1} A^* D.
///
/// Real weights go through a Householder QR of D^{1/2} A with rows sorted by
/// decreasing weight, which stays accurate across wide weight ranges.
/// Complex (mu-cone) weights use the Gram matrix directly, guarded by
/// cond(A^* D A) <= 1e12.
inline ObliqueProjection weighted_projection(const Matrix& a, const DiagonalWeight& d,
                                             const Tolerance& tol = {}) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (d.dim() != m) throw Error(Errc::ambient_mismatch, "weight size does not match rows of A");
  require_finite(a, "A");
  if (n == 0 || m == 0) throw Error(Errc::invalid_input, "A must be nonempty");
  Matrix p;
  if (d.is_real()) {
    const RealVector w = d.real_entries();
    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return w(i) > w(j); });
    Matrix scaled(m, n);
    Matrix rhs = Matrix::Zero(m, m);
    for (Index r = 0; r < m; ++r) {
      const Index src = order[static_cast<std::size_t>(r)];
      const Real root = std::sqrt(w(src));
      scaled.row(r) = root * a.row(src);
      rhs(r, src) = root;
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
    qr.setThreshold(tol.rel_rank);
    if (qr.rank() < n) throw Error(Errc::singular_gram, "A^* D A is numerically singular");
    p = a * qr.solve(rhs);
  } else {
    const Matrix gram = a.adjoint() * d.entries().asDiagonal() * a;
    const RealVector sv = singular_values(gram);
    if (!(sv(n - 1) > 0.0) || sv(0) / sv(n - 1) > 1e12) {
      throw Error(Errc::singular_gram, "A^* D A is numerically singular");
    }
    p = a * gram.fullPivLu().solve(a.adjoint() * d.entries().asDiagonal());
  }
  return ObliqueProjection::from_matrix(p, tol);
}

/// Minimal-angle sine between range and nullspace; ||P|| is its reciprocal.
inline Real range_nullspace_sine(const ObliqueProjection& p) {
  if (p.range.is_zero()) throw Error(Errc::invalid_input, "zero projection has no Ljance-Ptak norm");
  if (p.nullsp.is_zero()) return 1.0;
  const Matrix& r = p.range.basis();
  const Matrix& nb = p.nullsp.basis();
  const RealVector sv = singular_values(r - nb * (nb.adjoint() * r));
  return std::clamp(sv(sv.size() - 1), 0.0, 1.0);
}

/// (1 - c0[R(P), N(P)]^2)^{-1/2}. The square root is taken through the
/// sine of the minimal angle, which keeps relative accuracy for large norms.
inline Real ljance_ptak_norm(const ObliqueProjection& p) {
  const Real sine = range_nullspace_sine(p);
  // c0 >= 1 - 1e-12  <=>  sine <= sqrt(1 - (1 - 1e-12)^2)
  constexpr Real kMinSine = 1.4142135623e-6;
  if (sine <= kMinSine) {
    throw Error(Errc::degenerate_angle, "range and nullspace are numerically collapsed");
  }
  return 1.0 / sine;
}

/// Checks that P_{D,S} computed in the whole space equals the projection
/// computed for the compression of D to T, padded by zero on T^⊥.
inline bool compression_check(const Matrix& d, const Subspace& s, const Subspace& t) {
  require_same_ambient(s, t);
  detail::require_psd(d, s);
  const Tolerance& tol = s.tol();
  const Index n = s.ambient_dim();
  const Matrix pt = orthogonal_projector(t);
  const Matrix outside = s.basis() - pt * s.basis();
  if (outside.size() > 0 && operator_norm(outside) > tol.abs_eq) {
    throw Error(Errc::precondition_failed, "S is not contained in T");
  }
  if (operator_norm(pt * d - d * pt) > tol.abs_eq * detail::scale_of(d)) {
    throw Error(Errc::precondition_failed, "P_T does not commute with D");
  }
  const Matrix full = distinguished_projection(d, s).matrix;
  const Matrix& ut = t.basis();
  const Matrix d1 = ut.adjoint() * d * ut;
  const Subspace s1 = orthonormal_range(ut.adjoint() * s.basis(), tol);
  Matrix padded = Matrix::Zero(n, n);
  if (!t.is_zero()) padded = ut * distinguished_projection(d1, s1).matrix * ut.adjoint();
  return operator_norm(full - padded) <= tol.abs_eq * std::max(1.0, operator_norm(full));
}

}  // namespace oblix
