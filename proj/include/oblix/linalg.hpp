#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "oblix/subspace.hpp"
#include "oblix/types.hpp"

namespace oblix {

struct SvdResult {
  Matrix left;                  // rows x rows, unitary
  RealVector singular_values;   // min(rows, cols), nonincreasing
  Matrix right;                 // cols x cols, unitary
};

namespace detail {

// Rotates v so that its largest-magnitude entry (first one on ties) is real
// and positive, and returns the applied unit factor.
inline Complex normalize_phase(Eigen::Ref<Vector> v) {
  Index best = 0;
  Real best_abs = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const Real a = std::abs(v(i));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs <= 0.0) return Complex(1.0, 0.0);
  const Complex phase = std::conj(v(best)) / best_abs;
  v *= phase;
  v(best) = Complex(v(best).real(), 0.0);
  return phase;
}

inline Real cutoff(const RealVector& sv, const Tolerance& tol) {
  return sv.size() == 0 ? 0.0 : tol.rel_rank * sv(0);
}

inline Index count_above(const RealVector& sv, Real threshold) {
  Index r = 0;
  while (r < sv.size() && sv(r) > threshold) ++r;
  return r;
}

}  // namespace detail

/// Full singular value decomposition with a deterministic phase convention:
/// the largest-magnitude entry of each left singular vector is real
/// positive, and the paired right vector receives the same phase so that
/// the product is unchanged. Unpaired columns are normalized on their own.
inline SvdResult svd(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw Error(Errc::invalid_input, "svd of an empty matrix");
  require_finite(m, "matrix");
  Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  const Index paired = out.singular_values.size();
  for (Index i = 0; i < paired; ++i) {
    const Complex phase = detail::normalize_phase(out.left.col(i));
    out.right.col(i) *= phase;
  }
  for (Index i = paired; i < out.left.cols(); ++i) detail::normalize_phase(out.left.col(i));
  for (Index i = paired; i < out.right.cols(); ++i) detail::normalize_phase(out.right.col(i));
  return out;
}

/// Singular values only; empty input yields an empty vector.
inline RealVector singular_values(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return RealVector(0);
  require_finite(m, "matrix");
  Eigen::JacobiSVD<Matrix> solver(m);
  return solver.singularValues();
}

inline Index numerical_rank(const Matrix& m, const Tolerance& tol = {}) {
  const RealVector sv = singular_values(m);
  return detail::count_above(sv, detail::cutoff(sv, tol));
}

inline Real operator_norm(const Matrix& m) {
  const RealVector sv = singular_values(m);
  return sv.size() == 0 ? 0.0 : sv(0);
}

/// Moore-Penrose pseudoinverse; singular values at or below the rank cutoff
/// are treated as exact zeros.
inline Matrix pinv(const Matrix& m, const Tolerance& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0) return Matrix::Zero(m.cols(), m.rows());
  const SvdResult s = svd(m);
  const Index r = detail::count_above(s.singular_values, detail::cutoff(s.singular_values, tol));
  Matrix out = Matrix::Zero(m.cols(), m.rows());
  for (Index i = 0; i < r; ++i) {
    out.noalias() += (s.right.col(i) / s.singular_values(i)) * s.left.col(i).adjoint();
  }
  return out;
}

/// Reduced minimum modulus: the smallest singular value above the rank
/// cutoff, or +inf for the zero operator.
///
/// The cutoff is `rel_rank * reference`; by default the reference is the
/// largest singular value of `t` itself. Callers comparing sub-blocks of a
/// fixed operator pass the norm of the parent so that numerically vanishing
/// blocks are recognized as zero.
inline Real reduced_min_modulus(const Matrix& t, const Tolerance& tol = {}, Real reference = -1.0) {
  const RealVector sv = singular_values(t);
  if (sv.size() == 0) return kInfinity;
  const Real threshold = tol.rel_rank * (reference > 0.0 ? reference : sv(0));
  const Index r = detail::count_above(sv, threshold);
  return r == 0 ? kInfinity : sv(r - 1);
}

inline Subspace orthonormal_range(const Matrix& m, const Tolerance& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0) return Subspace::zero(m.rows(), tol);
  const SvdResult s = svd(m);
  const Index r = detail::count_above(s.singular_values, detail::cutoff(s.singular_values, tol));
  return Subspace(s.left.leftCols(r), tol);
}

inline Subspace nullspace(const Matrix& m, const Tolerance& tol = {}) {
  if (m.cols() == 0) return Subspace::zero(0, tol);
  if (m.rows() == 0) return Subspace::whole(m.cols(), tol);
  const SvdResult s = svd(m);
  const Index r = detail::count_above(s.singular_values, detail::cutoff(s.singular_values, tol));
  return Subspace(s.right.rightCols(m.cols() - r), tol);
}

}  // namespace oblix
