#pragma once

#include <algorithm>
#include <vector>

#include "oblix/linalg.hpp"

namespace oblix {

/// Principal-angle cosines at or above `1 - kIntersectionTol` count as
/// directions shared by both subspaces. This is the most sensitive knob in
/// the angle code: it separates cos = 1 from cos = 1 - delta.
inline constexpr Real kIntersectionTol = 1e-8;

struct AnglePair {
  Real friedrichs_cos = 0.0;
  Real dixmier_cos = 0.0;
  Real friedrichs_sin = 1.0;
  Index intersection_dim = 0;
};

inline Matrix orthogonal_projector(const Subspace& s) {
  return s.basis() * s.basis().adjoint();
}

/// Orthonormal basis of the orthogonal complement, read off the SVD of
/// I - P_S so that the basis is reproducible.
inline Subspace complement(const Subspace& s) {
  const Index n = s.ambient_dim();
  const Index k = n - s.dim();
  if (k == 0) return Subspace::zero(n, s.tol());
  if (s.is_zero()) return Subspace::whole(n, s.tol());
  const SvdResult d = svd(identity(n) - orthogonal_projector(s));
  return Subspace(d.left.leftCols(k), s.tol());
}

/// Span of the coordinate vectors e_j, j in `indices`.
inline Subspace coordinate_subspace(Index ambient_dim, const std::vector<Index>& indices,
                                    Tolerance tol = {}) {
  Matrix basis = Matrix::Zero(ambient_dim, static_cast<Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) {
    if (indices[c] < 0 || indices[c] >= ambient_dim) {
      throw Error(Errc::invalid_input, "coordinate index out of range");
    }
    basis(indices[c], static_cast<Index>(c)) = 1.0;
  }
  return Subspace(basis, tol);
}

namespace detail {

// Principal-angle data of (M, N) from one SVD of basis_M^* basis_N.
struct PrincipalAngles {
  RealVector cosines;  // nonincreasing, clamped into [0, 1]
  Matrix left;         // k_M x k_M, rotates basis_M onto principal vectors
  Index shared = 0;    // cosines >= 1 - kIntersectionTol
};

inline PrincipalAngles principal_angles(const Subspace& m, const Subspace& n) {
  require_same_ambient(m, n);
  PrincipalAngles out;
  if (m.is_zero() || n.is_zero()) {
    out.cosines = RealVector(0);
    out.left = Matrix::Identity(m.dim(), m.dim());
    return out;
  }
  const SvdResult s = svd(m.basis().adjoint() * n.basis());
  out.cosines = s.singular_values.cwiseMin(1.0).cwiseMax(0.0);
  out.left = s.left;
  while (out.shared < out.cosines.size() && out.cosines(out.shared) >= 1.0 - kIntersectionTol) {
    ++out.shared;
  }
  return out;
}

inline Real clamp_unit(Real x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace detail

inline Subspace intersect(const Subspace& m, const Subspace& n) {
  const auto pa = detail::principal_angles(m, n);
  if (pa.shared == 0) return Subspace::zero(m.ambient_dim(), m.tol());
  return Subspace(m.basis() * pa.left.leftCols(pa.shared), m.tol());
}

/// M minus its intersection with N: the orthogonal complement of M ∩ N inside M.
inline Subspace reduce_by_intersection(const Subspace& m, const Subspace& n) {
  const auto pa = detail::principal_angles(m, n);
  const Index rest = m.dim() - pa.shared;
  if (rest == 0) return Subspace::zero(m.ambient_dim(), m.tol());
  return Subspace(m.basis() * pa.left.rightCols(rest), m.tol());
}

/// Cosine of the minimal angle, ||P_M P_N||.
inline Real dixmier_cos(const Subspace& m, const Subspace& n) {
  const auto pa = detail::principal_angles(m, n);
  return pa.cosines.size() == 0 ? 0.0 : pa.cosines(0);
}

/// Cosine of the angle between M ⊖ (M∩N) and N ⊖ (M∩N).
inline Real friedrichs_cos(const Subspace& m, const Subspace& n) {
  const auto pa = detail::principal_angles(m, n);
  return pa.shared < pa.cosines.size() ? pa.cosines(pa.shared) : 0.0;
}

/// sqrt(1 - friedrichs_cos^2), evaluated as min ||(I - P_N) x|| over unit x
/// in M ⊖ (M∩N) so that it keeps full relative accuracy near zero.
inline Real friedrichs_sin(const Subspace& m, const Subspace& n) {
  const Subspace reduced = reduce_by_intersection(m, n);
  if (reduced.is_zero()) return 1.0;
  const Matrix away = reduced.basis() - n.basis() * (n.basis().adjoint() * reduced.basis());
  const RealVector sv = singular_values(away);
  return detail::clamp_unit(sv(sv.size() - 1));
}

inline AnglePair angle_pair(const Subspace& m, const Subspace& n) {
  const auto pa = detail::principal_angles(m, n);
  AnglePair out;
  out.dixmier_cos = pa.cosines.size() == 0 ? 0.0 : pa.cosines(0);
  out.friedrichs_cos = pa.shared < pa.cosines.size() ? pa.cosines(pa.shared) : 0.0;
  out.intersection_dim = pa.shared;
  out.friedrichs_sin = friedrichs_sin(m, n);
  return out;
}

// Projector-product forms of the two cosines. Slower and less accurate near
// 0 and 1; kept as an independent cross-check of the principal-angle path.
inline Real dixmier_cos_by_projectors(const Subspace& m, const Subspace& n) {
  require_same_ambient(m, n);
  return detail::clamp_unit(operator_norm(orthogonal_projector(m) * orthogonal_projector(n)));
}

inline Real friedrichs_cos_by_projectors(const Subspace& m, const Subspace& n) {
  require_same_ambient(m, n);
  const Matrix away = identity(m.ambient_dim()) - orthogonal_projector(intersect(m, n));
  return detail::clamp_unit(
      operator_norm(orthogonal_projector(m) * orthogonal_projector(n) * away));
}

/// Dixmier's position P': M ∩ N^⊥ = M^⊥ ∩ N = {0}. Equivalent to
/// basis_M^* basis_N being square and invertible.
inline bool position_pprime(const Subspace& m, const Subspace& n) {
  require_same_ambient(m, n);
  if (m.dim() != n.dim()) return false;
  if (m.is_zero()) return true;
  const RealVector sv = singular_values(m.basis().adjoint() * n.basis());
  // The cross-Gram has norm <= 1, so the cutoff is absolute.
  return detail::count_above(sv, m.tol().rel_rank) == m.dim();
}

/// ||(P_M P_N)^k - P_{M∩N}||; equals friedrichs_cos^(2k-1).
inline Real alternating_projection_error(const Subspace& m, const Subspace& n, int k) {
  require_same_ambient(m, n);
  if (k < 1) throw Error(Errc::invalid_input, "alternating projection power must be >= 1");
  const Matrix step = orthogonal_projector(m) * orthogonal_projector(n);
  Matrix power = step;
  for (int i = 1; i < k; ++i) power = power * step;
  return operator_norm(power - orthogonal_projector(intersect(m, n)));
}

}  // namespace oblix
