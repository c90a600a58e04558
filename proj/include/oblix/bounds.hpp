#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "oblix/geometry.hpp"
#include "oblix/index_set.hpp"
#include "oblix/oblique.hpp"
#include "oblix/parallel.hpp"
#include "oblix/random.hpp"

namespace oblix {

// ---------------------------------------------------------------------------
// Diagonal projections in position P' and the Ben-Tal–Teboulle hull
// ---------------------------------------------------------------------------

namespace detail {

inline void require_full_column_rank(const Matrix& a, const Tolerance& tol) {
  if (a.rows() < a.cols() || a.cols() == 0 || numerical_rank(a, tol) < a.cols()) {
    throw Error(Errc::not_full_rank, "A must have full column rank");
  }
}

// log|det| of a square matrix via partial-pivot LU; -inf when singular.
inline Real log_abs_det(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  const Eigen::PartialPivLU<Matrix> lu(m);
  Real out = 0.0;
  for (Index i = 0; i < m.rows(); ++i) out += std::log(std::abs(lu.matrixLU()(i, i)));
  return out;
}

inline Real log_volume(const Matrix& a) {
  Real out = 0.0;
  const RealVector sv = singular_values(a);
  for (Index i = 0; i < sv.size(); ++i) out += std::log(sv(i));
  return out;
}

}  // namespace detail

/// All n-element index sets Q with A_Q (rows Q of A) invertible.
///
/// Two tests run for every candidate and must agree: the determinant test
/// |det A_Q| > rel_rank * prod sigma_i(A), and position P' between R(Q)
/// and R(A).
inline std::vector<IndexSet> enumerate_JA(const Matrix& a, const Tolerance& tol = {}) {
  require_finite(a, "A");
  const Index m = a.rows();
  const Index n = a.cols();
  require_enumerable(m);
  detail::require_full_column_rank(a, tol);
  const Subspace range = orthonormal_range(a, tol);
  const Real log_threshold = std::log(tol.rel_rank) + detail::log_volume(a);
  const auto masks = k_subset_masks(m, n);
  std::vector<char> keep(masks.size(), 0);
  detail::parallel_for(masks.size(), [&](std::size_t i) {
    const IndexSet q = IndexSet::from_mask(m, masks[i]);
    const bool by_det = detail::log_abs_det(select_rows(a, q)) > log_threshold;
    const bool by_position = position_pprime(q.coordinate_subspace(tol), range);
    if (by_det != by_position) {
      throw Error(Errc::degenerate_angle,
                  "determinant and position tests disagree for Q = " + to_string(q));
    }
    keep[i] = by_det ? 1 : 0;
  });
  std::vector<IndexSet> out;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (keep[i]) out.push_back(IndexSet::from_mask(m, masks[i]));
  }
  return out;
}

/// A (Q A)^{-1} Q for a diagonal projection Q = Q_J with A_J invertible.
inline Matrix coordinate_oblique_matrix(const Matrix& a, const IndexSet& q) {
  if (q.size() != a.cols()) throw Error(Errc::invalid_input, "|Q| must equal the column count of A");
  const Matrix x = a * select_rows(a, q).fullPivLu().inverse();
  Matrix p = Matrix::Zero(a.rows(), a.rows());
  for (Index c = 0; c < q.size(); ++c) p.col(q.indices()[static_cast<std::size_t>(c)]) = x.col(c);
  return p;
}

struct HullMember {
  IndexSet index_set;
  Real weight = 0.0;
  ObliqueProjection projection;
};

struct HullDecomposition {
  std::vector<HullMember> members;

  Matrix combination() const {
    if (members.empty()) return Matrix(0, 0);
    Matrix out = Matrix::Zero(members.front().projection.matrix.rows(),
                              members.front().projection.matrix.cols());
    for (const auto& m : members) out += m.weight * m.projection.matrix;
    return out;
  }

  Real weight_sum() const {
    Real s = 0.0;
    for (const auto& m : members) s += m.weight;
    return s;
  }
};

/// Writes A (A^* D A)^{-1} A^* D as a convex combination of the projections
/// A (Q A)^{-1} Q, Q in J(A), with weights proportional to
/// det(D_Q) |det(A_Q)|^2. Weights are formed in log space and normalized by
/// the largest log before exponentiation.
inline HullDecomposition bental_teboulle(const Matrix& a, const DiagonalWeight& d,
                                         const Tolerance& tol = {}) {
  if (d.kind() != WeightKind::positive_definite) {
    throw Error(Errc::invalid_weight, "hull decomposition needs a positive definite weight");
  }
  if (d.dim() != a.rows()) throw Error(Errc::ambient_mismatch, "weight size does not match rows of A");
  const std::vector<IndexSet> sets = enumerate_JA(a, tol);
  const RealVector w = d.real_entries();
  std::vector<Real> logs(sets.size());
  HullDecomposition out;
  out.members.resize(sets.size());
  detail::parallel_for(sets.size(), [&](std::size_t i) {
    const IndexSet& q = sets[i];
    Real lw = 2.0 * detail::log_abs_det(select_rows(a, q));
    for (Index j : q.indices()) lw += std::log(w(j));
    logs[i] = lw;
    out.members[i].index_set = q;
    out.members[i].projection = ObliqueProjection::from_matrix(coordinate_oblique_matrix(a, q), tol);
  });
  const Real top = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(top)) throw Error(Errc::numerical_underflow, "all hull weights vanished");
  Real denom = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    out.members[i].weight = std::exp(logs[i] - top);
    denom += out.members[i].weight;
  }
  for (auto& m : out.members) m.weight /= denom;
  return out;
}

// ---------------------------------------------------------------------------
// Stewart–O'Leary quantities
// ---------------------------------------------------------------------------

/// Smallest nonzero singular value of the rows I of an orthonormal basis of
/// S; +inf when those rows vanish.
inline Real m_I(const Subspace& s, const IndexSet& rows) {
  if (rows.empty()) throw Error(Errc::invalid_input, "m_I needs a nonempty index set");
  if (rows.ambient_dim() != s.ambient_dim()) throw Error(Errc::ambient_mismatch, "index set and subspace differ");
  if (s.is_zero()) return kInfinity;
  // The basis is orthonormal, so the cutoff is absolute.
  return reduced_min_modulus(select_rows(s.basis(), rows), s.tol(), 1.0);
}

/// Norm of P_{Q,S} for a diagonal projection Q in position P' with S.
inline Real coordinate_projection_norm(const Subspace& s, const IndexSet& q) {
  const ObliqueProjection p =
      ObliqueProjection::from_matrix(coordinate_oblique_matrix(s.basis(), q), s.tol());
  return ljance_ptak_norm(p);
}

struct BoundReport {
  std::optional<Real> sup_estimate;  // sampled sup of ||P_{D,S}||; empty when unsampled
  Real max_over_Q = 0.0;
  Real min_mI = kInfinity;
  Real K_constant = 0.0;
  IndexSet witness_Q;
  IndexSet witness_I;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  /// |max_over_Q * min_mI - 1|
  Real identity_residual() const { return std::abs(max_over_Q * min_mI - 1.0); }
};

inline Real weighted_projection_norm(const Subspace& s, const DiagonalWeight& d) {
  return operator_norm(weighted_projection(s.basis(), d, s.tol()).matrix);
}

/// Exact enumeration of max ||P_{Q,S}|| over diagonal projections in
/// position P' with S, of min m_I over nonempty I, and optionally a sampled
/// estimate of sup ||P_{D,S}|| over positive diagonal D (entries
/// log-uniform on [1e-6, 1e6]).
inline BoundReport stewart_oleary(const Subspace& s, std::size_t samples = 0, std::uint64_t seed = 0) {
  const Index m = s.ambient_dim();
  const Index k = s.dim();
  if (k == 0) throw Error(Errc::invalid_input, "bounds need a nonzero subspace");
  require_enumerable(m);
  const Tolerance& tol = s.tol();

  const auto q_masks = k_subset_masks(m, k);
  std::vector<Real> q_norms(q_masks.size(), -1.0);
  detail::parallel_for(q_masks.size(), [&](std::size_t i) {
    const IndexSet q = IndexSet::from_mask(m, q_masks[i]);
    if (position_pprime(q.coordinate_subspace(tol), s)) q_norms[i] = coordinate_projection_norm(s, q);
  });

  const std::size_t all = (std::size_t{1} << m) - 1;
  std::vector<Real> mi(all);
  detail::parallel_for(all, [&](std::size_t i) {
    mi[i] = m_I(s, IndexSet::from_mask(m, static_cast<IndexSet::Mask>(i + 1)));
  });

  BoundReport rep;
  rep.samples = samples;
  rep.seed = seed;
  std::size_t best_q = 0;
  for (std::size_t i = 0; i < q_norms.size(); ++i) {
    if (q_norms[i] > rep.max_over_Q) {
      rep.max_over_Q = q_norms[i];
      best_q = i;
    }
  }
  rep.witness_Q = IndexSet::from_mask(m, q_masks[best_q]);
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < all; ++i) {
    if (mi[i] < rep.min_mI) {
      rep.min_mI = mi[i];
      best_i = i;
    }
  }
  rep.witness_I = IndexSet::from_mask(m, static_cast<IndexSet::Mask>(best_i + 1));
  rep.K_constant = rep.max_over_Q;

  if (samples > 0) {
    Rng rng(seed);
    std::vector<DiagonalWeight> ds;
    ds.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) ds.push_back(sample_positive_weight(rng, m));
    std::vector<Real> norms(samples);
    detail::parallel_for(samples, [&](std::size_t i) { norms[i] = weighted_projection_norm(s, ds[i]); });
    rep.sup_estimate = *std::max_element(norms.begin(), norms.end());
  }
  return rep;
}

/// K[S, D] computed from angles: (1 - sup_J c[S, H_J]^2)^{-1/2}, with the
/// sine taken directly for accuracy.
inline Real compatibility_constant(const Subspace& s) {
  const Index m = s.ambient_dim();
  require_enumerable(m);
  const std::size_t all = std::size_t{1} << m;
  std::vector<Real> sines(all);
  detail::parallel_for(all, [&](std::size_t i) {
    sines[i] = friedrichs_sin(s, IndexSet::from_mask(m, i).coordinate_subspace(s.tol()));
  });
  return 1.0 / *std::min_element(sines.begin(), sines.end());
}

struct LimitReport {
  std::vector<std::pair<int, Real>> sequence;  // (k, ||P_{D0 + I/k, S}||)
  Real semidefinite_norm = 0.0;
  Real stewart_bound = 0.0;
  bool converges = false;
  bool within_bound = false;

  bool ok() const { return converges && within_bound; }
};

/// Follows D_k = D0 + I/k for k in {1, 10, 100, 1000} toward a semidefinite
/// weight D0 and compares with ||P_{D0,S}|| from the block formula.
///
/// The gap to the limit is O(1/k), so it cannot reach 1e-6 at k = 1000 in
/// general. Convergence here means: the gaps are nonincreasing (1e-6
/// slack) and the last gap is at most a fifth of the gap at k = 10 (plus
/// 1e-6). Every norm must stay below the enumerated Stewart bound.
inline LimitReport semidefinite_limit_check(const Subspace& s, const DiagonalWeight& d0) {
  if (d0.kind() == WeightKind::mu_cone) throw Error(Errc::invalid_weight, "limit check needs a real weight");
  if (d0.dim() != s.ambient_dim()) throw Error(Errc::ambient_mismatch, "weight and subspace differ");
  constexpr Real kSlack = 1e-6;
  LimitReport rep;
  rep.stewart_bound = stewart_oleary(s).max_over_Q;
  rep.semidefinite_norm = operator_norm(distinguished_projection(d0, s).matrix);
  const RealVector base = d0.real_entries();
  std::vector<Real> gaps;
  for (int k : {1, 10, 100, 1000}) {
    const RealVector shifted = base.array() + 1.0 / k;
    const Real norm = weighted_projection_norm(s, DiagonalWeight::positive_definite(shifted));
    rep.sequence.emplace_back(k, norm);
    gaps.push_back(std::abs(norm - rep.semidefinite_norm));
  }
  rep.converges = gaps[2] <= gaps[1] + kSlack && gaps[3] <= gaps[2] + kSlack &&
                  gaps[3] <= 0.2 * gaps[1] + kSlack;
  rep.within_bound = rep.semidefinite_norm <= rep.stewart_bound + 1e-8;
  for (const auto& [k, norm] : rep.sequence) {
    if (norm > rep.stewart_bound + 1e-8) rep.within_bound = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Complex weights
// ---------------------------------------------------------------------------

struct DualityReport {
  Real mu = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;        // SingularGram on either side
  std::size_t failures = 0;        // accepted samples with discrepancy > 1e-7
  Real max_discrepancy = 0.0;
  Real chi_A = 0.0;                // running max of ||A (A^* D A)^{-1} A^* D||
  Real chi_Z = 0.0;                // running max of the complementary norm
};

inline constexpr Real kDualityTol = 1e-7;

/// For D sampled in the mu-cone, compares
///   ||A (A^* D A)^{-1} A^* D||   with   ||Z (Z^* E Z)^{-1} Z^* E||,  E = (D^*)^{-1},
/// where the columns of Z span R(A)^⊥. Both are projections whose range and
/// nullspace are the orthogonal complements of each other's, so the norms
/// agree sample by sample. D -> (D^*)^{-1} maps the cone onto itself.
inline DualityReport complex_cone_duality(const Matrix& a, Real mu, std::size_t samples,
                                          std::uint64_t seed, const Tolerance& tol = {}) {
  require_finite(a, "A");
  detail::require_full_column_rank(a, tol);
  if (a.rows() == a.cols()) throw Error(Errc::invalid_input, "A must have more rows than columns");
  const Matrix z = nullspace(a.adjoint(), tol).basis();
  DualityReport rep;
  rep.mu = mu;
  rep.samples = samples;
  rep.seed = seed;
  Rng rng(seed);
  std::vector<DiagonalWeight> ds;
  ds.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) ds.push_back(sample_mu_cone_weight(rng, a.rows(), mu));
  struct Sample {
    bool rejected = false;
    Real lhs = 0.0;
    Real rhs = 0.0;
  };
  std::vector<Sample> out(samples);
  detail::parallel_for(samples, [&](std::size_t i) {
    try {
      out[i].lhs = operator_norm(weighted_projection(a, ds[i], tol).matrix);
      out[i].rhs = operator_norm(weighted_projection(z, ds[i].adjoint_inverse(), tol).matrix);
    } catch (const Error& e) {
      if (e.code() != Errc::singular_gram) throw;
      out[i].rejected = true;
    }
  });
  for (const auto& smp : out) {
    if (smp.rejected) {
      ++rep.rejected;
      continue;
    }
    ++rep.accepted;
    const Real gap = std::abs(smp.lhs - smp.rhs);
    rep.max_discrepancy = std::max(rep.max_discrepancy, gap);
    if (gap > kDualityTol) ++rep.failures;
    rep.chi_A = std::max(rep.chi_A, smp.lhs);
    rep.chi_Z = std::max(rep.chi_Z, smp.rhs);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Truncation experiments
// ---------------------------------------------------------------------------

/// A vector sequence (x_0, x_1, ...) truncated to its first m entries.
struct TailRule {
  enum class Kind { geometric, finite };

  Kind kind = Kind::geometric;
  Real ratio = 0.5;
  std::vector<Real> coefficients;

  static TailRule geometric(Real ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw Error(Errc::invalid_input, "geometric ratio must be in (0, 1)");
    return {Kind::geometric, ratio, {}};
  }
  static TailRule finite(std::vector<Real> coefficients) {
    return {Kind::finite, 0.0, std::move(coefficients)};
  }
  static TailRule unit() { return finite({1.0}); }

  /// First m entries, normalized.
  Vector truncated(Index m) const {
    Vector v = Vector::Zero(m);
    for (Index i = 0; i < m; ++i) {
      if (kind == Kind::geometric) {
        v(i) = std::pow(ratio, static_cast<Real>(i));
      } else if (static_cast<std::size_t>(i) < coefficients.size()) {
        v(i) = coefficients[static_cast<std::size_t>(i)];
      }
    }
    const Real n = v.norm();
    if (!(n > 0.0)) throw Error(Errc::invalid_input, "truncated vector is zero");
    return v / n;
  }
};

struct GrowthPoint {
  Index dim = 0;
  Real K = 0.0;
  Real min_mI = 0.0;
};

/// K of S_m = span{x truncated to C^m} for each m in dims.
inline std::vector<GrowthPoint> truncation_growth(const TailRule& rule, const std::vector<Index>& dims,
                                                  const Tolerance& tol = {}) {
  for (Index m : dims) require_enumerable(m);
  std::vector<GrowthPoint> out;
  for (Index m : dims) {
    const Subspace s(rule.truncated(m), tol);
    const BoundReport rep = stewart_oleary(s);
    out.push_back({m, rep.K_constant, rep.min_mI});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suprema of Friedrichs angles over coordinate subspaces
// ---------------------------------------------------------------------------

struct Equi2Report {
  Real sup_all = 0.0;                 // over all J
  Real sup_finite = 0.0;              // over finite J, via projector products
  Real sup_trivial_intersection = 0.0;  // over J with H_J ∩ S = {0}
  Real K_from_angles = 1.0;
  std::size_t sandwich_checked = 0;
  Real max_sandwich_violation = 0.0;  // positive when an inequality fails

  bool ok(Real slack = 1e-10) const {
    return std::abs(sup_all - sup_finite) <= 1e-8 && sup_trivial_intersection <= sup_all + 1e-12 &&
           max_sandwich_violation <= slack;
  }
};

/// Compares the three suprema of c[S, H_J] and verifies, with T = I - P_S
/// (so N(T) = S), that gamma(T) s_J <= gamma(T P_J) <= ||T|| s_J where
/// s_J = (1 - c[S, H_J]^2)^{1/2}.
inline Equi2Report equi2_check(const Subspace& s) {
  const Index m = s.ambient_dim();
  require_enumerable(m);
  const Tolerance& tol = s.tol();
  const Matrix t = identity(m) - orthogonal_projector(s);
  const Real t_norm = operator_norm(t);
  const Real t_gamma = reduced_min_modulus(t, tol);
  const bool sandwich = t_norm > 0.0;

  struct Row {
    AnglePair angles;
    Real projector_cos = 0.0;
    Real violation = 0.0;
    bool checked = false;
  };
  const std::size_t all = std::size_t{1} << m;
  std::vector<Row> rows(all);
  detail::parallel_for(all, [&](std::size_t i) {
    const IndexSet j = IndexSet::from_mask(m, i);
    const Subspace h = j.coordinate_subspace(tol);
    Row& r = rows[i];
    r.angles = angle_pair(s, h);
    r.projector_cos = friedrichs_cos_by_projectors(s, h);
    if (!sandwich) return;
    const Real g = reduced_min_modulus(t * j.projection(), tol, t_norm);
    if (!std::isfinite(g)) return;  // T P_J = 0
    r.checked = true;
    r.violation = std::max(t_gamma * r.angles.friedrichs_sin - g, g - t_norm * r.angles.friedrichs_sin);
  });
  Equi2Report rep;
  Real min_sin = 1.0;
  for (const Row& r : rows) {
    rep.sup_all = std::max(rep.sup_all, r.angles.friedrichs_cos);
    rep.sup_finite = std::max(rep.sup_finite, r.projector_cos);
    if (r.angles.intersection_dim == 0) {
      rep.sup_trivial_intersection = std::max(rep.sup_trivial_intersection, r.angles.friedrichs_cos);
    }
    min_sin = std::min(min_sin, r.angles.friedrichs_sin);
    if (r.checked) {
      ++rep.sandwich_checked;
      rep.max_sandwich_violation = std::max(rep.max_sandwich_violation, r.violation);
    }
  }
  rep.K_from_angles = 1.0 / min_sin;
  return rep;
}

}  // namespace oblix
