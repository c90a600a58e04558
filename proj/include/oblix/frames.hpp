#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "oblix/bounds.hpp"
#include "oblix/geometry.hpp"
#include "oblix/index_set.hpp"
#include "oblix/parallel.hpp"

namespace oblix {

/// A finite frame given by the d x m matrix T whose k-th column is the frame
/// vector xi_k = T e_k. T must be onto C^d.
class FrameSystem {
 public:
  explicit FrameSystem(Matrix synthesis, Tolerance tol = {}) : t_(std::move(synthesis)), tol_(tol) {
    tol_.validate();
    require_finite(t_, "frame");
    if (t_.rows() == 0 || t_.cols() < t_.rows()) {
      throw Error(Errc::not_a_frame, "frame needs at least as many vectors as the dimension");
    }
    if (numerical_rank(t_, tol_) < t_.rows()) {
      throw Error(Errc::not_a_frame, "frame vectors do not span the space");
    }
  }

  /// The frame whose synthesis rows form an orthonormal basis of N^⊥, so
  /// that N(T) = N exactly.
  static FrameSystem with_nullspace(const Subspace& n) {
    return FrameSystem(complement(n).basis().adjoint(), n.tol());
  }

  const Matrix& synthesis() const noexcept { return t_; }
  const Tolerance& tol() const noexcept { return tol_; }
  Index dim() const noexcept { return t_.rows(); }
  Index size() const noexcept { return t_.cols(); }

 private:
  Matrix t_;
  Tolerance tol_;
};

struct FrameBounds {
  Real lower = 0.0;  // +inf when the subfamily spans {0}
  Real upper = 0.0;
};

/// Optimal frame bounds: lower = gamma(T)^2, upper = ||T||^2, checked
/// against the extreme eigenvalues of T T^*.
inline FrameBounds frame_bounds(const FrameSystem& f) {
  const Matrix& t = f.synthesis();
  const Real norm = operator_norm(t);
  const Real gamma = reduced_min_modulus(t, f.tol());
  FrameBounds b{gamma * gamma, norm * norm};
  Eigen::SelfAdjointEigenSolver<Matrix> eig(t * t.adjoint(), Eigen::EigenvaluesOnly);
  const Real scale = std::max(1.0, b.upper);
  if (std::abs(eig.eigenvalues().minCoeff() - b.lower) > f.tol().abs_eq * scale ||
      std::abs(eig.eigenvalues().maxCoeff() - b.upper) > f.tol().abs_eq * scale) {
    throw Error(Errc::precondition_failed, "frame bounds disagree with the frame operator spectrum");
  }
  return b;
}

/// Bounds of {xi_k : k in J} as a frame for its own span:
/// lower = gamma(T P_J)^2, upper = ||T P_J||^2.
inline FrameBounds subset_bounds(const FrameSystem& f, const IndexSet& j) {
  if (j.empty()) throw Error(Errc::invalid_input, "subset bounds need a nonempty index set");
  if (j.ambient_dim() != f.size()) throw Error(Errc::ambient_mismatch, "index set does not match frame size");
  const Matrix tj = select_cols(f.synthesis(), j);
  const Real norm = operator_norm(tj);
  const Real gamma = reduced_min_modulus(tj, f.tol(), operator_norm(f.synthesis()));
  if (!std::isfinite(gamma)) return {kInfinity, 0.0};
  return {gamma * gamma, norm * norm};
}

struct RieszConstant {
  Real value = kInfinity;
  IndexSet witness;
};

/// Brute-force minimum of the lower subset bound over all nonempty J;
/// subfamilies spanning {0} are skipped. Ties go to the smallest mask.
inline RieszConstant riesz_constant(const FrameSystem& f) {
  const Index m = f.size();
  require_enumerable(m);
  const std::size_t all = (std::size_t{1} << m) - 1;
  std::vector<Real> lower(all);
  detail::parallel_for(all, [&](std::size_t i) {
    lower[i] = subset_bounds(f, IndexSet::from_mask(m, i + 1)).lower;
  });
  RieszConstant out;
  std::size_t best = 0;
  for (std::size_t i = 0; i < all; ++i) {
    if (lower[i] < out.value) {
      out.value = lower[i];
      best = i;
    }
  }
  out.witness = IndexSet::from_mask(m, best + 1);
  return out;
}

struct RieszEquivalenceReport {
  Real min_gamma = kInfinity;      // min_J gamma(T P_J), zero spans excluded
  Real max_cos = 0.0;              // max_J c[N(T), H_J]
  Real K = 1.0;                    // (1 - max_cos^2)^{-1/2}
  Real riesz_constant = kInfinity; // min_gamma^2
  Real riesz_lower = 0.0;          // gamma(T)^2 / K^2
  Real riesz_upper = 0.0;          // ||T||^2 / K^2
  std::size_t checked = 0;
  Real max_sandwich_violation = 0.0;

  bool ok(Real slack = 1e-10) const { return max_sandwich_violation <= slack; }
};

/// Checks gamma(T) s_J <= gamma(T P_J) <= ||T|| s_J, s_J = (1 - c[N(T), H_J]^2)^{1/2},
/// for every nonempty J, and brackets the Riesz constant by K[N(T), D].
inline RieszEquivalenceReport riesz_compatibility_equivalence(const FrameSystem& f) {
  const Index m = f.size();
  require_enumerable(m);
  const Tolerance& tol = f.tol();
  const Matrix& t = f.synthesis();
  const Real t_norm = operator_norm(t);
  const Real t_gamma = reduced_min_modulus(t, tol);
  const Subspace kernel = nullspace(t, tol);

  struct Row {
    AnglePair angles;
    Real gamma = kInfinity;
  };
  const std::size_t all = (std::size_t{1} << m) - 1;
  std::vector<Row> rows(all);
  detail::parallel_for(all, [&](std::size_t i) {
    const IndexSet j = IndexSet::from_mask(m, i + 1);
    rows[i].angles = angle_pair(kernel, j.coordinate_subspace(tol));
    rows[i].gamma = reduced_min_modulus(t * j.projection(), tol, t_norm);
  });

  RieszEquivalenceReport rep;
  Real min_sin = 1.0;
  for (const Row& r : rows) {
    rep.max_cos = std::max(rep.max_cos, r.angles.friedrichs_cos);
    min_sin = std::min(min_sin, r.angles.friedrichs_sin);
    if (!std::isfinite(r.gamma)) continue;
    ++rep.checked;
    rep.min_gamma = std::min(rep.min_gamma, r.gamma);
    const Real s = r.angles.friedrichs_sin;
    rep.max_sandwich_violation =
        std::max({rep.max_sandwich_violation, t_gamma * s - r.gamma, r.gamma - t_norm * s});
  }
  rep.K = 1.0 / min_sin;
  rep.riesz_constant = rep.min_gamma * rep.min_gamma;
  rep.riesz_lower = t_gamma * t_gamma / (rep.K * rep.K);
  rep.riesz_upper = t_norm * t_norm / (rep.K * rep.K);
  return rep;
}

struct RieszCurvePoint {
  Index dim = 0;
  Real riesz_constant = 0.0;
  Real max_cos = 0.0;
  Real K = 0.0;
};

/// For each m, the frame T_m with N(T_m) spanned by the truncated tail
/// vector, and its Riesz constant.
inline std::vector<RieszCurvePoint> nullspace_tail_experiment(const TailRule& rule,
                                                              const std::vector<Index>& dims,
                                                              const Tolerance& tol = {}) {
  for (Index m : dims) {
    require_enumerable(m);
    if (m < 2) throw Error(Errc::invalid_input, "tail experiment needs m >= 2");
  }
  std::vector<RieszCurvePoint> out;
  for (Index m : dims) {
    const FrameSystem f = FrameSystem::with_nullspace(Subspace(rule.truncated(m), tol));
    const RieszConstant rc = riesz_constant(f);
    const RieszEquivalenceReport eq = riesz_compatibility_equivalence(f);
    out.push_back({m, rc.value, eq.max_cos, eq.K});
  }
  return out;
}

}  // namespace oblix
