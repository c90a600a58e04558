#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "oblix/linalg.hpp"
#include "oblix/weights.hpp"

namespace oblix {

using Rng = std::mt19937_64;

inline Real log_uniform(Rng& rng, Real lo, Real hi) {
  std::uniform_real_distribution<Real> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

/// Diagonal weight with independent log-uniform entries in [lo, hi].
inline DiagonalWeight sample_positive_weight(Rng& rng, Index m, Real lo = 1e-6, Real hi = 1e6) {
  RealVector w(m);
  for (Index i = 0; i < m; ++i) w(i) = log_uniform(rng, lo, hi);
  return DiagonalWeight::positive_definite(w);
}

/// Weight in the mu-cone: Re z log-uniform on [1e-3, 1e3], Im z uniform on
/// [-mu Re z, mu Re z].
inline DiagonalWeight sample_mu_cone_weight(Rng& rng, Index m, Real mu) {
  Vector z(m);
  for (Index i = 0; i < m; ++i) {
    const Real re = log_uniform(rng, 1e-3, 1e3);
    std::uniform_real_distribution<Real> im(-mu * re, mu * re);
    z(i) = Complex(re, mu > 0.0 ? im(rng) : 0.0);
  }
  return DiagonalWeight::mu_cone(z, mu);
}

inline Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<Real> g;
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = Complex(g(rng), g(rng));
  }
  return out;
}

inline Matrix random_real_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<Real> g;
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = g(rng);
  }
  return out;
}

/// Span of k complex Gaussian vectors in C^m (dimension k almost surely).
inline Subspace random_subspace(Rng& rng, Index m, Index k, Tolerance tol = {}) {
  if (k == 0) return Subspace::zero(m, tol);
  return orthonormal_range(random_matrix(rng, m, k), tol);
}

inline Index uniform_index(Rng& rng, Index lo, Index hi) {
  std::uniform_int_distribution<Index> u(lo, hi);
  return u(rng);
}

}  // namespace oblix
