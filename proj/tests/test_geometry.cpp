#include <cmath>

#include "test_helpers.hpp"

namespace oblix {
namespace {

using testing::column;
using testing::e;
using testing::matrices_near;
using testing::real_matrix;
using testing::span;

const double kHalfRoot2 = 1.0 / std::sqrt(2.0);

Subspace diagonal_line() { return span(column({1, 1})); }

// Two planes in R^3 sharing span{e3}.
Subspace plane_a() { return span(real_matrix({{1, 0}, {0, 0}, {0, 1}})); }
Subspace plane_b() { return span(real_matrix({{1, 0}, {1, 0}, {0, 1}})); }

// Random pair, optionally with a planted common subspace of dimension `shared`.
std::pair<Subspace, Subspace> random_pair(Rng& rng, Index n, Index km, Index kn, Index shared) {
  const Matrix common = random_matrix(rng, n, shared);
  Matrix bm(n, km);
  bm << common, random_matrix(rng, n, km - shared);
  Matrix bn(n, kn);
  bn << common, random_matrix(rng, n, kn - shared);
  return {span(bm), span(bn)};
}

TEST(OrthogonalProjector, Examples) {
  EXPECT_TRUE(matrices_near(orthogonal_projector(e(2, 0)), real_matrix({{1, 0}, {0, 0}}), 0.0));
  EXPECT_TRUE(matrices_near(orthogonal_projector(Subspace::zero(2)), Matrix::Zero(2, 2), 0.0));
  EXPECT_TRUE(matrices_near(orthogonal_projector(diagonal_line()), real_matrix({{.5, .5}, {.5, .5}}), 1e-15));
}

TEST(Intersect, Examples) {
  const Subspace same = intersect(e(2, 0), e(2, 0));
  ASSERT_EQ(same.dim(), 1);
  EXPECT_TRUE(matrices_near(orthogonal_projector(same), orthogonal_projector(e(2, 0)), 1e-14));
  EXPECT_EQ(intersect(e(2, 0), e(2, 1)).dim(), 0);

  const Subspace line = intersect(plane_a(), plane_b());
  ASSERT_EQ(line.dim(), 1);
  // Oracle: the line lies in both planes and is e3 up to phase.
  EXPECT_LE(operator_norm(line.basis() - orthogonal_projector(plane_a()) * line.basis()), 1e-12);
  EXPECT_LE(operator_norm(line.basis() - orthogonal_projector(plane_b()) * line.basis()), 1e-12);
  EXPECT_NEAR(std::abs(line.basis()(2, 0)), 1.0, 1e-12);
}

TEST(Intersect, AmbientMismatch) {
  try {
    intersect(e(2, 0), e(3, 0));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::ambient_mismatch);
  }
  EXPECT_THROW(friedrichs_cos(e(2, 0), e(3, 0)), Error);
  EXPECT_THROW(position_pprime(e(2, 0), e(3, 0)), Error);
}

TEST(DixmierCos, Examples) {
  EXPECT_NEAR(dixmier_cos(e(2, 0), e(2, 1)), 0.0, 1e-15);
  EXPECT_NEAR(dixmier_cos(diagonal_line(), diagonal_line()), 1.0, 1e-15);
  EXPECT_NEAR(dixmier_cos(e(2, 0), diagonal_line()), kHalfRoot2, 1e-15);
}

TEST(FriedrichsCos, Examples) {
  EXPECT_NEAR(friedrichs_cos(diagonal_line(), diagonal_line()), 0.0, 1e-15);
  EXPECT_NEAR(friedrichs_cos(e(2, 0), diagonal_line()), kHalfRoot2, 1e-15);
  EXPECT_NEAR(friedrichs_cos(plane_a(), plane_b()), kHalfRoot2, 1e-14);
  EXPECT_NEAR(friedrichs_cos(e(3, 0), plane_a()), 0.0, 1e-15);  // M ⊆ N
}

TEST(AnglePair, Examples) {
  const AnglePair orth = angle_pair(e(2, 0), e(2, 1));
  EXPECT_NEAR(orth.friedrichs_cos, 0.0, 1e-15);
  EXPECT_NEAR(orth.dixmier_cos, 0.0, 1e-15);
  EXPECT_NEAR(orth.friedrichs_sin, 1.0, 1e-15);
  EXPECT_EQ(orth.intersection_dim, 0);

  const AnglePair same = angle_pair(e(2, 0), e(2, 0));
  EXPECT_NEAR(same.friedrichs_cos, 0.0, 1e-15);
  EXPECT_NEAR(same.dixmier_cos, 1.0, 1e-15);
  EXPECT_NEAR(same.friedrichs_sin, 1.0, 1e-15);
  EXPECT_EQ(same.intersection_dim, 1);

  const AnglePair tilt = angle_pair(e(2, 0), diagonal_line());
  EXPECT_NEAR(tilt.friedrichs_cos, kHalfRoot2, 1e-15);
  EXPECT_NEAR(tilt.dixmier_cos, kHalfRoot2, 1e-15);
  EXPECT_NEAR(tilt.friedrichs_sin, kHalfRoot2, 1e-15);
  EXPECT_EQ(tilt.intersection_dim, 0);
}

TEST(PositionPPrime, Examples) {
  EXPECT_TRUE(position_pprime(e(2, 0), diagonal_line()));
  EXPECT_FALSE(position_pprime(e(2, 0), e(2, 1)));
  EXPECT_TRUE(position_pprime(diagonal_line(), e(2, 0)));
  EXPECT_FALSE(position_pprime(e(3, 0), plane_a()));  // different dimensions
}

TEST(PositionPPrime, MatchesBothIntersectionsTrivial) {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = uniform_index(rng, 2, 6);
    const Index k = uniform_index(rng, 1, n - 1);
    const Subspace m = random_subspace(rng, n, k);
    // Coordinate subspaces produce both outcomes.
    std::vector<Index> idx;
    for (Index i = 0; i < n; ++i) {
      if (uniform_index(rng, 0, 1)) idx.push_back(i);
    }
    const Subspace h = coordinate_subspace(n, idx);
    const bool expected = intersect(m, complement(h)).dim() == 0 && intersect(complement(m), h).dim() == 0;
    EXPECT_EQ(position_pprime(m, h), expected);
  }
}

TEST(AlternatingProjection, Examples) {
  for (int k = 1; k <= 4; ++k) EXPECT_NEAR(alternating_projection_error(diagonal_line(), diagonal_line(), k), 0.0, 1e-14);
  EXPECT_NEAR(alternating_projection_error(e(2, 0), diagonal_line(), 1), kHalfRoot2, 1e-14);
  EXPECT_NEAR(alternating_projection_error(e(2, 0), diagonal_line(), 3), std::pow(kHalfRoot2, 5), 1e-14);
  EXPECT_NEAR(std::pow(kHalfRoot2, 5), 0.17677669529663687, 1e-16);
}

TEST(AngleProperties, RandomPairs) {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = uniform_index(rng, 2, 8);
    const Index km = uniform_index(rng, 1, n);
    const Index kn = uniform_index(rng, 1, n);
    const Index shared = trial % 3 == 0 ? uniform_index(rng, 0, std::min(km, kn)) : 0;
    const auto [m, nn] = random_pair(rng, n, km, kn, shared);
    const AnglePair ap = angle_pair(m, nn);

    EXPECT_LE(ap.friedrichs_cos, ap.dixmier_cos + 1e-15);
    EXPECT_NEAR(ap.friedrichs_sin * ap.friedrichs_sin + ap.friedrichs_cos * ap.friedrichs_cos, 1.0, 1e-8);
    EXPECT_LE(ap.friedrichs_cos, 1.0 - 1e-12);
    // symmetry
    EXPECT_NEAR(friedrichs_cos(nn, m), ap.friedrichs_cos, 1e-8);
    EXPECT_NEAR(dixmier_cos(nn, m), ap.dixmier_cos, 1e-8);
    // complement duality
    EXPECT_NEAR(friedrichs_cos(complement(m), complement(nn)), ap.friedrichs_cos, 1e-8);
    // reduction to the Dixmier angle
    EXPECT_NEAR(dixmier_cos(reduce_by_intersection(m, nn), nn), ap.friedrichs_cos, 1e-8);
    // projector-product cross-check
    EXPECT_NEAR(dixmier_cos_by_projectors(m, nn), ap.dixmier_cos, 1e-8);
    EXPECT_NEAR(friedrichs_cos_by_projectors(m, nn), ap.friedrichs_cos, 1e-8);
    // alternating projections
    for (int k = 1; k <= 6; ++k) {
      EXPECT_NEAR(alternating_projection_error(m, nn, k), std::pow(ap.friedrichs_cos, 2 * k - 1), 1e-8);
    }
  }
}

TEST(Complement, IsOrthogonalAndComplete) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = uniform_index(rng, 1, 7);
    const Subspace s = random_subspace(rng, n, uniform_index(rng, 0, n));
    const Subspace c = complement(s);
    EXPECT_EQ(s.dim() + c.dim(), n);
    EXPECT_LE(operator_norm(orthogonal_projector(s) + orthogonal_projector(c) - identity(n)), 1e-12);
  }
}

}  // namespace
}  // namespace oblix
