#include <cmath>
#include <string>

#include "oblix/io.hpp"
#include "test_helpers.hpp"

namespace oblix {
namespace {

using testing::matrices_near;
using testing::real_matrix;

Errc code_of(const std::string& text) {
  try {
    io::parse_matrix(text);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::invalid_input;  // unreachable in the tests below
}

TEST(MatrixJson, ParsesComplexAndRealEntries) {
  const Matrix m = io::parse_matrix(R"({"rows": 2, "cols": 2, "entries": [[1, 0], [0, 2], 3, [4, -1]]})");
  Matrix expected(2, 2);
  expected << Complex(1, 0), Complex(0, 2), Complex(3, 0), Complex(4, -1);
  EXPECT_TRUE(matrices_near(m, expected, 0.0));
}

TEST(MatrixJson, RoundTrip) {
  Rng rng(401);
  const Matrix m = random_matrix(rng, 3, 4);
  EXPECT_TRUE(matrices_near(io::matrix_from_json(io::matrix_to_json(m)), m, 0.0));
  EXPECT_EQ(io::matrix_to_json(Matrix::Zero(0, 0)).dump(), R"({"cols":0,"entries":[],"rows":0})");
}

TEST(MatrixJson, Errors) {
  EXPECT_EQ(code_of(R"({"rows": 1, "cols": 2, "entries": [1]})"), Errc::parse_error);
  EXPECT_EQ(code_of(R"({"rows": 1, "entries": [1]})"), Errc::parse_error);
  EXPECT_EQ(code_of(R"({"rows": 1, "cols": 1, "entries": ["x"]})"), Errc::parse_error);
  EXPECT_EQ(code_of(R"({"rows": 1, "cols": 1, "entries": [[1, 2, 3]]})"), Errc::parse_error);
  EXPECT_EQ(code_of(R"({"rows": 1, "cols": 1, "entries": [1)"), Errc::parse_error);
  EXPECT_EQ(code_of(R"({"rows": -1, "cols": 1, "entries": []})"), Errc::parse_error);
  try {
    io::parse_matrix(R"({"rows": 1, "cols": 2, "entries": [1, [0, "a"]]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("entries[1][1]"), std::string::npos) << e.what();
  }
}

TEST(MatrixCsv, ParsesRealRows) {
  const Matrix m = io::parse_matrix("# header comment\n1, 2\n\n3,4.5\n");
  EXPECT_TRUE(matrices_near(m, real_matrix({{1, 2}, {3, 4.5}}), 0.0));
}

TEST(MatrixCsv, NanIsParseErrorWithLocation) {
  try {
    io::parse_matrix("1,2\n3,nan\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::parse_error);
    EXPECT_NE(std::string(e.what()).find("line 2 field 2"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of("1,2\n3\n"), Errc::parse_error);
  EXPECT_EQ(code_of("1,abc\n"), Errc::parse_error);
  EXPECT_EQ(code_of("1,\n"), Errc::parse_error);
}

TEST(Subspaces, OrthonormalColumnsKept) {
  const io::LoadedSubspace ls = io::subspace_from_columns(real_matrix({{1, 0}, {0, 1}, {0, 0}}));
  EXPECT_FALSE(ls.reorthonormalized);
  EXPECT_EQ(ls.subspace.dim(), 2);
}

TEST(Subspaces, OtherColumnsReorthonormalized) {
  const io::LoadedSubspace ls = io::subspace_from_columns(real_matrix({{1, 1}, {0, 1}, {0, 0}}));
  EXPECT_TRUE(ls.reorthonormalized);
  EXPECT_GT(ls.correction, 1e-8);
  EXPECT_EQ(ls.subspace.dim(), 2);
  EXPECT_LE(operator_norm(ls.subspace.basis().adjoint() * ls.subspace.basis() - identity(2)), 1e-14);

  // Dependent columns collapse to their span.
  EXPECT_EQ(io::subspace_from_columns(real_matrix({{1, 2}, {1, 2}})).subspace.dim(), 1);
  // A tiny perturbation stays below the warning threshold.
  Matrix near = real_matrix({{1}, {0}});
  near(0, 0) += 1e-12;
  EXPECT_FALSE(io::subspace_from_columns(near).reorthonormalized);
}

TEST(Files, MissingFileIsInvalidInput) {
  try {
    io::load_matrix("/nonexistent/matrix.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_input);
  }
}

TEST(Errors, NamesAreStable) {
  EXPECT_STREQ(to_string(Errc::parse_error), "ParseError");
  EXPECT_STREQ(to_string(Errc::singular_gram), "SingularGram");
  EXPECT_STREQ(to_string(Errc::too_large), "TooLarge");
  EXPECT_EQ(std::string(Error(Errc::not_a_frame, "x").what()), "NotAFrame: x");
}

TEST(IndexSets, Basics) {
  const IndexSet j(5, {3, 1});
  EXPECT_EQ(j.indices(), (std::vector<Index>{1, 3}));
  EXPECT_EQ(j.mask(), 0b01010u);
  EXPECT_EQ(j.complement(), IndexSet(5, {0, 2, 4}));
  EXPECT_EQ(to_string(j), "{1,3}");
  EXPECT_EQ(IndexSet::from_mask(5, j.mask()), j);
  EXPECT_THROW(IndexSet(3, {1, 1}), Error);
  EXPECT_THROW(IndexSet(3, {3}), Error);
}

}  // namespace
}  // namespace oblix
