// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>
#include "doctest.h"
#include "kep/errors.hpp"
#include "kep/matrix_market.hpp"
#include "kep/sparse.hpp"
#include "support/pencils.hpp"

using namespace kep;

namespace
{

SparseSymmetric Parse(const std::string &text)
{
  std::istringstream in(text);
  return ReadMatrixMarket(in);
}

ParseError::Kind KindOf(const std::string &text)
{
  try
  {
    Parse(text);
  }
  catch (const ParseError &e)
  {
    return e.kind();
  }
  FAIL("no ParseError raised");
  return ParseError::Kind::MalformedHeader;
}

void CheckInvariants(const SparseSymmetric &S)
{
  const auto col_ptr = S.ColPtr();
  const auto rows = S.RowIdx();
  for (Index c = 0; c < S.Size(); c++)
  {
    for (Index p = col_ptr[c]; p < col_ptr[c + 1]; p++)
    {
      CHECK(rows[p] >= c);
      CHECK(rows[p] < S.Size());
      if (p > col_ptr[c])
      {
        CHECK(rows[p] > rows[p - 1]);
      }
    }
  }
  const auto dense = S.ToDense();
  const auto n = static_cast<std::size_t>(S.Size());
  for (std::size_t i = 0; i < n; i++)
  {
    for (std::size_t j = 0; j < n; j++)
    {
      CHECK(dense[i * n + j] == dense[j * n + i]);
    }
  }
}

}  // namespace

TEST_CASE("identity from a symmetric file")
{
  const auto S = Parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1.0\n2 2 1.0\n");
  CHECK(S.Size() == 2);
  CHECK(S.ToDense() == std::vector<double>{1.0, 0.0, 0.0, 1.0});
}

TEST_CASE("lower entry expands symmetrically")
{
  const auto S = Parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 3.0\n");
  CHECK(S.ToDense() == std::vector<double>{0.0, 3.0, 3.0, 0.0});
  CHECK(MatVec(S, std::vector<double>{1.0, 0.0}) == std::vector<double>{0.0, 3.0});
}

TEST_CASE("comments, integer field and duplicates")
{
  const auto S = Parse(
      "%%MatrixMarket matrix coordinate integer symmetric\n% comment\n%another\n3 3 4\n"
      "1 1 2\n3 1 -1\n3 1 -1\n3 3 5\n");
  CHECK(S.NumNonzeros() == 3);
  const auto d = S.ToDense();
  CHECK(d[2 * 3 + 0] == -2.0);
  CHECK(d[0] == 2.0);
  CHECK(d[8] == 5.0);
}

TEST_CASE("general file with a symmetric entry set")
{
  const auto S = Parse(
      "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 2 4.5\n2 1 4.5\n2 2 1\n");
  CHECK(S.ToDense() == std::vector<double>{0.0, 4.5, 4.5, 1.0});
}

TEST_CASE("parse errors carry distinct kinds")
{
  CHECK(KindOf("%%MatrixMarket matrix array real symmetric\n2 2\n") ==
        ParseError::Kind::MalformedHeader);
  CHECK(KindOf("not a header\n") == ParseError::Kind::MalformedHeader);
  CHECK(KindOf("%%MatrixMarket matrix coordinate complex symmetric\n1 1 1\n1 1 1 0\n") ==
        ParseError::Kind::UnsupportedField);
  CHECK(KindOf("%%MatrixMarket matrix coordinate real symmetric\n2 3 1\n1 1 1\n") ==
        ParseError::Kind::NonSquare);
  CHECK(KindOf("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1\n") ==
        ParseError::Kind::IndexOutOfRange);
  CHECK(KindOf("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n0 1 1\n") ==
        ParseError::Kind::IndexOutOfRange);
  CHECK(KindOf("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 x\n") ==
        ParseError::Kind::MalformedEntry);
  CHECK(KindOf("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n") ==
        ParseError::Kind::MalformedEntry);
  CHECK(KindOf("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 1\n") ==
        ParseError::Kind::NotSymmetric);
}

TEST_CASE("write then read reproduces the entry multiset")
{
  for (std::uint64_t seed : {1u, 2u, 3u})
  {
    const auto S = testing::RandomSymmetric(40, seed, 6, 0.0);
    std::ostringstream out;
    WriteMatrixMarket(out, S);
    const auto R = Parse(out.str());
    CHECK(R.Triplets() == S.Triplets());
    CHECK(R.PatternId() == S.PatternId());
  }
}

TEST_CASE("assembly invariants on random input")
{
  testing::Rng rng(5);
  std::vector<Triplet> raw;
  for (int t = 0; t < 300; t++)
  {
    raw.push_back({rng.Below(25), rng.Below(25), rng.Uniform(-1.0, 1.0)});
  }
  const auto S = SparseSymmetric::FromTriplets(25, raw);
  CheckInvariants(S);
  CHECK_THROWS_AS(SparseSymmetric::FromTriplets(2, std::vector<Triplet>{{2, 0, 1.0}}), Error);
}

TEST_CASE("shifted combine")
{
  const auto A = testing::Diagonal({1.0, 2.0});
  const auto B = testing::Identity(2);
  CHECK(ShiftedCombine(A, B, 1.5).ToDense() == std::vector<double>{-0.5, 0.0, 0.0, 0.5});

  SUBCASE("zero shift copies A on the union pattern")
  {
    const auto A2 = testing::RandomSymmetric(20, 8);
    const auto B2 = testing::RandomSpd(20, 9);
    const auto C = ShiftedCombine(A2, B2, 0.0);
    CHECK(C.ToDense() == A2.ToDense());
    CHECK(C.NumNonzeros() >= std::max(A2.NumNonzeros(), B2.NumNonzeros()));
  }

  SUBCASE("matches dense arithmetic and keeps the pattern id")
  {
    const auto A2 = testing::RandomSymmetric(20, 10);
    const auto B2 = testing::RandomSpd(20, 11);
    const double sigma = -0.731;
    const auto C = ShiftedCombine(A2, B2, sigma);
    const auto a = A2.ToDense();
    const auto b = B2.ToDense();
    const auto c = C.ToDense();
    for (std::size_t i = 0; i < c.size(); i++)
    {
      CHECK(c[i] == doctest::Approx(a[i] - sigma * b[i]).epsilon(1e-15));
    }
    CHECK(ShiftedCombine(A2, B2, 3.0).PatternId() == C.PatternId());
    CHECK(ShiftedCombine(A2, B2, 0.0).PatternId() == C.PatternId());
  }

  CHECK_THROWS_AS(ShiftedCombine(A, testing::Identity(3), 0.0), DimensionMismatch);
}

TEST_CASE("matrix-vector product")
{
  const auto I = testing::Identity(4);
  const std::vector<double> x{1.0, -2.0, 3.0, 0.5};
  CHECK(MatVec(I, x) == x);

  const auto S = testing::RandomSymmetric(50, 21, 8, 0.3);
  const auto dense = S.ToDense();
  testing::Rng rng(3);
  std::vector<double> v(50);
  for (auto &e : v)
  {
    e = rng.Uniform(-1.0, 1.0);
  }
  const auto y = MatVec(S, v);
  const auto ref = testing::DenseMatVec(dense, v);
  std::vector<double> diff(50);
  for (std::size_t i = 0; i < 50; i++)
  {
    diff[i] = y[i] - ref[i];
  }
  CHECK(testing::Norm(diff) <= 1e-14 * testing::Norm(ref));
  CHECK_THROWS_AS(MatVec(S, std::vector<double>(3)), DimensionMismatch);
}

TEST_CASE("pattern id depends on structure only")
{
  const auto A = testing::RandomSymmetric(30, 4);
  std::vector<double> scaled(A.Values().begin(), A.Values().end());
  for (auto &v : scaled)
  {
    v *= 2.0;
  }
  const auto B = SparseSymmetric::FromCompressed(
      30, {A.ColPtr().begin(), A.ColPtr().end()}, {A.RowIdx().begin(), A.RowIdx().end()}, scaled);
  CHECK(A.PatternId() == B.PatternId());
  CHECK(A.SamePattern(B));
  CHECK(A.PatternId() != testing::RandomSymmetric(30, 5).PatternId());
}
