// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>
#include <string>
#include "doctest.h"
#include "json.hpp"
#include "kep/driver.hpp"
#include "kep/errors.hpp"
#include "kep/oracle.hpp"
#include "kep/report.hpp"
#include "support/pencils.hpp"

using namespace kep;

namespace
{

SolverConfig Config(Index k, std::uint64_t seed = 1)
{
  SolverConfig c;
  c.k = k;
  c.seed = seed;
  return c;
}

void CheckFactorizationCount(const SolveReport &r)
{
  CHECK(r.resources.factorizations ==
        r.stage1.factorizations + r.stage2.factorizations + r.stage3.factorizations + 1);
  CHECK(r.stage1.factorizations >= r.stage1.iterations);
  CHECK(r.stage2.factorizations >= r.stage2.iterations);
  CHECK(r.stage3.factorizations <= 1 + static_cast<Index>(r.stage3.shift_perturbed) * 16);
}

}  // namespace

TEST_CASE("diag(1..200), k = 101")
{
  const auto r = SolveKth(testing::Ladder(200), testing::Identity(200), Config(101));
  REQUIRE(r.status == SolveStatus::Converged);
  REQUIRE(r.result.has_value());
  CHECK(std::abs(r.result->lambda - 101.0) <= 1e-10);
  CHECK(r.result->rel_res_2norm < 1e-10);
  CHECK(r.stage2.count <= 20);
  CHECK(r.stage2.interval.Contains(101));
  CHECK(r.error == std::nullopt);
  CheckFactorizationCount(r);
}

TEST_CASE("k = 1 on a three by three pencil")
{
  const auto A = SparseSymmetric::FromTriplets(
      3, std::vector<Triplet>{{0, 0, 2.0}, {1, 0, -1.0}, {1, 1, 2.0}, {2, 1, -1.0}, {2, 2, 2.0}});
  const auto B = testing::Diagonal({1.0, 2.0, 3.0});
  auto config = Config(1);
  config.verify = true;
  const auto r = SolveKth(A, B, config);
  REQUIRE(r.status == SolveStatus::Converged);
  const auto oracle = DenseGeneralizedEigen(A, B);
  CHECK(r.result->lambda == doctest::Approx(oracle.eigenvalues[0]).epsilon(1e-12));
  REQUIRE(r.verification.has_value());
  CHECK(r.verification->index_ok);
  CHECK(r.verification->interval_ok);
  CHECK(r.verification->angle < 1e-8);
}

TEST_CASE("random pencils across k against the oracle")
{
  const auto p = testing::SweepPencil(80, 5);
  const auto oracle = DenseGeneralizedEigen(p.A, p.B, false);
  for (Index k = 1; k <= 80; k += 7)
  {
    CAPTURE(k);
    const auto r = SolveKth(p.A, p.B, Config(k, static_cast<std::uint64_t>(k)));
    REQUIRE(r.status == SolveStatus::Converged);
    const double ref = oracle.eigenvalues[k - 1];
    CHECK(std::abs(r.result->lambda - ref) <= 1e-12 * std::abs(ref));
    CheckFactorizationCount(r);

    // B-normalized eigenvector.
    const auto Bx = MatVec(p.B, r.result->eigenvector);
    double xBx = 0.0;
    for (std::size_t i = 0; i < Bx.size(); i++)
    {
      xBx += Bx[i] * r.result->eigenvector[i];
    }
    CHECK(xBx == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("one symbolic factorization per distinct pattern")
{
  SUBCASE("shared pattern")
  {
    const auto A = testing::RandomSymmetric(60, 3, 6, 8.0);
    // B on exactly A's pattern: identity-dominant values on the same structure.
    std::vector<double> values(A.Values().begin(), A.Values().end());
    for (Index c = 0; c < A.Size(); c++)
    {
      for (Index p = A.ColPtr()[c]; p < A.ColPtr()[c + 1]; p++)
      {
        values[p] = A.RowIdx()[p] == c ? 20.0 : 0.1;
      }
    }
    const auto B = SparseSymmetric::FromCompressed(
        60, {A.ColPtr().begin(), A.ColPtr().end()}, {A.RowIdx().begin(), A.RowIdx().end()}, values);
    const auto before = SymbolicFactorizeCalls();
    const auto r = SolveKth(A, B, Config(30));
    CHECK(SymbolicFactorizeCalls() - before == 1);
    CHECK(r.shared_symbolic);
    CHECK(r.resources.symbolic_factorizations == 1);
    CHECK(r.status == SolveStatus::Converged);
  }
  SUBCASE("different patterns")
  {
    const auto p = testing::SweepPencil(60, 2);
    const auto before = SymbolicFactorizeCalls();
    const auto r = SolveKth(p.A, p.B, Config(30));
    CHECK(SymbolicFactorizeCalls() - before == 2);
    CHECK_FALSE(r.shared_symbolic);
    CHECK(r.resources.symbolic_factorizations == 2);
  }
}

TEST_CASE("nzf estimate is the symbolic prediction for the shifted pencil")
{
  const auto p = testing::SweepPencil(70, 6);
  const auto r = SolveKth(p.A, p.B, Config(20));
  const auto u = ShiftedCombine(p.A, p.B, 0.0);
  CHECK(r.resources.nzf_estimate == SymbolicFactorize(u, ComputeOrdering(u)).nzf_estimate);
  CHECK(r.resources.nzf_total >= r.resources.nzf_b + r.resources.nzf_shift);
}

TEST_CASE("report serialization")
{
  const auto p = testing::SweepPencil(50, 12);
  auto config = Config(25, 7);
  config.verify = true;
  config.record_diagnostics = true;
  const auto r = SolveKth(p.A, p.B, config);
  REQUIRE(r.status == SolveStatus::Converged);

  SUBCASE("round trip")
  {
    const auto text = EmitJson(r);
    const auto back = ParseJson(text);
    CHECK(back == r);
    CHECK(EmitJson(back) == text);
  }
  SUBCASE("deterministic bytes")
  {
    CHECK(EmitJson(SolveKth(p.A, p.B, config)) == EmitJson(r));
  }
  SUBCASE("timings appear only on request")
  {
    CHECK(nlohmann::json::parse(EmitJson(r))["resources"]["task_seconds"].is_null());
    auto timed = config;
    timed.timings = true;
    const auto t = SolveKth(p.A, p.B, timed);
    REQUIRE(t.resources.task_seconds.has_value());
    const auto j = nlohmann::json::parse(EmitJson(t));
    CHECK(j["resources"]["task_seconds"].is_object());
    CHECK(j["resources"]["task_seconds"].size() == 7);
    CHECK(ParseJson(EmitJson(t)) == t);
  }
  SUBCASE("schema and key order")
  {
    const auto j = nlohmann::ordered_json::parse(EmitJson(r));
    CHECK(j["schema"] == std::string(kReportSchema));
    CHECK(j.begin().key() == "schema");
    CHECK(j["config"]["seed"] == 7);
  }
  SUBCASE("text report")
  {
    std::ostringstream out;
    EmitReport(r, ReportFormat::Text, out);
    CHECK(out.str().find("converged") != std::string::npos);
  }
}

TEST_CASE("empty traces serialize as arrays")
{
  // Five eigenvalues never need bisection with m_max = 20.
  const auto r = SolveKth(testing::Ladder(5), testing::Identity(5), Config(3));
  REQUIRE(r.status == SolveStatus::Converged);
  CHECK(r.stage2.iterations == 0);
  const auto j = nlohmann::json::parse(EmitJson(r));
  CHECK(j["stage2"]["trace"].is_array());
  CHECK(j["stage2"]["trace"].empty());
  CHECK(j["verification"].is_null());
  CHECK(j["error"].is_null());
  CHECK(ParseJson(EmitJson(r)) == r);
}

TEST_CASE("result present iff converged")
{
  auto config = Config(2);
  config.max_si = 1;
  config.m_max = 1;
  const auto r = SolveKth(testing::RandomSymmetric(40, 8, 6, 5.0), testing::Identity(40), config);
  CHECK(r.status != SolveStatus::Converged);
  CHECK_FALSE(r.result.has_value());
  CHECK(ExitCode(r.status) == (r.status == SolveStatus::ClusterSuspected ? 2 : 1));
  CHECK(ParseJson(EmitJson(r)) == r);
}

TEST_CASE("failures carry the stage")
{
  const auto r = SolveKth(testing::Ladder(4), testing::Diagonal({1.0, -1.0, 1.0, 1.0}), Config(2));
  CHECK(r.status == SolveStatus::Error);
  REQUIRE(r.error.has_value());
  CHECK(r.error->stage == "setup");
  CHECK(ExitCode(r.status) == 1);
  CHECK(ParseJson(EmitJson(r)) == r);
}

TEST_CASE("configuration is validated")
{
  const auto A = testing::Ladder(4);
  const auto B = testing::Identity(4);
  CHECK_THROWS_AS(SolveKth(A, B, Config(0)), Error);
  CHECK_THROWS_AS(SolveKth(A, B, Config(5)), Error);
  auto c = Config(1);
  c.m_max = 0;
  CHECK_THROWS_AS(ValidateConfig(c, 4), Error);
  c = Config(1);
  c.tau_res = 0.0;
  CHECK_THROWS_AS(ValidateConfig(c, 4), Error);
  CHECK_NOTHROW(ValidateConfig(Config(4), 4));
  CHECK(ExitCode(SolveStatus::Converged) == 0);
}
