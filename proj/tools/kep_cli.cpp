// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: solve, inertia, interval, bisect-only, oracle.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>
#include "CLI11.hpp"
#include "json.hpp"
#include "kep/bisection.hpp"
#include "kep/driver.hpp"
#include "kep/errors.hpp"
#include "kep/kernels.hpp"
#include "kep/lanczos.hpp"
#include "kep/matrix_market.hpp"
#include "kep/oracle.hpp"
#include "kep/report.hpp"

namespace
{

using Json = nlohmann::ordered_json;

struct PencilFiles
{
  std::string a;
  std::string b;
};

void AddPencilOptions(CLI::App &cmd, PencilFiles &files)
{
  cmd.add_option("--matrix-a,-A", files.a, "Matrix Market file of A")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--matrix-b,-B", files.b, "Matrix Market file of B (identity when omitted)")
      ->check(CLI::ExistingFile);
}

struct Pencil
{
  kep::SparseSymmetric A;
  kep::SparseSymmetric B;
};

kep::SparseSymmetric Identity(kep::Index n)
{
  std::vector<kep::Triplet> diag;
  for (kep::Index i = 0; i < n; i++)
  {
    diag.push_back({i, i, 1.0});
  }
  return kep::SparseSymmetric::FromTriplets(n, diag);
}

Pencil Load(const PencilFiles &files)
{
  Pencil p;
  p.A = kep::ReadMatrixMarket(files.a);
  p.B = files.b.empty() ? Identity(p.A.Size()) : kep::ReadMatrixMarket(files.b);
  if (p.A.Size() != p.B.Size())
  {
    throw kep::DimensionMismatch("A and B differ in size");
  }
  return p;
}

std::string Number(double x)
{
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

void WriteText(const std::string &path, const std::string &text)
{
  if (path == "-")
  {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out)
  {
    throw kep::Error("cannot write " + path);
  }
}

Json IntervalJson(const kep::BracketInterval &b)
{
  return Json{{"lower", b.lower}, {"upper", b.upper}, {"nu_lower", b.nu_lower},
              {"nu_upper", b.nu_upper}};
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"k-th eigenpair of a sparse symmetric-definite pencil A x = lambda B x"};
  app.require_subcommand(1);
  std::string backend = "auto";
  app.add_option("--kernels", backend, "Vector kernels: auto, scalar, avx2 or neon")
      ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));

  // solve
  PencilFiles solve_files;
  kep::SolverConfig config;
  std::string json_path;
  bool text = false;
  auto *solve = app.add_subcommand("solve", "Run all three stages for the k-th eigenpair");
  AddPencilOptions(*solve, solve_files);
  solve->add_option("-k", config.k, "Target index, 1-based")->required();
  solve->add_option("--m-max", config.m_max, "Bisection stops at this many eigenvalues")
      ->capture_default_str();
  solve->add_option("--tau-res", config.tau_res, "Relative residual tolerance")
      ->capture_default_str();
  solve->add_option("--tau-diff", config.tau_diff, "Relative difference tolerance")
      ->capture_default_str();
  solve->add_option("--seed", config.seed, "Random seed")->capture_default_str();
  solve->add_option("--max-lanczos", config.max_lanczos, "Stage-1 Lanczos step cap")
      ->capture_default_str();
  solve->add_option("--max-bisect", config.max_bisect, "Bisection iteration cap")
      ->capture_default_str();
  solve->add_option("--max-si", config.max_si, "Shift-invert iteration cap")
      ->capture_default_str();
  solve->add_flag("--verify", config.verify, "Cross-check against the dense oracle");
  solve->add_flag("--diagnostics", config.record_diagnostics,
                  "Record all bounds, identities and pairwise cosines per iteration");
  solve->add_flag("--timings", config.timings, "Include wall-clock task times");
  solve->add_option("--json", json_path, "Write the JSON report to this path ('-' for stdout)");
  solve->add_flag("--text", text, "Print the text summary even when --json - is given");

  // inertia
  PencilFiles inertia_files;
  std::vector<double> sigmas;
  auto *inertia = app.add_subcommand("inertia", "Eigenvalue counts below given shifts");
  AddPencilOptions(*inertia, inertia_files);
  inertia->add_option("--sigma", sigmas, "Shift(s)")->required();

  // interval
  PencilFiles interval_files;
  kep::Index interval_k = 1;
  std::uint64_t interval_seed = 0;
  auto *interval = app.add_subcommand("interval", "Stage 1: interval containing lambda_k");
  AddPencilOptions(*interval, interval_files);
  interval->add_option("-k", interval_k, "Target index, 1-based")->required();
  interval->add_option("--seed", interval_seed, "Random seed")->capture_default_str();

  // bisect-only
  PencilFiles bisect_files;
  kep::Index bisect_k = 1;
  std::uint64_t bisect_seed = 0;
  std::optional<double> tau_abs;
  std::optional<double> tau_rel;
  auto *bisect = app.add_subcommand("bisect-only", "Stage 1 then plain bisection to lambda_k");
  AddPencilOptions(*bisect, bisect_files);
  bisect->add_option("-k", bisect_k, "Target index, 1-based")->required();
  bisect->add_option("--seed", bisect_seed, "Random seed")->capture_default_str();
  auto *abs_opt = bisect->add_option("--tau-abs", tau_abs, "Stop when the length is below this");
  auto *rel_opt =
      bisect->add_option("--tau-rel", tau_rel, "Stop when length / max(|lower|, |upper|) < this");
  abs_opt->excludes(rel_opt);

  // oracle
  PencilFiles oracle_files;
  std::optional<kep::Index> oracle_k;
  auto *oracle = app.add_subcommand("oracle", "Dense reference spectrum (small problems)");
  AddPencilOptions(*oracle, oracle_files);
  oracle->add_option("-k", oracle_k, "Print only the k-th eigenvalue");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (backend == "scalar")
    {
      kep::kernels::SetActiveBackend(kep::kernels::Backend::Scalar);
    }
    else if (backend == "avx2")
    {
      kep::kernels::SetActiveBackend(kep::kernels::Backend::Avx2);
    }
    else if (backend == "neon")
    {
      kep::kernels::SetActiveBackend(kep::kernels::Backend::Neon);
    }

    if (*solve)
    {
      const Pencil p = Load(solve_files);
      const kep::SolveReport report = kep::SolveKth(p.A, p.B, config);
      if (!json_path.empty())
      {
        WriteText(json_path, kep::EmitJson(report));
      }
      if (json_path != "-" || text)
      {
        std::cout << kep::EmitText(report);
      }
      return kep::ExitCode(report.status);
    }

    if (*inertia)
    {
      const Pencil p = Load(inertia_files);
      kep::PreparedPencil prepared(p.A, p.B);
      for (double sigma : sigmas)
      {
        std::cout << Number(sigma) << " " << prepared.Pencil().CountBelow(sigma) << "\n";
      }
      return 0;
    }

    if (*interval)
    {
      const Pencil p = Load(interval_files);
      kep::PreparedPencil prepared(p.A, p.B);
      kep::IntervalSearchOptions options;
      options.seed = interval_seed;
      const auto found =
          kep::FindInitialInterval(prepared.Pencil(), prepared.BFactor(), interval_k, options);
      Json trace = Json::array();
      for (const auto &step : found.trace)
      {
        trace.push_back(Json{{"j", step.j},
                             {"sigma", step.sigma},
                             {"nu", step.nu},
                             {"extension", step.extension}});
      }
      Json out{{"k", interval_k},
               {"iterations", found.iterations},
               {"restarts", found.restarts},
               {"extended", found.extended},
               {"interval", IntervalJson(found.interval)},
               {"length", found.interval.Length()},
               {"trace", trace}};
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*bisect)
    {
      const Pencil p = Load(bisect_files);
      kep::PreparedPencil prepared(p.A, p.B);
      kep::IntervalSearchOptions options;
      options.seed = bisect_seed;
      const auto found =
          kep::FindInitialInterval(prepared.Pencil(), prepared.BFactor(), bisect_k, options);
      kep::BisectionTolerance tolerance;
      if (tau_rel)
      {
        tolerance.mode = kep::BisectionTolerance::Mode::Relative;
        tolerance.tau = *tau_rel;
      }
      else
      {
        tolerance.tau = tau_abs.value_or(1e-6);
      }
      const auto result =
          kep::BisectToEigenvalue(found.interval, prepared.Pencil(), bisect_k, tolerance);
      Json out{{"k", bisect_k},
               {"mode", tolerance.mode == kep::BisectionTolerance::Mode::Absolute ? "absolute"
                                                                                  : "relative"},
               {"tau", tolerance.tau},
               {"eigenvalue", result.eigenvalue},
               {"iterations", result.bisection.iterations},
               {"cluster_suspected", result.bisection.cluster_suspected},
               {"resolution_limited", result.bisection.resolution_limited},
               {"initial_interval", IntervalJson(found.interval)},
               {"final_interval", IntervalJson(result.bisection.interval)}};
      std::cout << out.dump(2) << "\n";
      return result.bisection.cluster_suspected ? 2 : 0;
    }

    if (*oracle)
    {
      const Pencil p = Load(oracle_files);
      const auto spectrum = kep::DenseGeneralizedEigen(p.A, p.B, false);
      if (oracle_k)
      {
        if (*oracle_k < 1 || *oracle_k > spectrum.n)
        {
          throw kep::Error("k outside 1.." + std::to_string(spectrum.n));
        }
        std::cout << Number(spectrum.eigenvalues[static_cast<std::size_t>(*oracle_k - 1)])
                  << "\n";
      }
      else
      {
        for (double lambda : spectrum.eigenvalues)
        {
          std::cout << Number(lambda) << "\n";
        }
      }
      return 0;
    }
  }
  catch (const std::exception &e)
  {
    std::cerr << "kep: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
