// SPDX-License-Identifier: Apache-2.0

#include "kep/report.hpp"

#include <cstdio>
#include <sstream>
#include "json.hpp"
#include "kep/errors.hpp"

namespace kep
{

namespace
{

using Json = nlohmann::ordered_json;

template <typename T>
Json Optional(const std::optional<T> &value)
{
  return value ? Json(*value) : Json(nullptr);
}

template <typename T>
std::optional<T> ReadOptional(const Json &j, const char *key)
{
  const Json &v = j.at(key);
  if (v.is_null())
  {
    return std::nullopt;
  }
  return v.get<T>();
}

Json ToJson(const SolverConfig &c)
{
  return Json{{"k", c.k},
              {"m_max", c.m_max},
              {"tau_res", c.tau_res},
              {"tau_diff", c.tau_diff},
              {"tau_abs", c.tau_abs},
              {"seed", c.seed},
              {"max_lanczos", c.max_lanczos},
              {"max_bisect", c.max_bisect},
              {"max_si", c.max_si},
              {"verify", c.verify},
              {"record_diagnostics", c.record_diagnostics},
              {"timings", c.timings}};
}

void FromJson(const Json &j, SolverConfig &c)
{
  j.at("k").get_to(c.k);
  j.at("m_max").get_to(c.m_max);
  j.at("tau_res").get_to(c.tau_res);
  j.at("tau_diff").get_to(c.tau_diff);
  j.at("tau_abs").get_to(c.tau_abs);
  j.at("seed").get_to(c.seed);
  j.at("max_lanczos").get_to(c.max_lanczos);
  j.at("max_bisect").get_to(c.max_bisect);
  j.at("max_si").get_to(c.max_si);
  j.at("verify").get_to(c.verify);
  j.at("record_diagnostics").get_to(c.record_diagnostics);
  j.at("timings").get_to(c.timings);
}

Json ToJson(const BracketInterval &b)
{
  return Json{{"lower", b.lower}, {"upper", b.upper}, {"nu_lower", b.nu_lower},
              {"nu_upper", b.nu_upper}};
}

void FromJson(const Json &j, BracketInterval &b)
{
  j.at("lower").get_to(b.lower);
  j.at("upper").get_to(b.upper);
  j.at("nu_lower").get_to(b.nu_lower);
  j.at("nu_upper").get_to(b.nu_upper);
}

Json ToJson(const IntervalSearchStep &s)
{
  return Json{{"j", s.j},
              {"sigma", s.sigma},
              {"nu", s.nu},
              {"theta_first", s.theta_first},
              {"theta_last", s.theta_last},
              {"extension", s.extension},
              {"perturbed", s.perturbed}};
}

void FromJson(const Json &j, IntervalSearchStep &s)
{
  j.at("j").get_to(s.j);
  j.at("sigma").get_to(s.sigma);
  j.at("nu").get_to(s.nu);
  j.at("theta_first").get_to(s.theta_first);
  j.at("theta_last").get_to(s.theta_last);
  j.at("extension").get_to(s.extension);
  j.at("perturbed").get_to(s.perturbed);
}

Json ToJson(const BisectionStep &s)
{
  return Json{{"sigma", s.sigma},
              {"nu", s.nu},
              {"length", s.length},
              {"count", s.count},
              {"perturbed", s.perturbed}};
}

void FromJson(const Json &j, BisectionStep &s)
{
  j.at("sigma").get_to(s.sigma);
  j.at("nu").get_to(s.nu);
  j.at("length").get_to(s.length);
  j.at("count").get_to(s.count);
  j.at("perturbed").get_to(s.perturbed);
}

Json ToJson(const SiPairRecord &p)
{
  return Json{{"lambda", p.lambda},
              {"eta", p.eta},
              {"bound_lower", p.bound_lower},
              {"bound_upper", p.bound_upper},
              {"s", p.s},
              {"rel_res_2norm", p.rel_res_2norm},
              {"rel_diff_2norm", Optional(p.rel_diff_2norm)},
              {"residual_identity_error", Optional(p.residual_identity_error)}};
}

void FromJson(const Json &j, SiPairRecord &p)
{
  j.at("lambda").get_to(p.lambda);
  j.at("eta").get_to(p.eta);
  j.at("bound_lower").get_to(p.bound_lower);
  j.at("bound_upper").get_to(p.bound_upper);
  j.at("s").get_to(p.s);
  j.at("rel_res_2norm").get_to(p.rel_res_2norm);
  p.rel_diff_2norm = ReadOptional<double>(j, "rel_diff_2norm");
  p.residual_identity_error = ReadOptional<double>(j, "residual_identity_error");
}

Json ToJson(const SiOrthogonalityRecord &o)
{
  return Json{{"l", o.l}, {"m", o.m}, {"direct", o.direct}, {"closed_form", o.closed_form}};
}

void FromJson(const Json &j, SiOrthogonalityRecord &o)
{
  j.at("l").get_to(o.l);
  j.at("m").get_to(o.m);
  j.at("direct").get_to(o.direct);
  j.at("closed_form").get_to(o.closed_form);
}

Json ToJson(const SiIterationRecord &r);
void FromJson(const Json &j, SiIterationRecord &r);

template <typename T>
Json Array(const std::vector<T> &items)
{
  Json out = Json::array();
  for (const auto &item : items)
  {
    out.push_back(ToJson(item));
  }
  return out;
}

template <typename T>
void ReadArray(const Json &j, std::vector<T> &items)
{
  items.clear();
  for (const auto &entry : j)
  {
    T item;
    FromJson(entry, item);
    items.push_back(std::move(item));
  }
}

Json ToJson(const SiIterationRecord &r)
{
  Json bounds = Json::array();
  for (const auto &[lo, hi] : r.all_bounds)
  {
    bounds.push_back(Json::array({lo, hi}));
  }
  return Json{{"j", r.j},
              {"inclusion", r.inclusion},
              {"disjointness", r.disjointness},
              {"residual", r.residual},
              {"difference", r.difference},
              {"pairs", Array(r.pairs)},
              {"orthogonality", Array(r.orthogonality)},
              {"all_bounds", bounds}};
}

void FromJson(const Json &j, SiIterationRecord &r)
{
  j.at("j").get_to(r.j);
  j.at("inclusion").get_to(r.inclusion);
  j.at("disjointness").get_to(r.disjointness);
  j.at("residual").get_to(r.residual);
  j.at("difference").get_to(r.difference);
  ReadArray(j.at("pairs"), r.pairs);
  ReadArray(j.at("orthogonality"), r.orthogonality);
  r.all_bounds.clear();
  for (const auto &b : j.at("all_bounds"))
  {
    r.all_bounds.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
  }
}

Json ToJson(const StageOneRecord &s)
{
  return Json{{"completed", s.completed},
              {"iterations", s.iterations},
              {"restarts", s.restarts},
              {"extended", s.extended},
              {"interval", ToJson(s.interval)},
              {"length", s.length},
              {"factorizations", s.factorizations},
              {"spectrum_ratio", Optional(s.spectrum_ratio)},
              {"trace", Array(s.trace)}};
}

void FromJson(const Json &j, StageOneRecord &s)
{
  j.at("completed").get_to(s.completed);
  j.at("iterations").get_to(s.iterations);
  j.at("restarts").get_to(s.restarts);
  j.at("extended").get_to(s.extended);
  FromJson(j.at("interval"), s.interval);
  j.at("length").get_to(s.length);
  j.at("factorizations").get_to(s.factorizations);
  s.spectrum_ratio = ReadOptional<double>(j, "spectrum_ratio");
  ReadArray(j.at("trace"), s.trace);
}

Json ToJson(const StageTwoRecord &s)
{
  return Json{{"completed", s.completed},
              {"iterations", s.iterations},
              {"interval", ToJson(s.interval)},
              {"length", s.length},
              {"count", s.count},
              {"cluster_suspected", s.cluster_suspected},
              {"factorizations", s.factorizations},
              {"trace", Array(s.trace)}};
}

void FromJson(const Json &j, StageTwoRecord &s)
{
  j.at("completed").get_to(s.completed);
  j.at("iterations").get_to(s.iterations);
  FromJson(j.at("interval"), s.interval);
  j.at("length").get_to(s.length);
  j.at("count").get_to(s.count);
  j.at("cluster_suspected").get_to(s.cluster_suspected);
  j.at("factorizations").get_to(s.factorizations);
  ReadArray(j.at("trace"), s.trace);
}

Json ToJson(const StageThreeRecord &s)
{
  return Json{{"completed", s.completed},
              {"sigma", s.sigma},
              {"shift_perturbed", s.shift_perturbed},
              {"iterations", s.iterations},
              {"restarts", s.restarts},
              {"first_bound", s.first_bound},
              {"first_residual", s.first_residual},
              {"first_difference", s.first_difference},
              {"outcome", s.outcome},
              {"factorizations", s.factorizations},
              {"trace", Array(s.trace)}};
}

void FromJson(const Json &j, StageThreeRecord &s)
{
  j.at("completed").get_to(s.completed);
  j.at("sigma").get_to(s.sigma);
  j.at("shift_perturbed").get_to(s.shift_perturbed);
  j.at("iterations").get_to(s.iterations);
  j.at("restarts").get_to(s.restarts);
  j.at("first_bound").get_to(s.first_bound);
  j.at("first_residual").get_to(s.first_residual);
  j.at("first_difference").get_to(s.first_difference);
  j.at("outcome").get_to(s.outcome);
  j.at("factorizations").get_to(s.factorizations);
  ReadArray(j.at("trace"), s.trace);
}

Json ToJson(const SolveResult &r)
{
  return Json{{"lambda", r.lambda},
              {"rel_res_2norm", r.rel_res_2norm},
              {"eta", r.eta},
              {"eigenvector", r.eigenvector}};
}

void FromJson(const Json &j, SolveResult &r)
{
  j.at("lambda").get_to(r.lambda);
  j.at("rel_res_2norm").get_to(r.rel_res_2norm);
  j.at("eta").get_to(r.eta);
  j.at("eigenvector").get_to(r.eigenvector);
}

constexpr const char *kTaskNames[] = {"I_symbolic",          "II_factorize_b",
                                      "III_ritz_values",     "IV_interval_factorizations",
                                      "V_bisection",         "VI_shift_factorization",
                                      "VII_kth_eigenpair"};

Json ToJson(const Resources &r)
{
  Json out{{"symbolic_factorizations", r.symbolic_factorizations},
           {"factorizations", r.factorizations},
           {"failed_factorizations", r.failed_factorizations},
           {"nzf_estimate", r.nzf_estimate},
           {"nzf_b", r.nzf_b},
           {"nzf_shift", r.nzf_shift},
           {"nzf_total", r.nzf_total}};
  if (r.task_seconds)
  {
    Json tasks = Json::object();
    for (std::size_t i = 0; i < r.task_seconds->size(); i++)
    {
      tasks[kTaskNames[i]] = (*r.task_seconds)[i];
    }
    out["task_seconds"] = tasks;
  }
  else
  {
    out["task_seconds"] = nullptr;
  }
  return out;
}

void FromJson(const Json &j, Resources &r)
{
  j.at("symbolic_factorizations").get_to(r.symbolic_factorizations);
  j.at("factorizations").get_to(r.factorizations);
  j.at("failed_factorizations").get_to(r.failed_factorizations);
  j.at("nzf_estimate").get_to(r.nzf_estimate);
  j.at("nzf_b").get_to(r.nzf_b);
  j.at("nzf_shift").get_to(r.nzf_shift);
  j.at("nzf_total").get_to(r.nzf_total);
  const Json &tasks = j.at("task_seconds");
  if (tasks.is_null())
  {
    r.task_seconds.reset();
  }
  else
  {
    TaskSeconds seconds{};
    for (std::size_t i = 0; i < seconds.size(); i++)
    {
      tasks.at(kTaskNames[i]).get_to(seconds[i]);
    }
    r.task_seconds = seconds;
  }
}

Json ToJson(const Verification &v)
{
  return Json{{"oracle_lambda", v.oracle_lambda},
              {"rel_error", v.rel_error},
              {"angle", v.angle},
              {"index_ok", v.index_ok},
              {"interval_ok", v.interval_ok}};
}

void FromJson(const Json &j, Verification &v)
{
  j.at("oracle_lambda").get_to(v.oracle_lambda);
  j.at("rel_error").get_to(v.rel_error);
  j.at("angle").get_to(v.angle);
  j.at("index_ok").get_to(v.index_ok);
  j.at("interval_ok").get_to(v.interval_ok);
}

SolveStatus ParseStatus(const std::string &name)
{
  for (SolveStatus s : {SolveStatus::Converged, SolveStatus::ClusterSuspected, SolveStatus::Error})
  {
    if (StatusName(s) == name)
    {
      return s;
    }
  }
  throw Error("unknown report status '" + name + "'");
}

}  // namespace

std::string_view StatusName(SolveStatus status)
{
  switch (status)
  {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::ClusterSuspected:
      return "cluster_suspected";
    case SolveStatus::Error:
      return "error";
  }
  return "error";
}

std::string EmitJson(const SolveReport &r)
{
  Json out{{"schema", r.schema},
           {"config", ToJson(r.config)},
           {"n", r.n},
           {"nnz_a", r.nnz_a},
           {"nnz_b", r.nnz_b},
           {"shared_symbolic", r.shared_symbolic},
           {"kernels", r.kernels},
           {"status", std::string(StatusName(r.status))},
           {"stage1", ToJson(r.stage1)},
           {"stage2", ToJson(r.stage2)},
           {"stage3", ToJson(r.stage3)},
           {"result", r.result ? ToJson(*r.result) : Json(nullptr)},
           {"resources", ToJson(r.resources)},
           {"verification", r.verification ? ToJson(*r.verification) : Json(nullptr)},
           {"error", r.error ? Json{{"stage", r.error->stage}, {"message", r.error->message}}
                             : Json(nullptr)}};
  return out.dump(2) + "\n";
}

SolveReport ParseJson(std::string_view text)
{
  SolveReport r;
  try
  {
    const Json j = Json::parse(text);
    j.at("schema").get_to(r.schema);
    if (r.schema != kReportSchema)
    {
      throw Error("unsupported report schema '" + r.schema + "'");
    }
    FromJson(j.at("config"), r.config);
    j.at("n").get_to(r.n);
    j.at("nnz_a").get_to(r.nnz_a);
    j.at("nnz_b").get_to(r.nnz_b);
    j.at("shared_symbolic").get_to(r.shared_symbolic);
    j.at("kernels").get_to(r.kernels);
    r.status = ParseStatus(j.at("status").get<std::string>());
    FromJson(j.at("stage1"), r.stage1);
    FromJson(j.at("stage2"), r.stage2);
    FromJson(j.at("stage3"), r.stage3);
    if (!j.at("result").is_null())
    {
      FromJson(j.at("result"), r.result.emplace());
    }
    FromJson(j.at("resources"), r.resources);
    if (!j.at("verification").is_null())
    {
      FromJson(j.at("verification"), r.verification.emplace());
    }
    if (!j.at("error").is_null())
    {
      r.error = ErrorInfo{j.at("error").at("stage").get<std::string>(),
                          j.at("error").at("message").get<std::string>()};
    }
  }
  catch (const Json::exception &e)
  {
    throw Error(std::string("malformed report: ") + e.what());
  }
  return r;
}

namespace
{

std::string Format(const char *fmt, double value)
{
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, fmt, value);
  return buffer;
}

std::string Interval(const BracketInterval &b)
{
  return "[" + Format("%.16g", b.lower) + ", " + Format("%.16g", b.upper) + ")  nu = " +
         std::to_string(b.nu_lower) + ".." + std::to_string(b.nu_upper);
}

}  // namespace

std::string EmitText(const SolveReport &r)
{
  std::ostringstream out;
  out << "status        " << StatusName(r.status) << "\n";
  out << "problem       n = " << r.n << ", nnz(A) = " << r.nnz_a << ", nnz(B) = " << r.nnz_b
      << ", k = " << r.config.k << ", seed = " << r.config.seed << "\n";
  if (r.error)
  {
    out << "error         " << r.error->stage << ": " << r.error->message << "\n";
  }
  if (r.stage1.completed)
  {
    out << "interval      " << Interval(r.stage1.interval) << "  after j = " << r.stage1.iterations
        << (r.stage1.extended ? " (extended)" : "") << "\n";
  }
  if (r.stage2.completed)
  {
    out << "bisection     " << Interval(r.stage2.interval) << "  m = " << r.stage2.count
        << " after " << r.stage2.iterations << " iterations\n";
  }
  if (r.stage3.completed)
  {
    out << "shift-invert  sigma = " << Format("%.16g", r.stage3.sigma) << ", "
        << r.stage3.outcome << " at j = " << r.stage3.iterations << " (bound "
        << r.stage3.first_bound << ", residual " << r.stage3.first_residual << ", difference "
        << r.stage3.first_difference << ")\n";
  }
  if (r.result)
  {
    out << "lambda        " << Format("%.16g", r.result->lambda) << "\n";
    out << "residual      " << Format("%.3e", r.result->rel_res_2norm) << "\n";
    out << "eta           " << Format("%.3e", r.result->eta) << "\n";
  }
  out << "factorizations " << r.resources.factorizations << " (failed "
      << r.resources.failed_factorizations << "), nzf estimate " << r.resources.nzf_estimate
      << ", nzf total " << r.resources.nzf_total << "\n";
  if (r.resources.task_seconds)
  {
    out << "seconds      ";
    for (std::size_t i = 0; i < r.resources.task_seconds->size(); i++)
    {
      out << " " << kTaskNames[i] << "=" << Format("%.4f", (*r.resources.task_seconds)[i]);
    }
    out << "\n";
  }
  if (r.verification)
  {
    const auto &v = *r.verification;
    out << "oracle        lambda = " << Format("%.16g", v.oracle_lambda) << ", rel error "
        << Format("%.3e", v.rel_error) << ", angle " << Format("%.3e", v.angle) << ", index "
        << (v.index_ok ? "ok" : "WRONG") << ", interval " << (v.interval_ok ? "ok" : "WRONG")
        << "\n";
  }
  return out.str();
}

void EmitReport(const SolveReport &report, ReportFormat format, std::ostream &out)
{
  out << (format == ReportFormat::Json ? EmitJson(report) : EmitText(report));
  if (!out)
  {
    throw Error("failed to write report");
  }
}

}  // namespace kep
