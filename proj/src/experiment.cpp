#include "iag/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include "iag/checks.hpp"
#include "iag/logistic.hpp"
#include "iag/quadratic.hpp"
#include "iag/random.hpp"
#include "iag/suite.hpp"
#include "iag/trace_io.hpp"

namespace iag {
namespace {

using nlohmann::json;

json json_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

json config_echo(const ExperimentConfig& cfg, const std::string& method_label,
                 double gamma, int delay_bound) {
  json problem;
  if (cfg.problem.kind == ProblemSpec::Kind::Quadratic) {
    problem = {{"kind", "quadratic"},
               {"m", cfg.problem.m},
               {"n", cfg.problem.n},
               {"mu", cfg.problem.mu},
               {"L", cfg.problem.lipschitz}};
  } else {
    problem = {{"kind", "logistic"},
               {"data", cfg.problem.data_path},
               {"lambda", cfg.problem.lambda},
               {"m", cfg.problem.m}};
  }
  std::string gamma_mode;
  switch (cfg.gamma.mode) {
    case GammaSpec::Mode::Explicit: gamma_mode = "explicit"; break;
    case GammaSpec::Mode::GammaStar: gamma_mode = "gamma_star"; break;
    case GammaSpec::Mode::GdOptimal: gamma_mode = "gd_optimal"; break;
  }
  std::string schedule;
  switch (cfg.schedule.kind) {
    case ScheduleSpec::Kind::Cyclic: schedule = "cyclic"; break;
    case ScheduleSpec::Kind::Adversarial: schedule = "adversarial"; break;
    case ScheduleSpec::Kind::Full: schedule = "full"; break;
  }
  std::string x0;
  switch (cfg.x0.kind) {
    case X0Spec::Kind::Zeros: x0 = "zeros"; break;
    case X0Spec::Kind::Random: x0 = "random"; break;
    case X0Spec::Kind::Explicit: x0 = "explicit"; break;
  }
  return {{"seed", cfg.seed},
          {"problem", problem},
          {"method", method_label},
          {"gamma_mode", gamma_mode},
          {"gamma", gamma},
          {"beta", cfg.beta},
          {"schedule", schedule},
          {"K", delay_bound},
          {"x0", x0},
          {"stop",
           {{"tolerance", cfg.stop.tolerance}, {"max_iters", cfg.stop.max_iters}}}};
}

json certificate_json(const RateCertificate& cert) {
  return {{"gamma", cert.gamma},
          {"gamma_bar", cert.gamma_bar},
          {"gamma_star", cert.gamma_star},
          {"c_K", cert.c_k},
          {"Q", cert.cond},
          {"K", cert.delay_bound},
          {"per_step_bound", cert.per_step_bound},
          {"p", cert.p},
          {"q", cert.q},
          {"s", cert.s},
          {"rho", cert.rho},
          {"linear_convergence_guaranteed", cert.step_within_guarantee},
          {"contracting", cert.contracting}};
}

json checks_json(const std::vector<CheckRecord>& checks) {
  json arr = json::array();
  for (const CheckRecord& c : checks) {
    json entry = {{"name", c.name}, {"ok", c.ok}};
    entry["first_violation_k"] =
        c.first_violation_k ? json(*c.first_violation_k) : json(nullptr);
    arr.push_back(entry);
  }
  return arr;
}

void push_check(std::vector<CheckRecord>& checks, const std::string& name,
                const CheckOutcome& outcome) {
  CheckRecord rec;
  rec.name = name;
  rec.ok = !outcome.has_value();
  if (outcome) rec.first_violation_k = outcome->k;
  checks.push_back(rec);
}

std::vector<CheckRecord> assemble_checks(const Trace& trace,
                                         const Schedule* schedule,
                                         GammaSpec::Mode gamma_mode) {
  std::vector<CheckRecord> checks;
  const bool aggregated =
      trace.method == Method::IAG || trace.method == Method::IAGM;

  if (aggregated && schedule != nullptr && trace.iterations() >= 1) {
    const auto violation = validate_schedule(*schedule, trace.iterations());
    CheckRecord rec;
    rec.name = "schedule_delay_bound";
    rec.ok = !violation.has_value();
    if (violation) rec.first_violation_k = violation->k;
    checks.push_back(rec);
  }

  if (aggregated) {
    push_check(checks, "gradient_error_bound", error_bound_check(trace));
    push_check(checks, "simple_gradient_error_bound",
               simple_error_bound_check(trace));
  }

  if (trace.method == Method::IAG && trace.delay_bound >= 1) {
    const RateCertificate cert =
        certificate(trace.mu, trace.lipschitz, trace.delay_bound, trace.gamma);
    if (std::abs(trace.gamma - cert.gamma_star) <= 1e-12 * cert.gamma_star) {
      push_check(checks, "certified_distance_bound",
                 certified_dist_check(trace, cert));
      push_check(checks, "certified_cost_bound",
                 certified_cost_check(trace, cert));
    } else if (cert.contracting) {
      push_check(checks, "lyapunov_rate_bound", lyapunov_rate_check(trace, cert));
    }
  }

  if (trace.method == Method::GD && gamma_mode == GammaSpec::Mode::GdOptimal &&
      trace.rows() >= 12) {
    const GdCertificate gd = gd_certificate(trace.mu, trace.lipschitz);
    CheckRecord rec;
    rec.name = "gd_observed_rate";
    try {
      rec.ok = observed_rate(trace, 0.1) <= gd.rate + 1e-6;
    } catch (const std::invalid_argument&) {
      rec.ok = true;  // too few usable points to estimate a rate
    }
    checks.push_back(rec);
  }
  return checks;
}

ExperimentResult run_one(const ExperimentConfig& cfg, Method method,
                         const Problem& problem, const Schedule* schedule,
                         const Vector& x0, double gamma) {
  const auto t0 = std::chrono::steady_clock::now();
  const double beta =
      (method == Method::IAGM || method == Method::IGM) ? cfg.beta : 0.0;
  ExperimentResult result;
  result.method = method_name(method);
  result.trace = run(problem, method, gamma, beta, schedule, x0, cfg.stop);
  result.checks = assemble_checks(result.trace, schedule, cfg.gamma.mode);
  for (const CheckRecord& c : result.checks) result.checks_ok &= c.ok;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  const Trace& tr = result.trace;
  json report;
  report["config"] = config_echo(cfg, method_name(method), gamma, tr.delay_bound);
  report["problem"] = {{"m", problem.num_components()},
                       {"n", problem.dim()},
                       {"mu", problem.mu()},
                       {"L", problem.lipschitz()},
                       {"Q", problem.condition_number()}};
  if ((method == Method::IAG || method == Method::IAGM) &&
      tr.delay_bound >= 1) {
    report["certificate"] =
        certificate_json(certificate(tr.mu, tr.lipschitz, tr.delay_bound, gamma));
  } else if (method == Method::GD) {
    const GdCertificate gd = gd_certificate(tr.mu, tr.lipschitz);
    report["certificate"] = {{"gd_rate", gd.rate}, {"gd_stepsize", gd.stepsize}};
  } else {
    report["certificate"] = nullptr;
  }
  try {
    report["observed_rate"] = observed_rate(tr, 0.1);
  } catch (const std::invalid_argument&) {
    report["observed_rate"] = nullptr;
  }
  report["iterations"] = tr.iterations();
  report["reached_tolerance"] = tr.reached_tolerance;
  report["final"] = {{"dist", tr.dist.back()},
                     {"cost_gap", tr.cost_gap.back()},
                     {"agg_grad_norm", tr.agg_grad_norm.back()},
                     {"err_norm", json_or_null(tr.err_norm.back())}};
  report["checks"] = checks_json(result.checks);
  long violations = 0;
  for (const CheckRecord& c : result.checks) violations += c.ok ? 0 : 1;
  report["violation_count"] = violations;
  report["wall_time_s"] = seconds;
  result.report = std::move(report);
  return result;
}

std::string resolve_output(const std::string& out_dir,
                           const std::string& configured) {
  namespace fs = std::filesystem;
  fs::path p(configured);
  if (out_dir.empty() || p.is_absolute()) return configured;
  return (fs::path(out_dir) / p).string();
}

}  // namespace

Problem build_problem(const ExperimentConfig& config) {
  if (config.problem.kind == ProblemSpec::Kind::Quadratic)
    return make_quadratic_sum(config.seed, config.problem.m, config.problem.n,
                              config.problem.mu, config.problem.lipschitz);
  LogisticData data;
  try {
    data = load_logistic_csv(config.problem.data_path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  try {
    return make_logistic_l2(data.features, data.labels, config.problem.lambda,
                            config.problem.m);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config [problem]: ") + e.what());
  }
}

std::unique_ptr<Schedule> build_schedule(const ExperimentConfig& config) {
  switch (config.schedule.kind) {
    case ScheduleSpec::Kind::Cyclic:
      return std::make_unique<CyclicSchedule>(config.problem.m);
    case ScheduleSpec::Kind::Adversarial:
      return std::make_unique<AdversarialSchedule>(
          config.problem.m, config.schedule.delay_bound, config.seed + 2);
    case ScheduleSpec::Kind::Full:
      return std::make_unique<FullRefreshSchedule>(config.problem.m);
  }
  throw std::logic_error("unreachable");
}

Vector build_x0(const ExperimentConfig& config, Index n) {
  switch (config.x0.kind) {
    case X0Spec::Kind::Zeros: return Vector::Zero(n);
    case X0Spec::Kind::Random: {
      std::mt19937_64 rng(config.seed + 1);
      return gaussian_vector(n, rng);
    }
    case X0Spec::Kind::Explicit:
      if (config.x0.values.size() != n)
        throw ConfigError("config [init.x0]: expected " + std::to_string(n) +
                          " entries, got " +
                          std::to_string(config.x0.values.size()));
      return config.x0.values;
  }
  throw std::logic_error("unreachable");
}

double resolve_gamma(const ExperimentConfig& config, const Problem& problem,
                     int delay_bound, Method) {
  switch (config.gamma.mode) {
    case GammaSpec::Mode::Explicit: return config.gamma.value;
    case GammaSpec::Mode::GammaStar:
      if (delay_bound < 1)
        throw ConfigError(
            "config [method.gamma]: \"gamma_star\" requires K >= 1");
      return certificate(problem.mu(), problem.lipschitz(), delay_bound)
          .gamma_star;
    case GammaSpec::Mode::GdOptimal:
      return gd_certificate(problem.mu(), problem.lipschitz()).stepsize;
  }
  throw std::logic_error("unreachable");
}

ExperimentResult execute_experiment(const ExperimentConfig& config) {
  validate_config(config);
  if (config.methods.size() != 1)
    throw ConfigError("config [method.name]: run takes exactly one method");
  const Method method = config.methods.front();
  const Problem problem = build_problem(config);
  const auto schedule = build_schedule(config);
  const Vector x0 = build_x0(config, problem.dim());
  const double gamma =
      resolve_gamma(config, problem, schedule->delay_bound(), method);
  const bool aggregated = method == Method::IAG || method == Method::IAGM;
  return run_one(config, method, problem, aggregated ? schedule.get() : nullptr,
                 x0, gamma);
}

std::vector<ExperimentResult> execute_compare(const ExperimentConfig& config) {
  validate_config(config);
  if (config.methods.size() < 2)
    throw ConfigError("config [method.names]: compare needs at least two methods");
  const Problem problem = build_problem(config);
  const auto schedule = build_schedule(config);
  const Vector x0 = build_x0(config, problem.dim());
  // One shared stepsize for all methods, resolved against the schedule's K.
  const double gamma =
      resolve_gamma(config, problem, schedule->delay_bound(), config.methods.front());
  std::vector<ExperimentResult> results;
  for (Method method : config.methods) {
    const bool aggregated = method == Method::IAG || method == Method::IAGM;
    results.push_back(run_one(config, method, problem,
                              aggregated ? schedule.get() : nullptr, x0, gamma));
  }
  return results;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, std::ostream& out,
            std::ostream& err) {
  ExperimentConfig config;
  ExperimentResult result;
  try {
    config = parse_config_file(config_path);
    if (seed_override) config.seed = *seed_override;
    result = execute_experiment(config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << "\n";
    return kDivergence;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kBadConfig;
  }

  const std::string trace_path = resolve_output(out_dir, config.trace_path);
  const std::string report_path = resolve_output(out_dir, config.report_path);
  write_trace_csv(result.trace, trace_path);
  std::ofstream report_file(report_path, std::ios::binary);
  if (!report_file) {
    err << "cannot open output file: " << report_path << "\n";
    return kBadConfig;
  }
  report_file << result.report.dump(2) << "\n";

  out << "method " << result.method << ": " << result.trace.iterations()
      << " iterations, final dist " << result.trace.dist.back() << ", "
      << (result.checks_ok ? "all checks ok" : "CHECK FAILURES") << "\n";
  out << "trace: " << trace_path << "\nreport: " << report_path << "\n";
  return result.checks_ok ? kOk : kCheckFailed;
}

int cmd_certify(double mu, double lipschitz, int delay_bound,
                std::optional<double> gamma, std::ostream& out,
                std::ostream& err) {
  try {
    if (delay_bound == 0) {
      const GdCertificate gd = gd_certificate(mu, lipschitz);
      out << json{{"K", 0},
                  {"Q", lipschitz / mu},
                  {"gd_rate", gd.rate},
                  {"gd_stepsize", gd.stepsize}}
                 .dump(2)
          << "\n";
      return kOk;
    }
    const RateCertificate cert =
        gamma ? certificate(mu, lipschitz, delay_bound, *gamma)
              : certificate(mu, lipschitz, delay_bound);
    out << certificate_json(cert).dump(2) << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kBadConfig;
  }
}

int cmd_compare(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed_override, std::ostream& out,
                std::ostream& err) {
  ExperimentConfig config;
  std::vector<ExperimentResult> results;
  try {
    config = parse_config_file(config_path);
    if (seed_override) config.seed = *seed_override;
    results = execute_compare(config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << "\n";
    return kDivergence;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kBadConfig;
  }

  std::vector<std::pair<std::string, const Trace*>> traces;
  json per_method = json::array();
  bool all_ok = true;
  const ExperimentResult* best_aggregated = nullptr;
  const ExperimentResult* plain_ig = nullptr;
  for (const ExperimentResult& r : results) {
    traces.emplace_back(r.method, &r.trace);
    per_method.push_back({{"method", r.method},
                          {"iterations", r.trace.iterations()},
                          {"final_dist", r.trace.dist.back()},
                          {"reached_tolerance", r.trace.reached_tolerance},
                          {"checks", checks_json(r.checks)}});
    all_ok &= r.checks_ok;
    if (r.trace.method == Method::IAG &&
        (best_aggregated == nullptr ||
         r.trace.dist.back() < best_aggregated->trace.dist.back()))
      best_aggregated = &r;
    if (r.trace.method == Method::IG) plain_ig = &r;
  }

  std::string method_list;
  for (const ExperimentResult& r : results) {
    if (!method_list.empty()) method_list += ",";
    method_list += r.method;
  }
  json report;
  report["config"] = config_echo(config, method_list,
                                 results.front().trace.gamma,
                                 results.front().trace.delay_bound);
  report["methods"] = per_method;
  if (best_aggregated != nullptr && plain_ig != nullptr) {
    const double iag_dist = best_aggregated->trace.dist.back();
    const double ig_dist = plain_ig->trace.dist.back();
    report["iag_vs_ig"] = {
        {"iag_final_dist", iag_dist},
        {"iag_reached_tolerance", best_aggregated->trace.reached_tolerance},
        {"ig_final_dist", ig_dist},
        {"ig_over_iag_ratio", iag_dist > 0 ? json(ig_dist / iag_dist) : json(nullptr)}};
  }

  const std::string trace_path = resolve_output(out_dir, config.trace_path);
  const std::string report_path = resolve_output(out_dir, config.report_path);
  write_compare_csv(traces, trace_path);
  std::ofstream report_file(report_path, std::ios::binary);
  if (!report_file) {
    err << "cannot open output file: " << report_path << "\n";
    return kBadConfig;
  }
  report_file << report.dump(2) << "\n";

  for (const ExperimentResult& r : results)
    out << r.method << ": final dist " << r.trace.dist.back() << " after "
        << r.trace.iterations() << " iterations\n";
  return all_ok ? kOk : kCheckFailed;
}

int cmd_gradcheck(const std::string& config_path,
                  std::optional<std::uint64_t> seed_override, std::ostream& out,
                  std::ostream& err) {
  ExperimentConfig config;
  try {
    config = parse_config_file(config_path);
    if (seed_override) config.seed = *seed_override;
    const Problem problem = build_problem(config);
    const double tolerance = 1e-6;
    json components = json::array();
    bool pass = true;
    for (int i = 0; i < problem.num_components(); ++i) {
      const double worst = gradient_fd_error(
          problem.component(i), 20, config.seed + 3 + static_cast<std::uint64_t>(i));
      components.push_back({{"index", i}, {"max_rel_error", worst}});
      pass &= worst <= tolerance;
    }
    out << json{{"tolerance", tolerance}, {"pass", pass}, {"components", components}}
               .dump(2)
        << "\n";
    return pass ? kOk : kCheckFailed;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kBadConfig;
  }
}

int cmd_suite(std::ostream& out) {
  const auto results = run_certification_suite(out);
  return all_passed(results) ? kOk : kCheckFailed;
}

}  // namespace iag
