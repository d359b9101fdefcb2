#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "iag/config.hpp"
#include "iag/problem.hpp"
#include "iag/schedule.hpp"
#include "iag/solver.hpp"

namespace iag {

/// Every enabled inequality check appears here with an explicit status;
/// nothing is silently omitted.
struct CheckRecord {
  std::string name;
  bool ok = false;
  std::optional<long> first_violation_k;
};

struct ExperimentResult {
  std::string method;
  Trace trace;
  std::vector<CheckRecord> checks;
  bool checks_ok = true;
  nlohmann::json report;
};

/// Builds the configured problem/schedule/x0, runs the single configured
/// method and evaluates the checks that apply to it. No file I/O.
ExperimentResult execute_experiment(const ExperimentConfig& config);

/// Runs every configured method on one shared problem and start point.
std::vector<ExperimentResult> execute_compare(const ExperimentConfig& config);

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kBadConfig = 2,
  kDivergence = 3,
};

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, std::ostream& out,
            std::ostream& err);
int cmd_certify(double mu, double lipschitz, int delay_bound,
                std::optional<double> gamma, std::ostream& out,
                std::ostream& err);
int cmd_compare(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed_override, std::ostream& out,
                std::ostream& err);
int cmd_gradcheck(const std::string& config_path,
                  std::optional<std::uint64_t> seed_override, std::ostream& out,
                  std::ostream& err);
int cmd_suite(std::ostream& out);

// Building blocks shared by the commands and the test suites.
Problem build_problem(const ExperimentConfig& config);
std::unique_ptr<Schedule> build_schedule(const ExperimentConfig& config);
Vector build_x0(const ExperimentConfig& config, Index n);
double resolve_gamma(const ExperimentConfig& config, const Problem& problem,
                     int delay_bound, Method method);

}  // namespace iag
