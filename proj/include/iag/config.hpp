#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "iag/trace.hpp"
#include "iag/types.hpp"

namespace iag {

/// Raised for malformed or semantically invalid configuration; the message
/// carries the offending line/field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemSpec {
  enum class Kind { Quadratic, Logistic };
  Kind kind = Kind::Quadratic;
  int m = 1;
  Index n = 1;          // quadratic
  double mu = 1.0;      // quadratic generator target
  double lipschitz = 1.0;
  std::string data_path;  // logistic
  double lambda = 1.0;    // logistic
};

struct GammaSpec {
  enum class Mode { Explicit, GammaStar, GdOptimal };
  Mode mode = Mode::GammaStar;
  double value = 0;
};

struct ScheduleSpec {
  enum class Kind { Cyclic, Adversarial, Full };
  Kind kind = Kind::Cyclic;
  int delay_bound = 0;  // adversarial only
};

struct X0Spec {
  enum class Kind { Zeros, Random, Explicit };
  Kind kind = Kind::Zeros;
  Vector values;
};

/// One experiment, fully determined by the file plus the single top-level
/// seed: the problem generator uses seed, a random x0 uses seed+1 and an
/// adversarial schedule uses seed+2.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  ProblemSpec problem;
  std::vector<Method> methods;  // one for run, two or more for compare
  GammaSpec gamma;
  double beta = 0;
  ScheduleSpec schedule;
  X0Spec x0;
  StoppingRule stop;
  std::string trace_path = "trace.csv";
  std::string report_path = "report.json";
};

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name);
ExperimentConfig parse_config_file(const std::string& path);

/// Cross-field rules: stepsize/method/schedule compatibility, positive
/// stepsizes, momentum restricted to momentum methods. Throws ConfigError.
void validate_config(const ExperimentConfig& config);

/// The delay bound the configured schedule will have (without building it).
int configured_delay_bound(const ExperimentConfig& config);

}  // namespace iag
