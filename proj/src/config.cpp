#include "iag/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace iag {
namespace {

struct RawValue {
  std::string text;
  int line = 0;
};

// Minimal TOML-style reader: [section] headers, key = value lines, `#`
// comments. Values are quoted strings, numbers, booleans or flat arrays.
class RawConfig {
 public:
  RawConfig(const std::string& text, std::string name) : name_(std::move(name)) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      strip_comment(line);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      if (trimmed.front() == '[') {
        if (trimmed.back() != ']')
          fail(line_no, "", "unterminated section header");
        section = trim(trimmed.substr(1, trimmed.size() - 2));
        if (section.empty()) fail(line_no, "", "empty section name");
        continue;
      }
      const size_t eq = trimmed.find('=');
      if (eq == std::string::npos)
        fail(line_no, "", "expected `key = value`");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty()) fail(line_no, "", "empty key");
      if (value.empty()) fail(line_no, section + "." + key, "empty value");
      const std::string full = section.empty() ? key : section + "." + key;
      if (entries_.count(full)) fail(line_no, full, "duplicate key");
      entries_[full] = RawValue{value, line_no};
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  const RawValue& raw(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) fail(0, key, "missing required key");
    consumed_.insert(key);
    return it->second;
  }

  std::string get_string(const std::string& key) {
    const RawValue& v = raw(key);
    if (v.text.size() < 2 || v.text.front() != '"' || v.text.back() != '"')
      fail(v.line, key, "expected a quoted string");
    return v.text.substr(1, v.text.size() - 2);
  }

  double get_double(const std::string& key) {
    const RawValue& v = raw(key);
    return parse_double(v.text, v.line, key);
  }

  long get_long(const std::string& key) {
    const RawValue& v = raw(key);
    const double d = parse_double(v.text, v.line, key);
    if (std::floor(d) != d || std::abs(d) > 9e15)
      fail(v.line, key, "expected an integer");
    return static_cast<long>(d);
  }

  bool value_is_string(const std::string& key) const {
    auto it = entries_.find(key);
    return it != entries_.end() && !it->second.text.empty() &&
           it->second.text.front() == '"';
  }

  bool value_is_array(const std::string& key) const {
    auto it = entries_.find(key);
    return it != entries_.end() && !it->second.text.empty() &&
           it->second.text.front() == '[';
  }

  std::vector<double> get_double_array(const std::string& key) {
    const RawValue& v = raw(key);
    return parse_array(v.text, v.line, key, /*strings=*/false).numbers;
  }

  std::vector<std::string> get_string_array(const std::string& key) {
    const RawValue& v = raw(key);
    return parse_array(v.text, v.line, key, /*strings=*/true).strings;
  }

  void reject_unknown_keys() const {
    for (const auto& [key, value] : entries_)
      if (!consumed_.count(key))
        fail(value.line, key, "unknown key");
  }

  [[noreturn]] void fail(int line, const std::string& key,
                         const std::string& message) const {
    std::ostringstream out;
    out << name_;
    if (line > 0) out << ":" << line;
    if (!key.empty()) out << " [" << key << "]";
    out << ": " << message;
    throw ConfigError(out.str());
  }

 private:
  struct ArrayValue {
    std::vector<double> numbers;
    std::vector<std::string> strings;
  };

  static void strip_comment(std::string& line) {
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        return;
      }
    }
  }

  static std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  double parse_double(const std::string& text, int line,
                      const std::string& key) {
    try {
      size_t pos = 0;
      const double d = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument("");
      return d;
    } catch (const std::exception&) {
      fail(line, key, "expected a number, got `" + text + "`");
    }
  }

  ArrayValue parse_array(const std::string& text, int line,
                         const std::string& key, bool strings) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
      fail(line, key, "expected an array `[...]`");
    ArrayValue out;
    std::string body = text.substr(1, text.size() - 2);
    std::istringstream in(body);
    std::string item;
    while (std::getline(in, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) fail(line, key, "empty array element");
      if (strings) {
        if (t.size() < 2 || t.front() != '"' || t.back() != '"')
          fail(line, key, "expected quoted strings in array");
        out.strings.push_back(t.substr(1, t.size() - 2));
      } else {
        out.numbers.push_back(parse_double(t, line, key));
      }
    }
    if ((strings ? out.strings.empty() : out.numbers.empty()))
      fail(line, key, "empty array");
    return out;
  }

  std::string name_;
  std::map<std::string, RawValue> entries_;
  std::set<std::string> consumed_;
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name) {
  RawConfig raw(text, name);
  ExperimentConfig cfg;

  if (raw.has("seed")) cfg.seed = static_cast<std::uint64_t>(raw.get_long("seed"));

  const std::string kind = raw.get_string("problem.kind");
  if (kind == "quadratic") {
    cfg.problem.kind = ProblemSpec::Kind::Quadratic;
    cfg.problem.m = static_cast<int>(raw.get_long("problem.m"));
    cfg.problem.n = raw.get_long("problem.n");
    cfg.problem.mu = raw.get_double("problem.mu");
    cfg.problem.lipschitz = raw.get_double("problem.L");
  } else if (kind == "logistic") {
    cfg.problem.kind = ProblemSpec::Kind::Logistic;
    cfg.problem.data_path = raw.get_string("problem.data");
    cfg.problem.lambda = raw.get_double("problem.lambda");
    cfg.problem.m = static_cast<int>(raw.get_long("problem.m"));
  } else {
    raw.fail(0, "problem.kind", "must be \"quadratic\" or \"logistic\"");
  }

  if (raw.has("method.names")) {
    for (const std::string& name_str : raw.get_string_array("method.names")) {
      try {
        cfg.methods.push_back(parse_method(name_str));
      } catch (const std::invalid_argument& e) {
        raw.fail(0, "method.names", e.what());
      }
    }
  } else {
    try {
      cfg.methods.push_back(parse_method(raw.get_string("method.name")));
    } catch (const std::invalid_argument& e) {
      raw.fail(0, "method.name", e.what());
    }
  }

  if (raw.value_is_string("method.gamma")) {
    const std::string g = raw.get_string("method.gamma");
    if (g == "gamma_star") {
      cfg.gamma.mode = GammaSpec::Mode::GammaStar;
    } else if (g == "gd_optimal") {
      cfg.gamma.mode = GammaSpec::Mode::GdOptimal;
    } else {
      raw.fail(0, "method.gamma",
               "must be a number, \"gamma_star\" or \"gd_optimal\"");
    }
  } else {
    cfg.gamma.mode = GammaSpec::Mode::Explicit;
    cfg.gamma.value = raw.get_double("method.gamma");
  }
  if (raw.has("method.beta")) cfg.beta = raw.get_double("method.beta");

  if (raw.has("schedule.kind")) {
    const std::string sk = raw.get_string("schedule.kind");
    if (sk == "cyclic") {
      cfg.schedule.kind = ScheduleSpec::Kind::Cyclic;
    } else if (sk == "adversarial") {
      cfg.schedule.kind = ScheduleSpec::Kind::Adversarial;
    } else if (sk == "full") {
      cfg.schedule.kind = ScheduleSpec::Kind::Full;
    } else {
      raw.fail(0, "schedule.kind",
               "must be \"cyclic\", \"adversarial\" or \"full\"");
    }
  }
  if (cfg.schedule.kind == ScheduleSpec::Kind::Adversarial)
    cfg.schedule.delay_bound = static_cast<int>(raw.get_long("schedule.K"));

  if (raw.has("init.x0")) {
    if (raw.value_is_array("init.x0")) {
      cfg.x0.kind = X0Spec::Kind::Explicit;
      const auto values = raw.get_double_array("init.x0");
      cfg.x0.values.resize(static_cast<Index>(values.size()));
      for (size_t i = 0; i < values.size(); ++i)
        cfg.x0.values[static_cast<Index>(i)] = values[i];
    } else {
      const std::string x0 = raw.get_string("init.x0");
      if (x0 == "zeros") {
        cfg.x0.kind = X0Spec::Kind::Zeros;
      } else if (x0 == "random") {
        cfg.x0.kind = X0Spec::Kind::Random;
      } else {
        raw.fail(0, "init.x0", "must be \"zeros\", \"random\" or an array");
      }
    }
  }

  if (raw.has("stop.tolerance")) cfg.stop.tolerance = raw.get_double("stop.tolerance");
  if (raw.has("stop.max_iters")) cfg.stop.max_iters = raw.get_long("stop.max_iters");

  if (raw.has("output.trace")) cfg.trace_path = raw.get_string("output.trace");
  if (raw.has("output.report")) cfg.report_path = raw.get_string("output.report");

  raw.reject_unknown_keys();
  validate_config(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path);
}

int configured_delay_bound(const ExperimentConfig& config) {
  switch (config.schedule.kind) {
    case ScheduleSpec::Kind::Cyclic: return config.problem.m - 1;
    case ScheduleSpec::Kind::Adversarial: return config.schedule.delay_bound;
    case ScheduleSpec::Kind::Full: return 0;
  }
  throw std::logic_error("unreachable");
}

void validate_config(const ExperimentConfig& config) {
  const auto fail = [](const std::string& field, const std::string& message) {
    throw ConfigError("config [" + field + "]: " + message);
  };

  if (config.problem.m < 1) fail("problem.m", "must be at least 1");
  if (config.problem.kind == ProblemSpec::Kind::Quadratic) {
    if (config.problem.n < 1) fail("problem.n", "must be at least 1");
    if (!(config.problem.mu > 0)) fail("problem.mu", "must be positive");
    if (config.problem.lipschitz < config.problem.mu)
      fail("problem.L", "must be at least mu");
  } else {
    if (!(config.problem.lambda > 0)) fail("problem.lambda", "must be positive");
    if (config.problem.data_path.empty()) fail("problem.data", "missing path");
  }

  if (config.methods.empty()) fail("method.name", "no method given");
  if (config.gamma.mode == GammaSpec::Mode::Explicit &&
      !(config.gamma.value > 0))
    fail("method.gamma", "must be positive");
  if (config.beta < 0) fail("method.beta", "must be nonnegative");

  const int delay_bound = configured_delay_bound(config);
  if (config.schedule.kind == ScheduleSpec::Kind::Adversarial &&
      config.schedule.delay_bound < config.problem.m - 1)
    fail("schedule.K", "adversarial schedules need K >= m-1");

  bool any_momentum = false;
  for (Method method : config.methods)
    any_momentum |= method == Method::IAGM || method == Method::IGM;
  if (config.beta != 0 && !any_momentum)
    fail("method.beta", "beta only applies to momentum methods");

  if (config.gamma.mode == GammaSpec::Mode::GammaStar && delay_bound < 1)
    fail("method.gamma", "\"gamma_star\" requires a schedule with K >= 1");
  for (Method method : config.methods) {
    if (config.gamma.mode == GammaSpec::Mode::GdOptimal &&
        method != Method::GD && delay_bound != 0)
      fail("method.gamma", "\"gd_optimal\" requires method GD or K = 0");
  }

  if (!(config.stop.tolerance >= 0)) fail("stop.tolerance", "must be nonnegative");
  if (config.stop.max_iters < 0) fail("stop.max_iters", "must be nonnegative");
  if (config.trace_path.empty()) fail("output.trace", "empty path");
  if (config.report_path.empty()) fail("output.report", "empty path");
}

}  // namespace iag
