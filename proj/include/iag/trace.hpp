#pragma once

#include <string>
#include <vector>

namespace iag {

enum class Method { IAG, IAGM, IG, IGM, GD };

std::string method_name(Method method);
Method parse_method(const std::string& name);  // throws on unknown names

struct StoppingRule {
  double tolerance = 1e-10;  // on the norm of the (approximate) gradient
  long max_iters = 1000000;
};

/// Per-iteration record of one run. Row k describes the iterate x^k before the
/// step to x^{k+1}. All rows are kept in memory (bound checks need contiguous
/// history); CSV output may be down-sampled. Columns that do not apply to a
/// method hold NaN.
struct Trace {
  Method method = Method::GD;
  double gamma = 0;
  double beta = 0;
  int delay_bound = 0;  // K of the executed schedule; 0 for GD/IG
  double mu = 0, lipschitz = 0, cond = 0;
  double f_star = 0;
  bool reached_tolerance = false;

  std::vector<double> dist;           // |x^k - x*|
  std::vector<double> cost_gap;       // f(x^k) - f*
  std::vector<double> agg_grad_norm;  // |g^k|; full gradient norm for GD/IG
  std::vector<double> err_norm;       // |g^k - grad f(x^k)|
  std::vector<double> err_bound_rhs;  // staleness bound on |e^k|
  std::vector<double> thm1_bound;     // certified distance bound, when defined

  long rows() const { return static_cast<long>(dist.size()); }
  long iterations() const { return rows() - 1; }
  double dist0() const { return dist.empty() ? 0.0 : dist.front(); }
};

}  // namespace iag
