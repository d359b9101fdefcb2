#pragma once

#include <stdexcept>
#include <string>

#include "iag/gradient_table.hpp"
#include "iag/schedule.hpp"
#include "iag/trace.hpp"

namespace iag {

/// Iterate, previous iterate (for momentum) and the gradient table at
/// iteration k. Single-owner mutable; one run advances it sequentially.
struct SolverState {
  Vector x;
  Vector x_prev;  // equals x at initialization, so the first momentum term is zero
  GradientTable table;
  long k = 0;
};

/// Fresh table at x0: every sample time 0 and aggregate = grad f(x0), so the
/// gradient error starts exactly at zero.
SolverState init_state(const Problem& problem, const Vector& x0);

/// One aggregated-gradient step: move x to x - gamma g using the current
/// aggregate (whose sample times are all <= k), then re-evaluate the scheduled
/// components at the new iterate with sample time k+1.
void iag_step(SolverState& state, const Problem& problem, double gamma,
              const Schedule& schedule);

/// iag_step plus the heavy-ball term beta (x^k - x^{k-1}).
void iagm_step(SolverState& state, const Problem& problem, double gamma,
               double beta, const Schedule& schedule);

/// Plain incremental step x - gamma grad f_i(x).
Vector ig_step(const Vector& x, const Problem& problem, double gamma, int i);

/// Incremental step with heavy-ball momentum taken from the last two
/// cycle-boundary iterates; the same difference is applied at every inner step
/// of a cycle.
Vector igm_step(const Vector& x, const Vector& x_outer,
                const Vector& x_outer_prev, const Problem& problem,
                double gamma, double beta, int i);

/// g^k - grad f(x^k). Pure; no mutation.
Vector gradient_error(const SolverState& state, const Problem& problem);

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long last_finite_k, const std::string& what);
  long last_finite_k() const { return last_finite_k_; }

 private:
  long last_finite_k_;
};

/// Runs a method until |g^k| <= stop.tolerance or k = stop.max_iters,
/// recording one trace row per iteration. The schedule is required for
/// IAG/IAG-M and ignored otherwise (GD refreshes nothing; IG and IG-M use the
/// cyclic component order). Throws DivergenceError when an iterate goes
/// nonfinite or |x| exceeds 1e12.
Trace run(const Problem& problem, Method method, double gamma, double beta,
          const Schedule* schedule, const Vector& x0, const StoppingRule& stop);

}  // namespace iag
