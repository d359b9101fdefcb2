#include "iag/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iag/checks.hpp"

namespace iag {
namespace {

constexpr double kDivergenceCap = 1e12;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_step_args(const Problem&, double gamma, double beta) {
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  if (beta < 0) throw std::invalid_argument("beta must be nonnegative");
}

// Move first with the aggregate built from sample times <= k, then refresh the
// scheduled components at the new iterate with sample time k+1. This keeps the
// cyclic sample-time recursion exact.
void aggregated_step(SolverState& state, const Problem& problem, double gamma,
                     double beta, const Schedule& schedule,
                     std::vector<int>& buf) {
  Vector x_next = state.x - gamma * state.table.aggregate();
  if (beta != 0.0) x_next += beta * (state.x - state.x_prev);
  const long t = state.k + 1;
  schedule.refresh(t, buf);
  if (buf.empty())
    throw std::logic_error("schedule produced an empty refresh set");
  state.x_prev = std::move(state.x);
  state.x = std::move(x_next);
  for (int i : buf) state.table.refresh(problem, i, state.x, t);
  state.k = t;
}

}  // namespace

SolverState init_state(const Problem& problem, const Vector& x0) {
  return SolverState{x0, x0, GradientTable(problem, x0), 0};
}

void iag_step(SolverState& state, const Problem& problem, double gamma,
              const Schedule& schedule) {
  check_step_args(problem, gamma, 0.0);
  std::vector<int> buf;
  aggregated_step(state, problem, gamma, 0.0, schedule, buf);
}

void iagm_step(SolverState& state, const Problem& problem, double gamma,
               double beta, const Schedule& schedule) {
  check_step_args(problem, gamma, beta);
  std::vector<int> buf;
  aggregated_step(state, problem, gamma, beta, schedule, buf);
}

Vector ig_step(const Vector& x, const Problem& problem, double gamma, int i) {
  if (gamma < 0) throw std::invalid_argument("gamma must be nonnegative");
  if (i < 0 || i >= problem.num_components())
    throw std::out_of_range("component index out of range");
  return x - gamma * problem.component(i).gradient(x);
}

Vector igm_step(const Vector& x, const Vector& x_outer,
                const Vector& x_outer_prev, const Problem& problem,
                double gamma, double beta, int i) {
  if (beta < 0) throw std::invalid_argument("beta must be nonnegative");
  Vector next = ig_step(x, problem, gamma, i);
  if (beta != 0.0) next += beta * (x_outer - x_outer_prev);
  return next;
}

Vector gradient_error(const SolverState& state, const Problem& problem) {
  return state.table.aggregate() - problem.full_gradient(state.x);
}

DivergenceError::DivergenceError(long last_finite_k, const std::string& what)
    : std::runtime_error(what), last_finite_k_(last_finite_k) {}

Trace run(const Problem& problem, Method method, double gamma, double beta,
          const Schedule* schedule, const Vector& x0,
          const StoppingRule& stop) {
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  if (beta < 0) throw std::invalid_argument("beta must be nonnegative");
  const bool momentum = method == Method::IAGM || method == Method::IGM;
  if (!momentum && beta != 0.0)
    throw std::invalid_argument("beta is only meaningful for momentum methods");
  const bool aggregated = method == Method::IAG || method == Method::IAGM;
  if (aggregated && schedule == nullptr)
    throw std::invalid_argument("aggregated methods need a schedule");
  if (aggregated && schedule->num_components() != problem.num_components())
    throw std::invalid_argument("schedule component count mismatch");
  if (x0.size() != problem.dim())
    throw std::invalid_argument("x0 dimension mismatch");
  if (stop.max_iters < 0) throw std::invalid_argument("max_iters negative");

  Trace trace;
  trace.method = method;
  trace.gamma = gamma;
  trace.beta = beta;
  trace.delay_bound = aggregated ? schedule->delay_bound() : 0;
  trace.mu = problem.mu();
  trace.lipschitz = problem.lipschitz();
  trace.cond = problem.condition_number();
  trace.f_star = problem.f_star();

  // Certified per-iteration reference bounds, where defined.
  double dist_bound_base = kNan;
  if (method == Method::IAG && trace.delay_bound >= 1) {
    const RateCertificate cert =
        certificate(trace.mu, trace.lipschitz, trace.delay_bound);
    if (std::abs(gamma - cert.gamma_star) <= 1e-12 * cert.gamma_star)
      dist_bound_base = cert.per_step_bound;
  }
  if (method == Method::GD) {
    const GdCertificate gd = gd_certificate(trace.mu, trace.lipschitz);
    if (std::abs(gamma - gd.stepsize) <= 1e-12 * gd.stepsize)
      dist_bound_base = gd.rate;
  }

  const long reserve = std::min<long>(stop.max_iters + 1, 1 << 20);
  trace.dist.reserve(static_cast<size_t>(reserve));
  trace.cost_gap.reserve(static_cast<size_t>(reserve));

  const auto record = [&](const Vector& x, double grad_norm, double err,
                          double rhs, long k) {
    trace.dist.push_back((x - problem.x_star()).norm());
    trace.cost_gap.push_back(problem.value(x) - problem.f_star());
    trace.agg_grad_norm.push_back(grad_norm);
    trace.err_norm.push_back(err);
    trace.err_bound_rhs.push_back(rhs);
    trace.thm1_bound.push_back(
        std::isnan(dist_bound_base)
            ? kNan
            : std::pow(dist_bound_base, static_cast<double>(k)) *
                  trace.dist.front());
  };

  const auto guard = [&](const Vector& x, long last_finite) {
    if (!x.allFinite() || x.norm() > kDivergenceCap)
      throw DivergenceError(
          last_finite,
          "divergent iterate at k = " + std::to_string(last_finite + 1) +
              "; last finite iteration k = " + std::to_string(last_finite) +
              " (gamma = " + std::to_string(gamma) + ")");
  };

  switch (method) {
    case Method::GD: {
      Vector x = x0;
      for (long k = 0;; ++k) {
        const Vector g = problem.full_gradient(x);
        const double gnorm = g.norm();
        record(x, gnorm, 0.0, 0.0, k);
        if (gnorm <= stop.tolerance) {
          trace.reached_tolerance = true;
          break;
        }
        if (k >= stop.max_iters) break;
        x -= gamma * g;
        guard(x, k);
      }
      break;
    }
    case Method::IAG:
    case Method::IAGM: {
      SolverState state = init_state(problem, x0);
      std::vector<int> buf;
      for (;;) {
        const long k = state.k;
        const double gnorm = state.table.aggregate().norm();
        const double err = gradient_error(state, problem).norm();
        const double rhs =
            method == Method::IAG
                ? iag_error_bound_rhs(trace.dist, k, gamma, trace.lipschitz,
                                      trace.delay_bound)
                : iagm_error_bound_rhs(trace.dist, k, gamma, beta,
                                       trace.lipschitz, trace.delay_bound);
        record(state.x, gnorm, err, rhs, k);
        if (gnorm <= stop.tolerance) {
          trace.reached_tolerance = true;
          break;
        }
        if (k >= stop.max_iters) break;
        aggregated_step(state, problem, gamma, beta, *schedule, buf);
        guard(state.x, k);
      }
      const Vector recomputed = state.table.recompute_aggregate();
      if ((recomputed - state.table.aggregate()).norm() >
          1e-12 * (1.0 + recomputed.norm()))
        throw std::logic_error("gradient table aggregate drifted");
      break;
    }
    case Method::IG:
    case Method::IGM: {
      const int m = problem.num_components();
      Vector x = x0;
      Vector x_outer = x0;
      Vector x_outer_prev = x0;
      for (long k = 0;; ++k) {
        const double gnorm = problem.full_gradient(x).norm();
        record(x, gnorm, kNan, kNan, k);
        if (gnorm <= stop.tolerance) {
          trace.reached_tolerance = true;
          break;
        }
        if (k >= stop.max_iters) break;
        if (method == Method::IGM && k > 0 && k % m == 0) {
          x_outer_prev = x_outer;
          x_outer = x;
        }
        const int i = static_cast<int>(k % m);
        x = method == Method::IGM
                ? igm_step(x, x_outer, x_outer_prev, problem, gamma, beta, i)
                : ig_step(x, problem, gamma, i);
        guard(x, k);
      }
      break;
    }
  }
  return trace;
}

}  // namespace iag
