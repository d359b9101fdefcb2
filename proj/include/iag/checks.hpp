#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "iag/certificate.hpp"
#include "iag/trace.hpp"

namespace iag {

struct BoundViolation {
  long k = 0;
  double measured = 0;
  double bound = 0;
};

/// nullopt means every checked inequality holds.
using CheckOutcome = std::optional<BoundViolation>;

/// Multiplicative slack on inequality checks; covers 64-bit rounding only.
inline constexpr double kCheckSlack = 1e-9;
/// Additive slack on gradient-error bounds.
inline constexpr double kErrorBoundSlack = 1e-9;

/// 3 gamma L^2 K * max dist over [(k-2K)+, k-1]; zero at k = 0.
double iag_error_bound_rhs(const std::vector<double>& dist, long k,
                           double gamma, double lipschitz, int delay_bound);
double iag_error_bound_rhs(const Trace& trace, long k);

/// (3 gamma L^2 K + beta L K (3 gamma L + 2 beta)) * max dist over
/// [(k-2K-1)+, k-1]; zero at k = 0.
double iagm_error_bound_rhs(const std::vector<double>& dist, long k,
                            double gamma, double beta, double lipschitz,
                            int delay_bound);
double iagm_error_bound_rhs(const Trace& trace, long k);

/// |e^k| <= staleness rhs + 1e-9 at every k, picking the IAG or IAG-M form by
/// the trace's method.
CheckOutcome error_bound_check(const Trace& trace);

/// |e^k| <= 2 L max dist over [(k-K)+, k] + 1e-9.
CheckOutcome simple_error_bound_check(const Trace& trace);

/// dist_k <= per_step_bound^k dist_0 (1 + slack) at every recorded k.
/// Requires the trace stepsize to equal cert.gamma_star.
CheckOutcome certified_dist_check(const Trace& trace,
                                  const RateCertificate& cert);
/// cost_gap_k <= (L/2) per_step_bound^{2k} dist_0^2 (1 + slack).
CheckOutcome certified_cost_check(const Trace& trace,
                                  const RateCertificate& cert);
/// Both of the above; first violation of either.
CheckOutcome certified_rate_check(const Trace& trace,
                                  const RateCertificate& cert);

/// dist_k^2 <= rho(gamma)^k dist_0^2 (1 + slack): the guarantee available at
/// any contracting stepsize, not just gamma_star. Requires cert.s < 1.
CheckOutcome lyapunov_rate_check(const Trace& trace,
                                 const RateCertificate& cert);

/// Per-step ratio dist_{k+1} <= (rate + slack) dist_k wherever dist_k > 0.
CheckOutcome gd_contraction_check(const Trace& trace, double rate,
                                  double slack);

struct PerturbedDecayOutcome {
  double rate = 0;
  /// First k where the sequence itself breaks the recursion hypothesis.
  std::optional<long> hypothesis_violation;
  /// First k with V_k > rate^k V_0 (meaningful when the hypothesis holds).
  std::optional<long> conclusion_violation;
  bool ok() const { return !hypothesis_violation && !conclusion_violation; }
};

/// Verifies both the hypothesis V_{k+1} <= p V_k + q max over the trailing
/// window of width delay(k) <= d_max, and the conclusion V_k <= rate^k V_0.
PerturbedDecayOutcome perturbed_decay_check(
    const std::vector<double>& v, double p, double q,
    const std::function<int(long)>& delay, int d_max);
PerturbedDecayOutcome perturbed_decay_check(const std::vector<double>& v,
                                            double p, double q,
                                            int d_max);  // constant delay

/// exp of the least-squares slope of log dist_k over k, after discarding the
/// first burn_in fraction of the trace. Zero entries are skipped; an all-zero
/// tail reports rate 0. Needs at least 10 usable points otherwise.
double observed_rate(const std::vector<double>& dist, double burn_in_fraction);
double observed_rate(const Trace& trace, double burn_in_fraction);

}  // namespace iag
