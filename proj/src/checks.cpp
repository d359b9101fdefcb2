#include "iag/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace iag {
namespace {

double window_max(const std::vector<double>& v, long lo, long hi) {
  double best = 0.0;
  for (long i = lo; i <= hi; ++i)
    best = std::max(best, v[static_cast<size_t>(i)]);
  return best;
}

void check_window(const std::vector<double>& dist, long k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  if (k > static_cast<long>(dist.size()))
    throw std::out_of_range("distance window unavailable");
}

}  // namespace

double iag_error_bound_rhs(const std::vector<double>& dist, long k,
                           double gamma, double lipschitz, int delay_bound) {
  check_window(dist, k);
  if (k == 0) return 0.0;
  const double kk = static_cast<double>(delay_bound);
  const double coeff = 3.0 * gamma * lipschitz * lipschitz * kk;
  return coeff * window_max(dist, std::max<long>(0, k - 2 * delay_bound), k - 1);
}

double iag_error_bound_rhs(const Trace& trace, long k) {
  return iag_error_bound_rhs(trace.dist, k, trace.gamma, trace.lipschitz,
                             trace.delay_bound);
}

double iagm_error_bound_rhs(const std::vector<double>& dist, long k,
                            double gamma, double beta, double lipschitz,
                            int delay_bound) {
  check_window(dist, k);
  if (k == 0) return 0.0;
  const double kk = static_cast<double>(delay_bound);
  const double coeff = 3.0 * gamma * lipschitz * lipschitz * kk +
                       beta * lipschitz * kk * (3.0 * gamma * lipschitz + 2.0 * beta);
  return coeff *
         window_max(dist, std::max<long>(0, k - 2 * delay_bound - 1), k - 1);
}

double iagm_error_bound_rhs(const Trace& trace, long k) {
  return iagm_error_bound_rhs(trace.dist, k, trace.gamma, trace.beta,
                              trace.lipschitz, trace.delay_bound);
}

CheckOutcome error_bound_check(const Trace& trace) {
  if (trace.method != Method::IAG && trace.method != Method::IAGM)
    throw std::invalid_argument("error bound applies to aggregated methods");
  for (long k = 0; k < trace.rows(); ++k) {
    const double rhs = trace.method == Method::IAG
                           ? iag_error_bound_rhs(trace, k)
                           : iagm_error_bound_rhs(trace, k);
    const double measured = trace.err_norm[static_cast<size_t>(k)];
    if (measured > rhs + kErrorBoundSlack)
      return BoundViolation{k, measured, rhs};
  }
  return std::nullopt;
}

CheckOutcome simple_error_bound_check(const Trace& trace) {
  if (trace.method != Method::IAG && trace.method != Method::IAGM)
    throw std::invalid_argument("error bound applies to aggregated methods");
  for (long k = 0; k < trace.rows(); ++k) {
    const double rhs =
        2.0 * trace.lipschitz *
        window_max(trace.dist, std::max<long>(0, k - trace.delay_bound), k);
    const double measured = trace.err_norm[static_cast<size_t>(k)];
    if (measured > rhs + kErrorBoundSlack)
      return BoundViolation{k, measured, rhs};
  }
  return std::nullopt;
}

namespace {

void require_gamma_star(const Trace& trace, const RateCertificate& cert) {
  if (std::abs(trace.gamma - cert.gamma_star) > 1e-12 * cert.gamma_star)
    throw std::invalid_argument(
        "trace was not produced at the certificate's gamma_star");
}

}  // namespace

CheckOutcome certified_dist_check(const Trace& trace,
                                  const RateCertificate& cert) {
  require_gamma_star(trace, cert);
  const double d0 = trace.dist0();
  for (long k = 0; k < trace.rows(); ++k) {
    const double bound =
        std::pow(cert.per_step_bound, static_cast<double>(k)) * d0;
    if (trace.dist[static_cast<size_t>(k)] > bound * (1.0 + kCheckSlack))
      return BoundViolation{k, trace.dist[static_cast<size_t>(k)], bound};
  }
  return std::nullopt;
}

CheckOutcome certified_cost_check(const Trace& trace,
                                  const RateCertificate& cert) {
  require_gamma_star(trace, cert);
  const double d0 = trace.dist0();
  for (long k = 0; k < trace.rows(); ++k) {
    const double bound =
        trace.lipschitz / 2.0 *
        std::pow(cert.per_step_bound, 2.0 * static_cast<double>(k)) * d0 * d0;
    if (trace.cost_gap[static_cast<size_t>(k)] > bound * (1.0 + kCheckSlack))
      return BoundViolation{k, trace.cost_gap[static_cast<size_t>(k)], bound};
  }
  return std::nullopt;
}

CheckOutcome certified_rate_check(const Trace& trace,
                                  const RateCertificate& cert) {
  if (auto v = certified_dist_check(trace, cert)) return v;
  return certified_cost_check(trace, cert);
}

CheckOutcome lyapunov_rate_check(const Trace& trace,
                                 const RateCertificate& cert) {
  if (!cert.contracting)
    throw std::invalid_argument("certificate is not contracting (s >= 1)");
  const double v0 = trace.dist0() * trace.dist0();
  for (long k = 0; k < trace.rows(); ++k) {
    const double d = trace.dist[static_cast<size_t>(k)];
    const double bound = std::pow(cert.rho, static_cast<double>(k)) * v0;
    if (d * d > bound * (1.0 + kCheckSlack))
      return BoundViolation{k, d * d, bound};
  }
  return std::nullopt;
}

CheckOutcome gd_contraction_check(const Trace& trace, double rate,
                                  double slack) {
  for (long k = 0; k + 1 < trace.rows(); ++k) {
    const double cur = trace.dist[static_cast<size_t>(k)];
    const double next = trace.dist[static_cast<size_t>(k + 1)];
    if (cur <= 0.0) continue;
    if (next > (rate + slack) * cur)
      return BoundViolation{k + 1, next, (rate + slack) * cur};
  }
  return std::nullopt;
}

PerturbedDecayOutcome perturbed_decay_check(
    const std::vector<double>& v, double p, double q,
    const std::function<int(long)>& delay, int d_max) {
  if (v.size() < 2)
    throw std::invalid_argument("sequence needs at least two entries");
  PerturbedDecayOutcome out;
  out.rate = perturbed_decay_rate(p, q, d_max);

  const long n = static_cast<long>(v.size());
  for (long k = 0; k + 1 < n; ++k) {
    int d = delay(k);
    if (d < 0 || d > d_max)
      throw std::invalid_argument("delay outside [0, d_max]");
    const double rhs = p * v[static_cast<size_t>(k)] +
                       q * window_max(v, std::max<long>(0, k - d), k);
    if (v[static_cast<size_t>(k + 1)] > rhs * (1.0 + kCheckSlack)) {
      out.hypothesis_violation = k;
      break;
    }
  }
  // Below the smallest normalized double the relative slack is meaningless
  // (subnormals carry only a few mantissa bits), so the envelope gets an
  // absolute floor of that magnitude.
  const double subnormal_floor = std::numeric_limits<double>::min();
  for (long k = 0; k < n; ++k) {
    const double bound =
        std::pow(out.rate, static_cast<double>(k)) * v.front();
    if (v[static_cast<size_t>(k)] > bound * (1.0 + kCheckSlack) + subnormal_floor) {
      out.conclusion_violation = k;
      break;
    }
  }
  return out;
}

PerturbedDecayOutcome perturbed_decay_check(const std::vector<double>& v,
                                            double p, double q, int d_max) {
  return perturbed_decay_check(v, p, q, [d_max](long) { return d_max; }, d_max);
}

double observed_rate(const std::vector<double>& dist,
                     double burn_in_fraction) {
  if (dist.empty()) throw std::invalid_argument("empty trace");
  if (burn_in_fraction < 0 || burn_in_fraction >= 1)
    throw std::invalid_argument("burn-in fraction must be in [0, 1)");
  const long n = static_cast<long>(dist.size());
  const long start = static_cast<long>(burn_in_fraction * static_cast<double>(n));

  std::vector<double> ks, logs;
  for (long k = start; k < n; ++k) {
    const double d = dist[static_cast<size_t>(k)];
    if (d > 0) {
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log(d));
    }
  }
  if (ks.empty()) return 0.0;  // identically-zero tail
  if (ks.size() < 10)
    throw std::invalid_argument("need at least 10 positive points");

  double k_mean = 0, y_mean = 0;
  for (size_t i = 0; i < ks.size(); ++i) {
    k_mean += ks[i];
    y_mean += logs[i];
  }
  k_mean /= static_cast<double>(ks.size());
  y_mean /= static_cast<double>(ks.size());
  double num = 0, den = 0;
  for (size_t i = 0; i < ks.size(); ++i) {
    num += (ks[i] - k_mean) * (logs[i] - y_mean);
    den += (ks[i] - k_mean) * (ks[i] - k_mean);
  }
  return std::exp(num / den);
}

double observed_rate(const Trace& trace, double burn_in_fraction) {
  return observed_rate(trace.dist, burn_in_fraction);
}

}  // namespace iag
