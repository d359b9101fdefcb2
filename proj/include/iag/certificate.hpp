#pragma once

namespace iag {

/// Closed-form stepsize threshold and contraction constants for the
/// aggregated-gradient iteration under a delay bound K >= 1, evaluated at a
/// given stepsize. All quantities are rational expressions in (mu, L, K,
/// gamma) and are computed in a fixed operation order so the small-integer
/// cases are exact.
struct RateCertificate {
  double mu = 0;
  double lipschitz = 0;
  double cond = 0;      // Q = L / mu
  int delay_bound = 0;  // K
  double gamma = 0;     // evaluation stepsize

  double gamma_bar = 0;   // (8/25) mu / (K L) * 1/(mu+L); guarantees linear convergence below it
  double gamma_star = 0;  // gamma_bar / 2, where the explicit rate below is attained
  double c_k = 0;         // 2 / (25 K (2K+1))
  double per_step_bound = 0;  // 1 - c_k/(Q+1)^2, certified distance contraction at gamma_star

  double p = 0;    // squared-distance contraction of the unperturbed step, 1 - 2 gamma mu L/(mu+L)
  double q = 0;    // staleness perturbation, 9 g^4 L^4 K^2 + 6 g^2 L^2 K
  double s = 0;    // p + q; below one certifies linear convergence
  double rho = 0;  // s^(1/(2K+1)), per-step factor for squared distances

  bool step_within_guarantee = false;  // gamma < gamma_bar
  bool contracting = false;            // s < 1
};

RateCertificate certificate(double mu, double lipschitz, int delay_bound,
                            double gamma);
/// gamma defaults to gamma_star.
RateCertificate certificate(double mu, double lipschitz, int delay_bound);

/// Recomputes every derived field from (mu, L, K, gamma); false when any entry
/// was tampered with.
bool certificate_consistent(const RateCertificate& cert);

/// (Q-1)/(Q+1) contraction of gradient descent at stepsize 2/(mu+L).
struct GdCertificate {
  double rate = 0;
  double stepsize = 0;
};
GdCertificate gd_certificate(double mu, double lipschitz);

/// Rate (p+q)^(1/(1+d_max)) for nonnegative sequences obeying
/// V_{k+1} <= p V_k + q max over the trailing window of width d_max.
/// Requires p + q < 1.
double perturbed_decay_rate(double p, double q, int d_max);

/// Stepsize below which the quadratic-in-gamma part of s(gamma) alone stays
/// under one; equals (25/24) gamma_bar.
double quadratic_term_threshold(double mu, double lipschitz, int delay_bound);

}  // namespace iag
