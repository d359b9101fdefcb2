#include "iag/certificate.hpp"

#include <cmath>
#include <stdexcept>

namespace iag {
namespace {

void check_constants(double mu, double lipschitz) {
  if (!(mu > 0)) throw std::invalid_argument("mu must be positive");
  if (lipschitz < mu) throw std::invalid_argument("need L >= mu");
}

}  // namespace

RateCertificate certificate(double mu, double lipschitz, int delay_bound,
                            double gamma) {
  check_constants(mu, lipschitz);
  if (delay_bound < 1)
    throw std::invalid_argument("delay bound must be at least 1");
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");

  RateCertificate c;
  c.mu = mu;
  c.lipschitz = lipschitz;
  c.cond = lipschitz / mu;
  c.delay_bound = delay_bound;
  c.gamma = gamma;

  const double kk = static_cast<double>(delay_bound);
  c.gamma_bar = (8.0 / 25.0) * mu / (kk * lipschitz) * (1.0 / (mu + lipschitz));
  c.gamma_star = c.gamma_bar / 2.0;
  c.c_k = 2.0 / (25.0 * kk * (2.0 * kk + 1.0));
  const double qp1 = c.cond + 1.0;
  c.per_step_bound = 1.0 - c.c_k / (qp1 * qp1);

  const double g2l2k = gamma * gamma * lipschitz * lipschitz * kk;
  c.p = 1.0 - 2.0 * gamma * mu * lipschitz / (mu + lipschitz);
  c.q = 9.0 * g2l2k * g2l2k + 6.0 * g2l2k;
  c.s = c.p + c.q;
  c.rho = c.s > 0 ? std::pow(c.s, 1.0 / (2.0 * kk + 1.0)) : 0.0;

  c.step_within_guarantee = gamma < c.gamma_bar;
  c.contracting = c.s < 1.0;
  return c;
}

RateCertificate certificate(double mu, double lipschitz, int delay_bound) {
  check_constants(mu, lipschitz);
  if (delay_bound < 1)
    throw std::invalid_argument("delay bound must be at least 1");
  const double kk = static_cast<double>(delay_bound);
  const double gamma_bar =
      (8.0 / 25.0) * mu / (kk * lipschitz) * (1.0 / (mu + lipschitz));
  return certificate(mu, lipschitz, delay_bound, gamma_bar / 2.0);
}

bool certificate_consistent(const RateCertificate& cert) {
  RateCertificate ref;
  try {
    ref = certificate(cert.mu, cert.lipschitz, cert.delay_bound, cert.gamma);
  } catch (const std::invalid_argument&) {
    return false;
  }
  return cert.cond == ref.cond && cert.gamma_bar == ref.gamma_bar &&
         cert.gamma_star == ref.gamma_star && cert.c_k == ref.c_k &&
         cert.per_step_bound == ref.per_step_bound && cert.p == ref.p &&
         cert.q == ref.q && cert.s == ref.s && cert.rho == ref.rho &&
         cert.step_within_guarantee == ref.step_within_guarantee &&
         cert.contracting == ref.contracting;
}

GdCertificate gd_certificate(double mu, double lipschitz) {
  check_constants(mu, lipschitz);
  const double cond = lipschitz / mu;
  return GdCertificate{(cond - 1.0) / (cond + 1.0), 2.0 / (mu + lipschitz)};
}

double perturbed_decay_rate(double p, double q, int d_max) {
  if (p < 0 || q < 0) throw std::invalid_argument("p and q must be nonnegative");
  if (d_max < 0) throw std::invalid_argument("d_max must be nonnegative");
  if (!(p + q < 1.0))
    throw std::invalid_argument("requires p + q < 1");
  return std::pow(p + q, 1.0 / (1.0 + static_cast<double>(d_max)));
}

double quadratic_term_threshold(double mu, double lipschitz, int delay_bound) {
  check_constants(mu, lipschitz);
  if (delay_bound < 1)
    throw std::invalid_argument("delay bound must be at least 1");
  const double kk = static_cast<double>(delay_bound);
  const double gamma_bar =
      (8.0 / 25.0) * mu / (kk * lipschitz) * (1.0 / (mu + lipschitz));
  return (25.0 / 24.0) * gamma_bar;
}

}  // namespace iag
