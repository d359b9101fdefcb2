#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "iag/checks.hpp"
#include "iag/quadratic.hpp"
#include "iag/schedule.hpp"
#include "iag/solver.hpp"

using namespace iag;

TEST_CASE("certificate constants by direct substitution") {
  const RateCertificate unit = certificate(1.0, 1.0, 1, 0.08);
  CHECK(unit.gamma_bar == 0.16);
  CHECK(unit.gamma_star == 0.08);
  CHECK(unit.c_k == 2.0 / 75.0);
  CHECK(unit.per_step_bound == 1.0 - (2.0 / 75.0) / 4.0);
  CHECK(unit.per_step_bound == 1.0 - 1.0 / 150.0);
  CHECK(unit.p == 0.92);
  // Independent arithmetic: q = 9 g^4 L^4 K^2 + 6 g^2 L^2 K at g = 0.08.
  const double g2 = 0.08 * 0.08;
  CHECK(unit.q == doctest::Approx(9.0 * g2 * g2 + 6.0 * g2).epsilon(1e-14));
  CHECK(unit.q == doctest::Approx(0.03876864).epsilon(1e-12));
  CHECK(unit.s == doctest::Approx(0.95876864).epsilon(1e-12));
  CHECK(unit.s < 1.0);
  CHECK(unit.contracting);
  CHECK(unit.step_within_guarantee);

  CHECK(certificate(1.0, 1.0, 2).c_k == 1.0 / 125.0);

  // Q = 10, K = 4 threshold with the same association.
  const RateCertificate wide = certificate(1.0, 10.0, 4);
  CHECK(wide.gamma_bar ==
        doctest::Approx((8.0 / 25.0) * (1.0 / 40.0) * (1.0 / 11.0))
            .epsilon(1e-15));
  CHECK(wide.cond == 10.0);
}

TEST_CASE("default evaluation point is gamma_star") {
  const RateCertificate c = certificate(2.0, 6.0, 3);
  CHECK(c.gamma == c.gamma_star);
  CHECK(c.gamma_star == c.gamma_bar / 2.0);
}

TEST_CASE("certificate rejects bad inputs") {
  CHECK_THROWS_AS(certificate(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(certificate(1.0, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(certificate(1.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(certificate(1.0, 1.0, 1, -0.1), std::invalid_argument);
}

TEST_CASE("the certified factor sits between zero and one") {
  for (double mu : {0.5, 1.0, 2.0})
    for (double ratio : {1.0, 2.0, 10.0, 100.0})
      for (int delay : {1, 2, 5, 20}) {
        const RateCertificate c = certificate(mu, mu * ratio, delay);
        CHECK(c.per_step_bound > 0.0);
        CHECK(c.per_step_bound < 1.0);
        // s(gamma_star) <= 1 - 4 / (25 K (Q+1)^2).
        const double qp1 = c.cond + 1.0;
        CHECK(c.s <= 1.0 - 4.0 / (25.0 * delay * qp1 * qp1) + 1e-15);
        // The squared-distance rate recovers the distance-rate bound.
        CHECK(std::sqrt(c.rho) <= c.per_step_bound * (1 + 1e-12));
      }
}

TEST_CASE("monotonicity of the certified quantities") {
  // per_step_bound increases with the condition number...
  double prev = 0.0;
  for (double l : {1.0, 2.0, 5.0, 20.0, 100.0}) {
    const double bound = certificate(1.0, l, 2).per_step_bound;
    CHECK(bound >= prev);
    prev = bound;
  }
  // ...and with the delay bound (c_K shrinks), while gamma_bar shrinks in both
  // K and L.
  double prev_bound = 0.0, prev_bar = 1e9;
  for (int delay : {1, 2, 4, 8, 16}) {
    const RateCertificate c = certificate(1.0, 5.0, delay);
    CHECK(c.per_step_bound >= prev_bound);
    CHECK(c.gamma_bar <= prev_bar);
    prev_bound = c.per_step_bound;
    prev_bar = c.gamma_bar;
  }
  prev_bar = 1e9;
  for (double l : {1.0, 3.0, 9.0, 27.0}) {
    const double bar = certificate(1.0, l, 3).gamma_bar;
    CHECK(bar <= prev_bar);
    prev_bar = bar;
  }
}

TEST_CASE("stepsize region inequalities hold below the threshold") {
  for (double mu : {0.5, 1.0, 2.0})
    for (double ratio : {1.0, 3.0, 10.0, 50.0})
      for (int delay : {1, 2, 5, 9})
        for (double frac : {0.05, 0.5, 0.9, 0.999}) {
          const double lipschitz = mu * ratio;
          const double bar = certificate(mu, lipschitz, delay).gamma_bar;
          const RateCertificate c =
              certificate(mu, lipschitz, delay, frac * bar);
          const double g2l2k =
              c.gamma * c.gamma * lipschitz * lipschitz * delay;
          const double qp1 = c.cond + 1.0;
          CHECK(g2l2k <= (1.0 / (9.0 * delay * qp1 * qp1)) * (1 + 1e-9));
          CHECK(1.0 / (9.0 * delay * qp1 * qp1) <= 1.0 / 36.0 + 1e-15);
          CHECK(c.q <= (25.0 / 4.0) * g2l2k * (1 + 1e-9));
        }
}

TEST_CASE("quadratic-term threshold matches its closed form") {
  for (double mu : {0.5, 1.0, 4.0})
    for (double l : {1.0, 10.0, 80.0})
      for (int delay : {1, 3, 7}) {
        if (l < mu) continue;
        const double threshold = quadratic_term_threshold(mu, l, delay);
        CHECK(threshold ==
              (25.0 / 24.0) * certificate(mu, l, delay).gamma_bar);
        const double direct = mu / (3.0 * l * delay) * (1.0 / (mu + l));
        CHECK(threshold == doctest::Approx(direct).epsilon(1e-14));
      }
}

TEST_CASE("certificate self-check catches tampering") {
  RateCertificate cert = certificate(1.0, 4.0, 2);
  CHECK(certificate_consistent(cert));
  cert.q = -cert.q;
  CHECK(!certificate_consistent(cert));
}

TEST_CASE("gradient descent certificate") {
  CHECK(gd_certificate(3.0, 3.0).rate == 0.0);
  CHECK(gd_certificate(1.0, 3.0).rate == 0.5);
  CHECK(gd_certificate(1.0, 10.0).rate == doctest::Approx(9.0 / 11.0).epsilon(1e-15));
  CHECK(gd_certificate(1.0, 3.0).stepsize == 0.5);
  CHECK_THROWS_AS(gd_certificate(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("perturbed decay rate") {
  CHECK(perturbed_decay_rate(0.3, 0.2, 0) == 0.5);
  CHECK(perturbed_decay_rate(0.5, 0.0, 0) == 0.5);
  CHECK(perturbed_decay_rate(0.4, 0.4, 3) ==
        doctest::Approx(std::pow(0.8, 0.25)).epsilon(1e-15));
  CHECK(perturbed_decay_rate(0.0, 0.0, 4) == 0.0);
  CHECK_THROWS_AS(perturbed_decay_rate(0.6, 0.4, 1), std::invalid_argument);
  CHECK_THROWS_AS(perturbed_decay_rate(-0.1, 0.2, 1), std::invalid_argument);
}

TEST_CASE("perturbed decay check on explicit sequences") {
  // A constant-zero sequence satisfies everything.
  const std::vector<double> zeros(20, 0.0);
  CHECK(perturbed_decay_check(zeros, 0.3, 0.3, 2).ok());

  // V = (1, 1) with p = q = 1/4 violates the hypothesis at k = 0.
  const std::vector<double> flat{1.0, 1.0};
  const auto outcome = perturbed_decay_check(flat, 0.25, 0.25, 0);
  REQUIRE(outcome.hypothesis_violation.has_value());
  CHECK(*outcome.hypothesis_violation == 0);

  // Tightly generated sequences satisfy the conclusion at every step.
  std::mt19937_64 rng(31415);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = 0.9 * unif(rng);
    const double q = (1.0 - p) * 0.99 * unif(rng);
    const int d_max = static_cast<int>(unif(rng) * 11.0) % 11;
    std::vector<double> v(201);
    v[0] = 1.0;
    for (long k = 0; k + 1 <= 200; ++k) {
      double window = 0;
      for (long l = std::max<long>(0, k - d_max); l <= k; ++l)
        window = std::max(window, v[static_cast<size_t>(l)]);
      v[static_cast<size_t>(k + 1)] = p * v[static_cast<size_t>(k)] + q * window;
    }
    CHECK(perturbed_decay_check(v, p, q, d_max).ok());
  }
}

TEST_CASE("staleness bound right-hand sides") {
  const std::vector<double> dist{4.0, 2.0, 3.0, 1.0};
  const double gamma = 0.25, lipschitz = 2.0;
  const int delay = 1;
  // Window at k = 1 is just {dist_0}.
  CHECK(iag_error_bound_rhs(dist, 1, gamma, lipschitz, delay) ==
        3.0 * gamma * lipschitz * lipschitz * delay * 4.0);
  CHECK(iag_error_bound_rhs(dist, 0, gamma, lipschitz, delay) == 0.0);
  CHECK(iag_error_bound_rhs(dist, 2, 0.0, lipschitz, delay) == 0.0);

  // Zero momentum reduces to the plain coefficient over the wider window.
  const double plain = iag_error_bound_rhs(dist, 3, gamma, lipschitz, delay);
  const double widened = iagm_error_bound_rhs(dist, 3, gamma, 0.0, lipschitz, delay);
  CHECK(widened >= plain);
  CHECK(iagm_error_bound_rhs(dist, 3, 0.0, 0.0, lipschitz, delay) == 0.0);

  CHECK_THROWS_AS(iag_error_bound_rhs(dist, 9, gamma, lipschitz, delay),
                  std::out_of_range);
}

namespace {

Trace certified_run(const Problem& problem, const RateCertificate& cert,
                    int m, long iters) {
  const CyclicSchedule schedule(m);
  return run(problem, Method::IAG, cert.gamma_star, 0.0, &schedule,
             Vector::Zero(problem.dim()), StoppingRule{1e-10, iters});
}

}  // namespace

TEST_CASE("certified bound check flags injected corruption") {
  const Problem problem = make_quadratic_sum(51, 3, 4, 1.0, 5.0);
  const RateCertificate cert = certificate(problem.mu(), problem.lipschitz(), 2);
  Trace trace = certified_run(problem, cert, 3, 2000);
  CHECK(!certified_rate_check(trace, cert).has_value());

  trace.dist[5] *= 2.0;  // push row 5 above the certified envelope
  const auto violation = certified_dist_check(trace, cert);
  REQUIRE(violation.has_value());
  CHECK(violation->k == 5);

  // The check refuses traces that were not run at gamma_star.
  Trace off = trace;
  off.gamma = cert.gamma_star * 1.5;
  CHECK_THROWS_AS(certified_dist_check(off, cert), std::invalid_argument);
}

TEST_CASE("the general-stepsize squared-distance bound holds") {
  const Problem problem = make_quadratic_sum(52, 3, 4, 1.0, 5.0);
  const double bar =
      certificate(problem.mu(), problem.lipschitz(), 2).gamma_bar;
  const double gamma = 0.8 * bar;
  const RateCertificate cert =
      certificate(problem.mu(), problem.lipschitz(), 2, gamma);
  REQUIRE(cert.contracting);
  const CyclicSchedule schedule(3);
  const Trace trace = run(problem, Method::IAG, gamma, 0.0, &schedule,
                          Vector::Zero(4), StoppingRule{1e-10, 5000});
  CHECK(!lyapunov_rate_check(trace, cert).has_value());
}

TEST_CASE("observed rate estimation") {
  std::vector<double> geometric(100);
  for (size_t k = 0; k < geometric.size(); ++k)
    geometric[k] = std::pow(0.9, static_cast<double>(k));
  CHECK(observed_rate(geometric, 0.0) == doctest::Approx(0.9).epsilon(1e-12));

  const std::vector<double> constant(50, 3.0);
  CHECK(observed_rate(constant, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<double> zeros(50, 0.0);
  CHECK(observed_rate(zeros, 0.0) == 0.0);

  const std::vector<double> short_trace(5, 1.0);
  CHECK_THROWS_AS(observed_rate(short_trace, 0.0), std::invalid_argument);

  // Two-eigenvalue worst case: the measured rate equals the bound.
  const Problem problem = make_two_eigenvalue_quadratic(1.0, 10.0);
  const GdCertificate gd = gd_certificate(1.0, 10.0);
  const Trace trace = run(problem, Method::GD, gd.stepsize, 0.0, nullptr,
                          Vector::Ones(2), StoppingRule{1e-10, 5000});
  CHECK(observed_rate(trace, 0.1) == doctest::Approx(gd.rate).epsilon(1e-6));
}
