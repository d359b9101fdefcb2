#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "iag/checks.hpp"
#include "iag/quadratic.hpp"
#include "iag/random.hpp"
#include "iag/solver.hpp"
#include "replay_sim.hpp"

using namespace iag;
using iag_test::ReplaySim;

namespace {

// Two scalar quadratics with distinct curvatures and offsets.
Problem two_scalar_quadratics() {
  Matrix a1(1, 1), a2(1, 1);
  a1 << 1.0;
  a2 << 3.0;
  Vector b1(1), b2(1);
  b1 << 0.5;
  b2 << -2.0;
  std::vector<std::shared_ptr<const Component>> comps{
      std::make_shared<QuadraticComponent>(a1, b1),
      std::make_shared<QuadraticComponent>(a2, b2)};
  Vector x_star(1);
  x_star << 1.5 / 4.0;  // (a1+a2) x = -(b1+b2)
  return Problem(std::move(comps), 4.0, x_star);
}

// f1 = x^2/2, f2 = (x-2)^2/2.
Problem shifted_scalar_quadratics() {
  Matrix a(1, 1);
  a << 1.0;
  Vector b1(1), b2(1);
  b1 << 0.0;
  b2 << -2.0;
  std::vector<std::shared_ptr<const Component>> comps{
      std::make_shared<QuadraticComponent>(a, b1),
      std::make_shared<QuadraticComponent>(a, b2)};
  Vector x_star(1);
  x_star << 1.0;
  return Problem(std::move(comps), 2.0, x_star);
}

}  // namespace

TEST_CASE("fresh state has zero gradient error and the full aggregate") {
  const Problem problem = make_quadratic_sum(5, 3, 4, 1.0, 6.0);
  std::mt19937_64 rng(2);
  const Vector x0 = gaussian_vector(4, rng);
  const SolverState state = init_state(problem, x0);
  CHECK(gradient_error(state, problem).norm() == 0.0);
  for (int i = 0; i < 3; ++i) CHECK(state.table.sample_time(i) == 0);

  const Problem single = make_quadratic_sum(6, 1, 4, 1.0, 2.0);
  const SolverState s1 = init_state(single, x0);
  CHECK(s1.table.aggregate() == single.component(0).gradient(x0));

  // Against the direct matrix evaluation.
  Matrix sum = Matrix::Zero(4, 4);
  Vector offs = Vector::Zero(4);
  for (int i = 0; i < 3; ++i) {
    const auto& c = dynamic_cast<const QuadraticComponent&>(problem.component(i));
    sum += c.matrix();
    offs += c.offset();
  }
  const Vector expected = sum * x0 + offs;
  CHECK((state.table.aggregate() - expected).norm() <= 1e-12 * (1 + expected.norm()));
}

TEST_CASE("the first step is a plain gradient step under any schedule") {
  const Problem problem = make_quadratic_sum(7, 4, 5, 1.0, 8.0);
  std::mt19937_64 rng(3);
  const Vector x0 = gaussian_vector(5, rng);
  const double gamma = 0.01;
  const Vector expected = x0 - gamma * problem.full_gradient(x0);

  const CyclicSchedule cyclic(4);
  SolverState a = init_state(problem, x0);
  iag_step(a, problem, gamma, cyclic);
  CHECK((a.x - expected).norm() <= 1e-15 * (1 + expected.norm()));

  const AdversarialSchedule adversarial(4, 6, 11);
  SolverState b = init_state(problem, x0);
  iag_step(b, problem, gamma, adversarial);
  CHECK((b.x - expected).norm() <= 1e-15 * (1 + expected.norm()));
}

TEST_CASE("ten cyclic steps match the brute-force table replay") {
  const Problem problem = two_scalar_quadratics();
  const CyclicSchedule schedule(2);
  const double gamma = 0.05;
  Vector x0(1);
  x0 << 2.0;

  SolverState state = init_state(problem, x0);
  ReplaySim sim(x0, 2, gamma);
  for (int step = 0; step < 10; ++step) {
    iag_step(state, problem, gamma, schedule);
    sim.step(problem, schedule);
    CHECK(state.x[0] ==
          doctest::Approx(sim.iterates.back()[0]).epsilon(1e-12));
    for (int i = 0; i < 2; ++i)
      CHECK(state.table.sample_time(i) == sim.tau[static_cast<size_t>(i)]);
  }
}

TEST_CASE("replay oracle agrees on a multivariate adversarial run") {
  const Problem problem = make_quadratic_sum(15, 3, 4, 1.0, 7.0);
  const AdversarialSchedule schedule(3, 5, 21);
  const double gamma = 1e-3;
  std::mt19937_64 rng(4);
  const Vector x0 = gaussian_vector(4, rng);

  SolverState state = init_state(problem, x0);
  ReplaySim sim(x0, 3, gamma);
  for (int step = 0; step < 50; ++step) {
    iag_step(state, problem, gamma, schedule);
    sim.step(problem, schedule);
    CHECK((state.x - sim.iterates.back()).norm() <=
          1e-12 * (1 + sim.iterates.back().norm()));
  }
}

TEST_CASE("zero delay reduces to gradient descent") {
  const Problem problem = make_quadratic_sum(16, 3, 5, 1.0, 6.0);
  const FullRefreshSchedule schedule(3);
  const double gamma = 1.0 / (problem.mu() + problem.lipschitz());
  std::mt19937_64 rng(5);
  const Vector x0 = gaussian_vector(5, rng);

  SolverState state = init_state(problem, x0);
  Vector x_gd = x0;
  for (int step = 0; step < 1000; ++step) {
    iag_step(state, problem, gamma, schedule);
    x_gd -= gamma * problem.full_gradient(x_gd);
    CHECK((state.x - x_gd).norm() <= 1e-12 * (1 + x_gd.norm()));
  }
}

TEST_CASE("a single component reduces to gradient descent") {
  const Problem problem = make_quadratic_sum(35, 1, 4, 1.0, 3.0);
  const CyclicSchedule schedule(1);
  const double gamma = 1.0 / (problem.mu() + problem.lipschitz());
  std::mt19937_64 rng(14);
  const Vector x0 = gaussian_vector(4, rng);
  SolverState state = init_state(problem, x0);
  Vector x_gd = x0;
  for (int step = 0; step < 1000; ++step) {
    iag_step(state, problem, gamma, schedule);
    x_gd -= gamma * problem.full_gradient(x_gd);
    CHECK((state.x - x_gd).norm() <= 1e-12 * (1.0 + x_gd.norm()));
  }
}

TEST_CASE("the aggregate matches a from-scratch sum after every step") {
  const Problem problem = make_quadratic_sum(36, 5, 4, 1.0, 8.0);
  const AdversarialSchedule schedule(5, 7, 2);
  const RateCertificate cert =
      certificate(problem.mu(), problem.lipschitz(), schedule.delay_bound());
  std::mt19937_64 rng(15);
  SolverState state = init_state(problem, gaussian_vector(4, rng));
  for (int step = 0; step < 2000; ++step) {
    iag_step(state, problem, cert.gamma_star, schedule);
    const Vector recomputed = state.table.recompute_aggregate();
    CHECK((recomputed - state.table.aggregate()).norm() <=
          1e-12 * (1.0 + recomputed.norm()));
  }
}

TEST_CASE("zero momentum is bitwise the plain aggregated step") {
  const Problem problem = make_quadratic_sum(17, 4, 3, 1.0, 5.0);
  const CyclicSchedule schedule(4);
  const double gamma =
      certificate(problem.mu(), problem.lipschitz(), 3).gamma_star;
  std::mt19937_64 rng(6);
  const Vector x0 = gaussian_vector(3, rng);

  SolverState with_momentum = init_state(problem, x0);
  SolverState plain = init_state(problem, x0);
  for (int step = 0; step < 1000; ++step) {
    iagm_step(with_momentum, problem, gamma, 0.0, schedule);
    iag_step(plain, problem, gamma, schedule);
    CHECK((with_momentum.x.array() == plain.x.array()).all());
  }
}

TEST_CASE("the first momentum step has no momentum contribution") {
  const Problem problem = two_scalar_quadratics();
  const CyclicSchedule schedule(2);
  Vector x0(1);
  x0 << -1.0;
  SolverState heavy = init_state(problem, x0);
  SolverState plain = init_state(problem, x0);
  iagm_step(heavy, problem, 0.05, 0.7, schedule);
  iag_step(plain, problem, 0.05, schedule);
  CHECK(heavy.x == plain.x);
}

TEST_CASE("five momentum steps match the replay recursion") {
  const Problem problem = two_scalar_quadratics();
  const CyclicSchedule schedule(2);
  const double gamma = 0.05, beta = 0.1;
  Vector x0(1);
  x0 << 2.0;

  SolverState state = init_state(problem, x0);
  ReplaySim sim(x0, 2, gamma, beta);
  for (int step = 0; step < 5; ++step) {
    iagm_step(state, problem, gamma, beta, schedule);
    sim.step(problem, schedule);
    CHECK(state.x[0] ==
          doctest::Approx(sim.iterates.back()[0]).epsilon(1e-13));
  }
}

TEST_CASE("plain incremental step") {
  const Problem problem = shifted_scalar_quadratics();
  Vector x(1);
  x << 0.0;
  // gamma = 0 leaves the point unchanged.
  CHECK(ig_step(x, problem, 0.0, 0) == x);
  // One full cycle by hand: f1 gradient vanishes at 0, then f2 pulls by 0.2.
  const Vector x1 = ig_step(x, problem, 0.1, 0);
  CHECK(x1[0] == doctest::Approx(0.0).epsilon(1e-15));
  const Vector x2 = ig_step(x1, problem, 0.1, 1);
  CHECK(x2[0] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK_THROWS_AS(ig_step(x, problem, 0.1, 2), std::out_of_range);

  // Single component: coincides with a gradient descent step.
  const Problem single = make_quadratic_sum(18, 1, 3, 1.0, 4.0);
  std::mt19937_64 rng(8);
  const Vector y = gaussian_vector(3, rng);
  CHECK(ig_step(y, single, 0.05, 0) ==
        y - 0.05 * single.full_gradient(y));
}

TEST_CASE("incremental momentum step") {
  const Problem problem = shifted_scalar_quadratics();
  Vector x(1), outer(1), outer_prev(1);
  x << 0.4;
  outer << 0.3;
  outer_prev << 0.3;
  // Zero momentum and equal boundary iterates both reduce to the plain step.
  CHECK(igm_step(x, outer, outer_prev, problem, 0.1, 0.0, 1) ==
        ig_step(x, problem, 0.1, 1));
  CHECK(igm_step(x, outer, outer_prev, problem, 0.1, 0.5, 1) ==
        ig_step(x, problem, 0.1, 1));

  // Second cycle by hand: gamma = 0.1, beta = 0.5, start 0, cycle one ends at
  // 0.2, so the momentum term is 0.1 at both inner steps.
  Vector x0(1);
  x0 << 0.0;
  Vector c1a = ig_step(x0, problem, 0.1, 0);
  Vector c1b = ig_step(c1a, problem, 0.1, 1);
  CHECK(c1b[0] == doctest::Approx(0.2).epsilon(1e-14));
  Vector c2a = igm_step(c1b, c1b, x0, problem, 0.1, 0.5, 0);
  CHECK(c2a[0] == doctest::Approx(0.28).epsilon(1e-13));
  Vector c2b = igm_step(c2a, c1b, x0, problem, 0.1, 0.5, 1);
  CHECK(c2b[0] == doctest::Approx(0.552).epsilon(1e-13));
}

TEST_CASE("gradient error tracks the stale-minus-fresh difference") {
  const Problem problem = two_scalar_quadratics();
  const CyclicSchedule schedule(2);
  const double gamma = 0.05;
  Vector x0(1);
  x0 << 2.0;

  SolverState state = init_state(problem, x0);
  ReplaySim sim(x0, 2, gamma);
  for (int step = 0; step < 3; ++step) {
    iag_step(state, problem, gamma, schedule);
    sim.step(problem, schedule);
  }
  // After step 3 the table holds f1 at x^3 and f2 at x^2, so the error is
  // grad f2(x^2) - grad f2(x^3).
  const double a2 = 3.0;
  const double expected = a2 * (sim.iterates[2][0] - sim.iterates[3][0]);
  CHECK(gradient_error(state, problem)[0] ==
        doctest::Approx(expected).epsilon(1e-12));

  // With zero delay the error stays at rounding level throughout.
  const Problem multi = make_quadratic_sum(19, 3, 4, 1.0, 5.0);
  const FullRefreshSchedule full(3);
  std::mt19937_64 rng(9);
  SolverState fresh = init_state(multi, gaussian_vector(4, rng));
  for (int step = 0; step < 200; ++step) {
    iag_step(fresh, multi, 0.05, full);
    CHECK(gradient_error(fresh, multi).norm() <=
          1e-12 * (1 + fresh.table.aggregate().norm()));
  }
}

TEST_CASE("run stops immediately under a huge tolerance") {
  const Problem problem = make_quadratic_sum(20, 2, 3, 1.0, 4.0);
  const CyclicSchedule schedule(2);
  const Trace trace = run(problem, Method::IAG, 1e-3, 0.0, &schedule,
                          Vector::Zero(3), StoppingRule{1e9, 1000});
  CHECK(trace.rows() == 1);
  CHECK(trace.reached_tolerance);
}

TEST_CASE("run aborts loudly on divergence") {
  const Problem problem = make_quadratic_sum(22, 2, 3, 1.0, 4.0);
  const CyclicSchedule schedule(2);
  try {
    run(problem, Method::IAG, 1e6, 0.0, &schedule, Vector::Ones(3),
        StoppingRule{1e-10, 100000});
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.last_finite_k() >= 0);
    CHECK(e.last_finite_k() < 1000);
  }
}

TEST_CASE("gradient descent contracts at the worst-case ratio") {
  const Problem problem = make_two_eigenvalue_quadratic(1.0, 10.0);
  const GdCertificate gd = gd_certificate(1.0, 10.0);
  const Trace trace = run(problem, Method::GD, gd.stepsize, 0.0, nullptr,
                          Vector::Ones(2), StoppingRule{1e-10, 5000});
  CHECK(trace.reached_tolerance);
  CHECK(!gd_contraction_check(trace, gd.rate, 1e-10).has_value());
}

TEST_CASE("an aggregated run at gamma_star satisfies its certificate") {
  const Problem problem = make_quadratic_sum(23, 3, 5, 1.0, 5.0);
  const CyclicSchedule schedule(3);
  const RateCertificate cert =
      certificate(problem.mu(), problem.lipschitz(), schedule.delay_bound());
  const Trace trace = run(problem, Method::IAG, cert.gamma_star, 0.0, &schedule,
                          Vector::Zero(5), StoppingRule{1e-10, 20000});
  CHECK(!certified_rate_check(trace, cert).has_value());
  CHECK(!error_bound_check(trace).has_value());
  CHECK(!simple_error_bound_check(trace).has_value());
  CHECK(!validate_schedule(schedule, trace.iterations()).has_value());
}

TEST_CASE("momentum runs stay within the widened error bound") {
  const Problem problem = make_quadratic_sum(24, 3, 5, 1.0, 5.0);
  const CyclicSchedule schedule(3);
  const RateCertificate cert =
      certificate(problem.mu(), problem.lipschitz(), schedule.delay_bound());
  const double beta = 0.1 * std::sqrt(cert.gamma_star);
  const Trace trace = run(problem, Method::IAGM, cert.gamma_star, beta,
                          &schedule, Vector::Zero(5), StoppingRule{1e-10, 100000});
  CHECK(!error_bound_check(trace).has_value());
  CHECK(trace.reached_tolerance);
}

TEST_CASE("traces are deterministic") {
  const Problem problem = make_quadratic_sum(25, 3, 4, 1.0, 6.0);
  const CyclicSchedule schedule(3);
  const RateCertificate cert =
      certificate(problem.mu(), problem.lipschitz(), schedule.delay_bound());
  const Trace a = run(problem, Method::IAG, cert.gamma_star, 0.0, &schedule,
                      Vector::Zero(4), StoppingRule{1e-10, 3000});
  const Trace b = run(problem, Method::IAG, cert.gamma_star, 0.0, &schedule,
                      Vector::Zero(4), StoppingRule{1e-10, 3000});
  REQUIRE(a.rows() == b.rows());
  for (long k = 0; k < a.rows(); ++k) {
    CHECK(a.dist[static_cast<size_t>(k)] == b.dist[static_cast<size_t>(k)]);
    CHECK(a.err_norm[static_cast<size_t>(k)] == b.err_norm[static_cast<size_t>(k)]);
  }
}

TEST_CASE("run argument validation") {
  const Problem problem = make_quadratic_sum(26, 2, 3, 1.0, 4.0);
  const CyclicSchedule schedule(2);
  CHECK_THROWS_AS(run(problem, Method::IAG, 1e-3, 0.0, nullptr, Vector::Zero(3),
                      StoppingRule{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run(problem, Method::IAG, 1e-3, 0.5, &schedule,
                      Vector::Zero(3), StoppingRule{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run(problem, Method::GD, -1.0, 0.0, nullptr, Vector::Zero(3),
                      StoppingRule{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run(problem, Method::GD, 1e-3, 0.0, nullptr, Vector::Zero(4),
                      StoppingRule{}),
                  std::invalid_argument);
}

TEST_CASE("incremental runs floor out while aggregated runs converge") {
  const Problem problem = make_quadratic_sum(27, 3, 5, 1.0, 5.0);
  const CyclicSchedule schedule(3);
  const RateCertificate cert =
      certificate(problem.mu(), problem.lipschitz(), schedule.delay_bound());
  const Trace iag = run(problem, Method::IAG, cert.gamma_star, 0.0, &schedule,
                        Vector::Zero(5), StoppingRule{1e-10, 60000});
  const Trace ig = run(problem, Method::IG, cert.gamma_star, 0.0, nullptr,
                       Vector::Zero(5), StoppingRule{1e-10, 60000});
  CHECK(iag.dist.back() <= 1e-8);
  CHECK(ig.dist.back() >= 10.0 * iag.dist.back());
  CHECK(std::isnan(ig.err_norm.back()));
}
