#pragma once

#include <cstdint>

#include "iag/problem.hpp"

namespace iag {

/// f(x) = 0.5 x'Ax + b'x with A symmetric positive semidefinite.
/// The Lipschitz constant is the largest eigenvalue of A.
class QuadraticComponent final : public Component {
 public:
  QuadraticComponent(Matrix a, Vector b);

  Index dim() const override { return b_.size(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double lipschitz() const override { return lipschitz_; }

  const Matrix& matrix() const { return a_; }
  const Vector& offset() const { return b_; }

 private:
  Matrix a_;
  Vector b_;
  double lipschitz_ = 0;
};

/// Random sum of m PSD quadratics A_i = R_i' D_i R_i with random rotations and
/// nonnegative (possibly singular) diagonals. All components are rescaled and
/// the last one is adjusted in the eigenbasis of the sum so that the smallest
/// eigenvalue of sum A_i equals mu_target exactly and the largest is raised to
/// l_target (when n >= 2). The optimum solves (sum A_i) x = -sum b_i in closed
/// form. Deterministic in seed.
Problem make_quadratic_sum(std::uint64_t seed, int m, Index n, double mu_target,
                           double l_target);

/// Single quadratic with spectrum {mu, l} and optimum at the origin: the
/// instance where gradient descent at stepsize 2/(mu+l) attains its worst-case
/// contraction factor at every step, free of absolute rounding floors.
Problem make_two_eigenvalue_quadratic(double mu, double l);

}  // namespace iag
