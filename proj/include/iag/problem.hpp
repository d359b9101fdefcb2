#pragma once

#include <memory>
#include <vector>

#include "iag/component.hpp"

namespace iag {

/// Finite-sum objective f = sum_i f_i together with its constants and a
/// reference optimum. L is always the sum of the component Lipschitz
/// constants, which may exceed the sharpest Lipschitz constant of grad f.
/// Immutable after construction; safe to share between runs.
class Problem {
 public:
  /// Validates dimensions, mu > 0, sum L_i >= mu, and that the gradient norm
  /// at x_star is within kOptimumTolerance.
  Problem(std::vector<std::shared_ptr<const Component>> components, double mu,
          Vector x_star);

  Index dim() const { return n_; }
  int num_components() const { return static_cast<int>(components_.size()); }
  const Component& component(int i) const;

  double mu() const { return mu_; }
  double lipschitz() const { return lipschitz_; }
  double condition_number() const { return cond_; }
  const Vector& x_star() const { return x_star_; }
  double f_star() const { return f_star_; }

  double value(const Vector& x) const;
  /// Exact grad f(x), components summed in index order.
  Vector full_gradient(const Vector& x) const;

  static constexpr double kOptimumTolerance = 1e-9;

 private:
  std::vector<std::shared_ptr<const Component>> components_;
  Index n_ = 0;
  double mu_ = 0, lipschitz_ = 0, cond_ = 0;
  Vector x_star_;
  double f_star_ = 0;
};

/// Full gradient descent at stepsize 2/(mu+L) from the origin, iterated until
/// |grad f(x)| <= 1e-12 max(1, |x|). Pins reference optima for problems
/// without a closed-form solution.
Vector reference_optimum(
    const std::vector<std::shared_ptr<const Component>>& components, double mu,
    double lipschitz, Index n);

}  // namespace iag
