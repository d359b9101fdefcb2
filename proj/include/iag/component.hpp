#pragma once

#include <cstdint>

#include "iag/types.hpp"

namespace iag {

/// One summand f_i of a finite-sum objective, with the Lipschitz constant of
/// its gradient. Implementations must be pure: value() and gradient() may not
/// mutate state, so components can be shared across concurrent runs.
class Component {
 public:
  virtual ~Component() = default;

  virtual Index dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual double lipschitz() const = 0;
};

/// Worst relative deviation between the analytic gradient and a central finite
/// difference of value() over `points` random points, step h = 1e-5.
/// Per-coordinate differences are compared as |diff| / max(1, |fd|).
double gradient_fd_error(const Component& component, int points, std::uint64_t seed);

}  // namespace iag
