#include "iag/component.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace iag {

double gradient_fd_error(const Component& component, int points,
                         std::uint64_t seed) {
  const double h = 1e-5;
  const Index n = component.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  double worst = 0.0;
  for (int p = 0; p < points; ++p) {
    Vector x(n);
    for (Index j = 0; j < n; ++j) x[j] = normal(rng);
    const Vector analytic = component.gradient(x);
    Vector probe = x;
    for (Index j = 0; j < n; ++j) {
      probe[j] = x[j] + h;
      const double fp = component.value(probe);
      probe[j] = x[j] - h;
      const double fm = component.value(probe);
      probe[j] = x[j];
      const double fd = (fp - fm) / (2.0 * h);
      const double rel = std::abs(analytic[j] - fd) / std::max(1.0, std::abs(fd));
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

}  // namespace iag
