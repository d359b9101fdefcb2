#include "iag/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iag {

Problem::Problem(std::vector<std::shared_ptr<const Component>> components,
                 double mu, Vector x_star)
    : components_(std::move(components)), x_star_(std::move(x_star)) {
  if (components_.empty())
    throw std::invalid_argument("problem needs at least one component");
  for (const auto& c : components_)
    if (!c) throw std::invalid_argument("null component");
  n_ = components_.front()->dim();
  if (n_ < 1) throw std::invalid_argument("dimension must be positive");
  for (const auto& c : components_)
    if (c->dim() != n_)
      throw std::invalid_argument("component dimensions differ");
  if (!(mu > 0)) throw std::invalid_argument("mu must be positive");
  if (x_star_.size() != n_)
    throw std::invalid_argument("x_star dimension mismatch");

  mu_ = mu;
  lipschitz_ = 0.0;
  for (const auto& c : components_) lipschitz_ += c->lipschitz();
  if (lipschitz_ < mu_)
    throw std::invalid_argument("sum of component Lipschitz constants below mu");
  cond_ = lipschitz_ / mu_;

  const double grad_norm = full_gradient(x_star_).norm();
  if (!(grad_norm <= kOptimumTolerance))
    throw std::invalid_argument("reference optimum fails the gradient tolerance");
  f_star_ = value(x_star_);
}

const Component& Problem::component(int i) const {
  if (i < 0 || i >= num_components())
    throw std::out_of_range("component index out of range");
  return *components_[static_cast<size_t>(i)];
}

double Problem::value(const Vector& x) const {
  if (x.size() != n_) throw std::invalid_argument("dimension mismatch");
  double acc = 0.0;
  for (const auto& c : components_) acc += c->value(x);
  return acc;
}

Vector Problem::full_gradient(const Vector& x) const {
  if (x.size() != n_) throw std::invalid_argument("dimension mismatch");
  Vector g = Vector::Zero(n_);
  for (const auto& c : components_) g += c->gradient(x);
  return g;
}

Vector reference_optimum(
    const std::vector<std::shared_ptr<const Component>>& components, double mu,
    double lipschitz, Index n) {
  if (!(mu > 0) || lipschitz < mu)
    throw std::invalid_argument("need 0 < mu <= L");
  const double gamma = 2.0 / (mu + lipschitz);
  const long max_iters = 2000000;
  Vector x = Vector::Zero(n);
  for (long it = 0; it < max_iters; ++it) {
    Vector g = Vector::Zero(n);
    for (const auto& c : components) g += c->gradient(x);
    if (g.norm() <= 1e-12 * std::max(1.0, x.norm())) return x;
    x -= gamma * g;
  }
  throw std::runtime_error("reference optimum solve did not converge");
}

}  // namespace iag
