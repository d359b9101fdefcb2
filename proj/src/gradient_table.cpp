#include "iag/gradient_table.hpp"

#include <stdexcept>

namespace iag {

GradientTable::GradientTable(const Problem& problem, const Vector& x0) {
  if (x0.size() != problem.dim())
    throw std::invalid_argument("x0 dimension mismatch");
  const int m = problem.num_components();
  stored_.resize(problem.dim(), m);
  tau_.assign(static_cast<size_t>(m), 0);
  for (int i = 0; i < m; ++i)
    stored_.col(i) = problem.component(i).gradient(x0);
  aggregate_ = recompute_aggregate();
}

void GradientTable::refresh(const Problem& problem, int i, const Vector& x,
                            long t) {
  if (i < 0 || i >= size())
    throw std::out_of_range("component index out of range");
  const Vector g = problem.component(i).gradient(x);
  aggregate_ += g - stored_.col(i);
  stored_.col(i) = g;
  tau_[static_cast<size_t>(i)] = t;
  if (++refreshes_since_sync_ >= kResyncInterval) {
    aggregate_ = recompute_aggregate();
    refreshes_since_sync_ = 0;
  }
}

long GradientTable::sample_time(int i) const {
  if (i < 0 || i >= size())
    throw std::out_of_range("component index out of range");
  return tau_[static_cast<size_t>(i)];
}

Vector GradientTable::recompute_aggregate() const {
  Vector acc = Vector::Zero(stored_.rows());
  for (Index j = 0; j < stored_.cols(); ++j) acc += stored_.col(j);
  return acc;
}

}  // namespace iag
