#pragma once

#include <string>

#include "iag/problem.hpp"

namespace iag {

/// Logistic losses of one contiguous sample block plus a ridge share:
///   f(x) = sum_j log(1 + exp(-y_j <a_j, x>)) + ridge/2 |x|^2.
/// The Lipschitz constant uses the row-norm bound sum_j |a_j|^2 / 4 + ridge.
class LogisticComponent final : public Component {
 public:
  LogisticComponent(Matrix features, Vector labels, double ridge);

  Index dim() const override { return features_.cols(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double lipschitz() const override { return lipschitz_; }

 private:
  Matrix features_;
  Vector labels_;
  double ridge_ = 0;
  double lipschitz_ = 0;
};

struct LogisticData {
  Matrix features;  // N x n
  Vector labels;    // entries +1 or -1
};

/// CSV with header `label,x1,...,xn`; labels must parse to exactly +1 or -1.
LogisticData load_logistic_csv(const std::string& path);

/// l2-regularized logistic regression split into m contiguous sample blocks,
/// each carrying lambda/m of the ridge. mu = lambda; the reference optimum is
/// computed by the full-gradient solve.
Problem make_logistic_l2(const Matrix& features, const Vector& labels,
                         double lambda, int m);

}  // namespace iag
