#include "iag/quadratic.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>
#include <stdexcept>

#include "iag/random.hpp"

namespace iag {

QuadraticComponent::QuadraticComponent(Matrix a, Vector b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != a_.cols() || a_.rows() != b_.size())
    throw std::invalid_argument("quadratic shape mismatch");
  if (!a_.isApprox(a_.transpose(), 1e-12))
    throw std::invalid_argument("matrix must be symmetric");
  a_ = ((a_ + a_.transpose()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(a_, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  const double max_eig = es.eigenvalues().maxCoeff();
  if (min_eig < -1e-10 * std::max(1.0, max_eig))
    throw std::invalid_argument("matrix must be positive semidefinite");
  lipschitz_ = std::max(0.0, max_eig);
}

double QuadraticComponent::value(const Vector& x) const {
  if (x.size() != b_.size()) throw std::invalid_argument("dimension mismatch");
  return 0.5 * x.dot(a_ * x) + b_.dot(x);
}

Vector QuadraticComponent::gradient(const Vector& x) const {
  if (x.size() != b_.size()) throw std::invalid_argument("dimension mismatch");
  return a_ * x + b_;
}

Problem make_quadratic_sum(std::uint64_t seed, int m, Index n, double mu_target,
                           double l_target) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(mu_target > 0)) throw std::invalid_argument("mu_target must be positive");
  if (l_target < mu_target)
    throw std::invalid_argument("l_target must be at least mu_target");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-0.3, 1.0);

  std::vector<Matrix> mats;
  std::vector<Vector> offsets;
  mats.reserve(static_cast<size_t>(m));
  offsets.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const Matrix rot = random_rotation(n, rng);
    Vector diag(n);
    for (Index j = 0; j < n; ++j) diag[j] = std::max(0.0, unif(rng));
    Matrix a = rot.transpose() * diag.asDiagonal() * rot;
    mats.push_back(((a + a.transpose()) / 2.0).eval());
  }
  for (int i = 0; i < m; ++i) offsets.push_back(gaussian_vector(n, rng));

  Matrix sum = Matrix::Zero(n, n);
  for (const Matrix& a : mats) sum += a;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sum);
  Vector eigs = es.eigenvalues();  // ascending
  const Matrix& basis = es.eigenvectors();

  // Rescale so no eigenvalue overshoots its target, then raise the low end to
  // mu_target and (for n >= 2) the top one to l_target inside the eigenbasis.
  // The raise is PSD, so adding it to one component preserves semidefiniteness.
  double alpha = 1.0;
  if (eigs[n - 1] > 0) {
    alpha = l_target / eigs[n - 1];
    if (eigs[0] > 0) alpha = std::min(alpha, mu_target / eigs[0]);
  }
  for (Matrix& a : mats) a *= alpha;
  eigs *= alpha;

  Vector raise(n);
  for (Index j = 0; j < n; ++j) raise[j] = std::max(0.0, mu_target - eigs[j]);
  if (n >= 2) raise[n - 1] += l_target - std::max(eigs[n - 1], mu_target);
  if (raise.maxCoeff() > 0) {
    Matrix corr = basis * raise.asDiagonal() * basis.transpose();
    mats.back() += ((corr + corr.transpose()) / 2.0).eval();
    mats.back() = ((mats.back() + mats.back().transpose()) / 2.0).eval();
  }

  std::vector<std::shared_ptr<const Component>> components;
  components.reserve(static_cast<size_t>(m));
  Matrix total = Matrix::Zero(n, n);
  Vector rhs = Vector::Zero(n);
  for (int i = 0; i < m; ++i) {
    total += mats[static_cast<size_t>(i)];
    rhs += offsets[static_cast<size_t>(i)];
    components.push_back(std::make_shared<QuadraticComponent>(
        std::move(mats[static_cast<size_t>(i)]),
        std::move(offsets[static_cast<size_t>(i)])));
  }

  Vector x_star = total.ldlt().solve(-rhs);
  return Problem(std::move(components), mu_target, std::move(x_star));
}

Problem make_two_eigenvalue_quadratic(double mu, double l) {
  if (!(mu > 0) || l < mu) throw std::invalid_argument("need 0 < mu <= l");
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = mu;
  a(1, 1) = l;
  std::vector<std::shared_ptr<const Component>> components;
  components.push_back(
      std::make_shared<QuadraticComponent>(std::move(a), Vector::Zero(2)));
  return Problem(std::move(components), mu, Vector::Zero(2));
}

}  // namespace iag
