#pragma once

#include <Eigen/Core>

namespace iag {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace iag
