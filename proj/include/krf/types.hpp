#pragma once

#include <Eigen/Dense>

namespace krf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A single target value: length q for Euclidean targets, length 1
/// (radians) for circular ones.
using TargetPoint = Eigen::VectorXd;

}  // namespace krf
