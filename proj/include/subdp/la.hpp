#pragma once

#include <Eigen/Dense>

namespace subdp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Per-dependent head distributions: row i is the distribution of the head of
// position i over positions 0..n (0 = ROOT). Row 0 is all zeros.
using ArcMatrix = Mat;

// Per-arc label distributions: one (n+1)x(n+1) matrix per label; cell (i, j)
// of the stack is the distribution over labels of the arc j -> i.
using LabelTensor = std::vector<Mat>;

}  // namespace subdp
