#pragma once

#include <Eigen/Dense>

namespace cvqrc {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Symplectic matrices are carried as plain matrices; producers guarantee
// S*Omega*S^T = Omega and tests measure the defect via symplectic_defect().
using SymplecticMatrix = RealMatrix;

}  // namespace cvqrc
