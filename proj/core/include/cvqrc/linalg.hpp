#pragma once

#include <cvqrc/types.hpp>

namespace cvqrc {

// exp(A) for square A.
RealMatrix matrix_exp(const RealMatrix& a);

// Thin SVD with singular values at or below rcond * s_max dropped.
struct ThinSvd {
  RealMatrix u;  // rows x rank
  RealMatrix v;  // cols x rank
  RealVector s;  // rank entries, descending, all retained
  Eigen::Index rank() const { return s.size(); }
};

ThinSvd thin_svd(const RealMatrix& a, double rcond = 1e-12);

RealMatrix pseudoinverse(const RealMatrix& a, double rcond = 1e-12);

// Minimum-norm least-squares solver that reuses one factorization across
// many right-hand sides (the readout trains thousands of targets per SVD).
class LeastSquaresSolver {
 public:
  explicit LeastSquaresSolver(const RealMatrix& a, double rcond = 1e-12);

  // Coefficient matrix X minimizing ||A X - B||_F, minimum norm.
  RealMatrix solve(const RealMatrix& b) const;

  const ThinSvd& svd() const { return svd_; }

 private:
  ThinSvd svd_;
};

// Numerical rank; default tolerance max(rows, cols) * eps * s_max.
Eigen::Index matrix_rank(const RealMatrix& a);
Eigen::Index matrix_rank(const RealMatrix& a, double tol);

}  // namespace cvqrc
