#include <cvqrc/linalg.hpp>

#include <limits>
#include <stdexcept>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace cvqrc {

RealMatrix matrix_exp(const RealMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("matrix_exp: input must be square");
  }
  return a.exp();
}

ThinSvd thin_svd(const RealMatrix& a, double rcond) {
  Eigen::BDCSVD<RealMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const double cut = sv.size() > 0 ? rcond * sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  ThinSvd out;
  out.u = svd.matrixU().leftCols(rank);
  out.v = svd.matrixV().leftCols(rank);
  out.s = sv.head(rank);
  return out;
}

RealMatrix pseudoinverse(const RealMatrix& a, double rcond) {
  if (rcond <= 0.0 || rcond >= 1.0) {
    throw std::invalid_argument("pseudoinverse: rcond must lie in (0,1)");
  }
  const ThinSvd f = thin_svd(a, rcond);
  if (f.rank() == 0) return RealMatrix::Zero(a.cols(), a.rows());
  return f.v * f.s.cwiseInverse().asDiagonal() * f.u.transpose();
}

LeastSquaresSolver::LeastSquaresSolver(const RealMatrix& a, double rcond)
    : svd_(thin_svd(a, rcond)) {}

RealMatrix LeastSquaresSolver::solve(const RealMatrix& b) const {
  if (b.rows() != svd_.u.rows()) {
    throw std::invalid_argument("LeastSquaresSolver: right-hand side row count mismatch");
  }
  if (svd_.rank() == 0) return RealMatrix::Zero(svd_.v.rows(), b.cols());
  return svd_.v * (svd_.s.cwiseInverse().asDiagonal() * (svd_.u.transpose() * b));
}

Eigen::Index matrix_rank(const RealMatrix& a) {
  Eigen::BDCSVD<RealMatrix> svd(a);
  const RealVector& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) *
                     std::numeric_limits<double>::epsilon() * sv(0);
  return (sv.array() > tol).count();
}

Eigen::Index matrix_rank(const RealMatrix& a, double tol) {
  Eigen::BDCSVD<RealMatrix> svd(a);
  return (svd.singularValues().array() > tol).count();
}

}  // namespace cvqrc
