#include <cvqrc/wishart.hpp>

#include <stdexcept>

#include <Eigen/Cholesky>

namespace cvqrc {

RealMatrix wishart_sample(const RealMatrix& sigma, std::int64_t ensemble_size,
                          RngStream& rng) {
  const Eigen::Index n = sigma.rows();
  if (sigma.cols() != n || n == 0) {
    throw std::invalid_argument("wishart_sample: sigma must be square and nonempty");
  }
  if (ensemble_size < n) {
    throw std::invalid_argument("wishart_sample: ensemble size must be at least the dimension");
  }
  const double scale = sigma.cwiseAbs().maxCoeff();
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(scale, 1.0)) {
    throw std::invalid_argument("wishart_sample: sigma must be symmetric");
  }
  Eigen::LLT<RealMatrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("wishart_sample: sigma must be positive definite");
  }

  // Bartlett factor: chi-distributed diagonal (M - i + 1 dof for row i,
  // 1-indexed), standard-normal strict lower triangle. Chi via the gamma
  // sampler keeps M ~ 1e6 exact where summing squared normals would not.
  RealMatrix bart = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    bart(i, i) = rng.chi(static_cast<double>(ensemble_size - i));
    for (Eigen::Index j = 0; j < i; ++j) bart(i, j) = rng.normal();
  }
  const RealMatrix la = llt.matrixL() * bart;
  RealMatrix out = (la * la.transpose()) / static_cast<double>(ensemble_size);
  out = ((out + out.transpose()) * 0.5).eval();
  return out;
}

}  // namespace cvqrc
