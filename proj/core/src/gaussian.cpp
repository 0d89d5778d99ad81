#include <cvqrc/gaussian.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cvqrc/linalg.hpp>

namespace cvqrc {

CovarianceMatrix::CovarianceMatrix(RealMatrix m) {
  const Eigen::Index d = m.rows();
  if (m.cols() != d || d == 0 || d % 2 != 0) {
    throw std::invalid_argument("CovarianceMatrix: need even square dimensions");
  }
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kCovSymmetryTol * scale) {
    throw std::invalid_argument("CovarianceMatrix: matrix not symmetric");
  }
  mat_ = ((m + m.transpose()) * 0.5).eval();
  Eigen::LLT<RealMatrix> llt(mat_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("CovarianceMatrix: matrix not positive definite");
  }
}

CovarianceMatrix CovarianceMatrix::unchecked(RealMatrix m) {
  CovarianceMatrix out;
  out.mat_ = ((m + m.transpose()) * 0.5).eval();
  return out;
}

double CovarianceMatrix::uncertainty_defect() const {
  // Robertson-Schroedinger in this scaling (vacuum = identity, [x,p] = 2i):
  // sigma + i Omega / 2 >= 0, with pure states saturating at zero.
  const Eigen::Index d = mat_.rows();
  Eigen::MatrixXcd herm = mat_.cast<std::complex<double>>();
  const RealMatrix omega = symplectic_form(d / 2);
  herm += std::complex<double>(0.0, 0.5) * omega.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

RealMatrix symplectic_form(Eigen::Index n_modes) {
  if (n_modes < 1) throw std::invalid_argument("symplectic_form: need n_modes >= 1");
  RealMatrix omega = RealMatrix::Zero(2 * n_modes, 2 * n_modes);
  for (Eigen::Index j = 0; j < n_modes; ++j) {
    omega(2 * j, 2 * j + 1) = 2.0;
    omega(2 * j + 1, 2 * j) = -2.0;
  }
  return omega;
}

double symplectic_defect(const RealMatrix& s) {
  const RealMatrix omega = symplectic_form(s.rows() / 2);
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

CovarianceMatrix squeezed_vacuum_cov(double r, double phi, double n_th) {
  if (r < 0.0) throw std::invalid_argument("squeezed_vacuum_cov: r must be >= 0");
  if (n_th < 0.0) throw std::invalid_argument("squeezed_vacuum_cov: n_th must be >= 0");
  const double th = 2.0 * n_th + 1.0;
  const double ch = std::cosh(2.0 * r), sh = std::sinh(2.0 * r);
  RealMatrix m(2, 2);
  m << th * (ch + std::cos(phi) * sh), th * std::sin(phi) * sh,
      th * std::sin(phi) * sh, th * (ch - std::cos(phi) * sh);
  return CovarianceMatrix::unchecked(std::move(m));
}

RealMatrix hamiltonian_matrix(const HamiltonianSpec& spec) {
  const Eigen::Index n = spec.omegas.size();
  if (n < 1) throw std::invalid_argument("hamiltonian_matrix: need at least one mode");
  if (spec.g.rows() != n || spec.g.cols() != n || spec.h.rows() != n || spec.h.cols() != n) {
    throw std::invalid_argument("hamiltonian_matrix: coupling matrices must be N x N");
  }
  if ((spec.omegas.array() <= 0.0).any()) {
    throw std::invalid_argument("hamiltonian_matrix: frequencies must be positive");
  }
  auto bad = [](const RealMatrix& c) {
    return (c - c.transpose()).cwiseAbs().maxCoeff() > 0.0 ||
           c.diagonal().cwiseAbs().maxCoeff() > 0.0;
  };
  if (bad(spec.g) || bad(spec.h)) {
    throw std::invalid_argument("hamiltonian_matrix: couplings must be symmetric with zero diagonal");
  }
  RealMatrix m = RealMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    m(2 * j, 2 * j) = spec.omegas(j) / 2.0;
    m(2 * j + 1, 2 * j + 1) = spec.omegas(j) / 2.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (j == k) continue;
      m(2 * j, 2 * k) = spec.g(j, k) / 2.0;
      m(2 * j + 1, 2 * k + 1) = spec.g(j, k) / 2.0;
      m(2 * j, 2 * k + 1) = spec.h(j, k) / 2.0;
      m(2 * j + 1, 2 * k) = spec.h(j, k) / 2.0;
    }
  }
  return m;
}

SymplecticMatrix propagator(const RealMatrix& m, double dt) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw std::invalid_argument("propagator: generator must be even square");
  }
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("propagator: generator must be symmetric");
  }
  return matrix_exp(symplectic_form(m.rows() / 2) * m * dt);
}

SymplecticMatrix step_symplectic(const SymplecticMatrix& s1,
                                 const SymplecticMatrix& s2, double reflectivity) {
  if (reflectivity < 0.0 || reflectivity > 1.0) {
    throw std::invalid_argument("step_symplectic: reflectivity must lie in [0,1]");
  }
  const Eigen::Index d = s1.rows();
  if (s1.cols() != d || s2.rows() != d || s2.cols() != d || d == 0 || d % 2 != 0) {
    throw std::invalid_argument("step_symplectic: crystal symplectics must be equal even square");
  }
  const double c = std::sqrt(reflectivity), t = std::sqrt(1.0 - reflectivity);
  SymplecticMatrix out(2 * d, 2 * d);
  // blockdiag(S1,S2) * [[c I, t I], [-t I, c I]] written out block-wise.
  out.topLeftCorner(d, d) = c * s1;
  out.topRightCorner(d, d) = t * s1;
  out.bottomLeftCorner(d, d) = -t * s2;
  out.bottomRightCorner(d, d) = c * s2;
  return out;
}

CovarianceMatrix evolve(const CovarianceMatrix& sigma, const SymplecticMatrix& s) {
  if (s.cols() != sigma.matrix().rows()) {
    throw std::invalid_argument("evolve: dimension mismatch");
  }
  return CovarianceMatrix::unchecked(s * sigma.matrix() * s.transpose());
}

}  // namespace cvqrc
