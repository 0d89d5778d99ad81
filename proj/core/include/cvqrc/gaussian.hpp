#pragma once

#include <cvqrc/types.hpp>

namespace cvqrc {

// Quadrature ordering is x1,p1,x2,p2,... throughout; vacuum covariance is
// the identity, so the per-mode symplectic form block is [[0,2],[-2,0]].

inline constexpr double kCovSymmetryTol = 1e-12;
inline constexpr double kSymplecticTol = 1e-10;
inline constexpr double kUncertaintyTol = 1e-9;

class CovarianceMatrix {
 public:
  // Validates: even square dimensions, symmetry to kCovSymmetryTol,
  // positive definiteness. Stores the exactly symmetrized matrix.
  explicit CovarianceMatrix(RealMatrix m);

  // Trusted path for matrices already known valid (symplectic images of
  // valid states); symmetrizes but skips the definiteness check.
  static CovarianceMatrix unchecked(RealMatrix m);

  Eigen::Index n_modes() const { return mat_.rows() / 2; }
  const RealMatrix& matrix() const { return mat_; }

  // Smallest eigenvalue of the Hermitian matrix sigma + i*Omega/2; the
  // uncertainty relation requires this to be >= -kUncertaintyTol.
  double uncertainty_defect() const;

 private:
  CovarianceMatrix() = default;
  RealMatrix mat_;
};

RealMatrix symplectic_form(Eigen::Index n_modes);

// Max-norm of S*Omega*S^T - Omega.
double symplectic_defect(const RealMatrix& s);

// Single-mode squeezed thermal state, phase phi in radians:
// (2*n_th+1) * [[cosh2r + cos(phi) sinh2r, sin(phi) sinh2r],
//               [sin(phi) sinh2r, cosh2r - cos(phi) sinh2r]].
CovarianceMatrix squeezed_vacuum_cov(double r, double phi = 0.0, double n_th = 0.0);

struct HamiltonianSpec {
  RealVector omegas;  // per-mode frequencies, positive
  RealMatrix g;       // symmetric, zero diagonal: (x,x)+(p,p) couplings
  RealMatrix h;       // symmetric, zero diagonal: (x,p)+(p,x) couplings
};

// Quadratic form M with H = (1/2) x^T M x: diagonal omega_j/2, pairwise
// blocks g_jk/2 on (x,x),(p,p) and h_jk/2 on (x,p),(p,x).
RealMatrix hamiltonian_matrix(const HamiltonianSpec& spec);

// S(dt) = exp(Omega * M * dt) for symmetric M.
SymplecticMatrix propagator(const RealMatrix& m, double dt);

// Per-step operator on reservoir (+) input registers of N modes each:
// beam splitter B(R) = [[sqrt(R) I, sqrt(1-R) I], [-sqrt(1-R) I, sqrt(R) I]]
// followed by the crystals, i.e. blockdiag(S1, S2) * B(R).
SymplecticMatrix step_symplectic(const SymplecticMatrix& s1,
                                 const SymplecticMatrix& s2, double reflectivity);

// S * sigma * S^T.
CovarianceMatrix evolve(const CovarianceMatrix& sigma, const SymplecticMatrix& s);

}  // namespace cvqrc
