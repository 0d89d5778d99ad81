#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <cvqrc/reservoir.hpp>
#include <cvqrc/rng.hpp>
#include <cvqrc/types.hpp>

namespace cvqrc {

// ensemble == 0 means the ideal (infinite-ensemble) case; a positive value
// is the measurement count M of the finite-ensemble noise model.
inline constexpr std::int64_t kInfiniteEnsemble = 0;

struct FeatureScheme {
  bool include_cov = true;
  std::vector<double> uv_points;                 // strictly increasing thresholds
  std::vector<std::array<double, 2>> bv_grid;    // distinct planar points
  std::int64_t memory_depth = 0;                 // P past steps appended
  std::int64_t ensemble = kInfiniteEnsemble;

  Eigen::Index nodes_per_step(Eigen::Index n_modes) const;
};

// Paper-style point sets: thresholds uniform on [0.1, 2.0]; square grids
// {0.1, 0.6, 1.1, ...}^2 with the given side length.
std::vector<double> uv_points_uniform(int count);
std::vector<std::array<double, 2>> bv_grid_square(int side);

// Throws on malformed schemes: non-increasing thresholds, duplicate grid
// points, negative depth, finite ensemble below N, or zero nodes.
void validate_scheme(const FeatureScheme& scheme, Eigen::Index n_modes);

// x-quadrature rows/columns (even indices) of an N-mode output covariance.
RealMatrix x_submatrix(const CovarianceMatrix& sigma_out);

// Identity for the infinite ensemble; one Wishart draw at finite M.
RealMatrix apply_ensemble_noise(const RealMatrix& sigma_x, const FeatureScheme& scheme,
                                RngStream& rng);

// Upper triangle including the diagonal, row-major.
RealVector cov_features(const RealMatrix& sigma_x);

// (mode, point) mode-major: Phi(c_a / sqrt(sigma_ii)).
RealVector uv_cdf_features(const RealMatrix& sigma_x, const std::vector<double>& points);

// (pair, point) with pairs (i<j) lexicographic:
// F(c1/sqrt(s_ii), c2/sqrt(s_jj); rho = s_ij/sqrt(s_ii s_jj)).
RealVector bv_cdf_features(const RealMatrix& sigma_x,
                           const std::vector<std::array<double, 2>>& grid);

struct FeatureMatrix {
  RealMatrix values;  // rows x (1 + (P+1) * nodes_per_step), bias first
  std::vector<std::string> column_names;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

// Half-open global step range [start, end).
struct WindowSpec {
  std::int64_t start = 0;
  std::int64_t end = 0;
};

// Row for step k: 1, nodes(k), nodes(k-1), ..., nodes(k-P). At finite M the
// noise for step k comes from rng.child(k), so every window of the same run
// (and every lagged reuse of step k) sees the same noisy estimate while
// distinct steps stay independent.
FeatureMatrix assemble_feature_matrix(const std::vector<StepRecord>& records,
                                      const FeatureScheme& scheme, WindowSpec window,
                                      const RngStream& rng);

}  // namespace cvqrc
