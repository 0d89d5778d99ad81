#include <cvqrc/features.hpp>

#include <cmath>
#include <stdexcept>

#include <cvqrc/special_functions.hpp>
#include <cvqrc/wishart.hpp>

namespace cvqrc {

Eigen::Index FeatureScheme::nodes_per_step(Eigen::Index n) const {
  Eigen::Index count = 0;
  if (include_cov) count += n * (n + 1) / 2;
  count += n * static_cast<Eigen::Index>(uv_points.size());
  count += (n * (n - 1) / 2) * static_cast<Eigen::Index>(bv_grid.size());
  return count;
}

std::vector<double> uv_points_uniform(int count) {
  if (count < 1) throw std::invalid_argument("uv_points_uniform: need at least one point");
  std::vector<double> pts(static_cast<std::size_t>(count));
  if (count == 1) {
    pts[0] = 0.1;
    return pts;
  }
  for (int a = 0; a < count; ++a) {
    pts[static_cast<std::size_t>(a)] = 0.1 + (2.0 - 0.1) * a / (count - 1);
  }
  return pts;
}

std::vector<std::array<double, 2>> bv_grid_square(int side) {
  if (side < 1) throw std::invalid_argument("bv_grid_square: need side >= 1");
  std::vector<std::array<double, 2>> grid;
  grid.reserve(static_cast<std::size_t>(side) * static_cast<std::size_t>(side));
  for (int a = 0; a < side; ++a) {
    for (int b = 0; b < side; ++b) {
      grid.push_back({0.1 + 0.5 * a, 0.1 + 0.5 * b});
    }
  }
  return grid;
}

RealMatrix x_submatrix(const CovarianceMatrix& sigma_out) {
  const Eigen::Index n = sigma_out.n_modes();
  const RealMatrix& m = sigma_out.matrix();
  RealMatrix x(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = m(2 * i, 2 * j);
  }
  return x;
}

RealMatrix apply_ensemble_noise(const RealMatrix& sigma_x, const FeatureScheme& scheme,
                                RngStream& rng) {
  if (scheme.ensemble == kInfiniteEnsemble) return sigma_x;
  return wishart_sample(sigma_x, scheme.ensemble, rng);
}

RealVector cov_features(const RealMatrix& sigma_x) {
  const Eigen::Index n = sigma_x.rows();
  RealVector out(n * (n + 1) / 2);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) out(c++) = sigma_x(i, j);
  }
  return out;
}

RealVector uv_cdf_features(const RealMatrix& sigma_x, const std::vector<double>& points) {
  const Eigen::Index n = sigma_x.rows();
  const Eigen::Index np = static_cast<Eigen::Index>(points.size());
  RealVector out(n * np);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double var = sigma_x(i, i);
    if (!(var > 0.0)) {
      throw std::invalid_argument("uv_cdf_features: nonpositive variance");
    }
    const double inv_sd = 1.0 / std::sqrt(var);
    for (Eigen::Index a = 0; a < np; ++a) {
      out(i * np + a) = std_normal_cdf(points[static_cast<std::size_t>(a)] * inv_sd);
    }
  }
  return out;
}

RealVector bv_cdf_features(const RealMatrix& sigma_x,
                           const std::vector<std::array<double, 2>>& grid) {
  const Eigen::Index n = sigma_x.rows();
  const Eigen::Index ng = static_cast<Eigen::Index>(grid.size());
  RealVector out((n * (n - 1) / 2) * ng);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double vi = sigma_x(i, i), vj = sigma_x(j, j);
      const double rho = sigma_x(i, j) / std::sqrt(vi * vj);
      if (!(vi > 0.0) || !(vj > 0.0) || !(std::abs(rho) < 1.0)) {
        throw std::invalid_argument("bv_cdf_features: degenerate pair submatrix");
      }
      const double inv_si = 1.0 / std::sqrt(vi), inv_sj = 1.0 / std::sqrt(vj);
      for (Eigen::Index a = 0; a < ng; ++a) {
        const auto& p = grid[static_cast<std::size_t>(a)];
        out(c++) = bivariate_normal_cdf(p[0] * inv_si, p[1] * inv_sj, rho);
      }
    }
  }
  return out;
}

void validate_scheme(const FeatureScheme& scheme, Eigen::Index n_modes) {
  for (std::size_t a = 1; a < scheme.uv_points.size(); ++a) {
    if (!(scheme.uv_points[a - 1] < scheme.uv_points[a])) {
      throw std::invalid_argument("FeatureScheme: uv points must be strictly increasing");
    }
  }
  for (std::size_t a = 0; a < scheme.bv_grid.size(); ++a) {
    for (std::size_t b = a + 1; b < scheme.bv_grid.size(); ++b) {
      if (scheme.bv_grid[a] == scheme.bv_grid[b]) {
        throw std::invalid_argument("FeatureScheme: bv grid points must be distinct");
      }
    }
  }
  if (scheme.memory_depth < 0) {
    throw std::invalid_argument("FeatureScheme: memory depth must be >= 0");
  }
  if (scheme.ensemble != kInfiniteEnsemble && scheme.ensemble < n_modes) {
    throw std::invalid_argument("FeatureScheme: finite ensemble must be at least N");
  }
  if (scheme.nodes_per_step(n_modes) == 0) {
    throw std::invalid_argument("FeatureScheme: scheme has no nodes");
  }
}

namespace {

std::vector<std::string> column_names_for(const FeatureScheme& scheme, Eigen::Index n) {
  std::vector<std::string> names;
  names.emplace_back("bias");
  for (std::int64_t lag = 0; lag <= scheme.memory_depth; ++lag) {
    const std::string suffix = "@lag" + std::to_string(lag);
    if (scheme.include_cov) {
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
          names.push_back("cov[" + std::to_string(i) + "][" + std::to_string(j) + "]" + suffix);
        }
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < scheme.uv_points.size(); ++a) {
        names.push_back("uvcdf[" + std::to_string(i) + "][" + std::to_string(a) + "]" + suffix);
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        for (std::size_t a = 0; a < scheme.bv_grid.size(); ++a) {
          names.push_back("bvcdf[" + std::to_string(i) + "][" + std::to_string(j) + "][" +
                          std::to_string(a) + "]" + suffix);
        }
      }
    }
  }
  return names;
}

}  // namespace

FeatureMatrix assemble_feature_matrix(const std::vector<StepRecord>& records,
                                      const FeatureScheme& scheme, WindowSpec window,
                                      const RngStream& rng) {
  if (records.empty()) throw std::invalid_argument("assemble_feature_matrix: no records");
  const Eigen::Index n = records.front().sigma_out.n_modes();
  validate_scheme(scheme, n);
  const std::int64_t count = static_cast<std::int64_t>(records.size());
  if (window.start < scheme.memory_depth || window.end > count || window.start >= window.end) {
    throw std::invalid_argument("assemble_feature_matrix: window out of range");
  }

  // One node vector per step over [start - P, end); step k's noise always
  // comes from rng.child(k) so lagged reuse is consistent across windows.
  const std::int64_t table_start = window.start - scheme.memory_depth;
  const Eigen::Index nps = scheme.nodes_per_step(n);
  RealMatrix table(window.end - table_start, nps);
  for (std::int64_t k = table_start; k < window.end; ++k) {
    RealMatrix sx = x_submatrix(records[static_cast<std::size_t>(k)].sigma_out);
    if (scheme.ensemble != kInfiniteEnsemble) {
      RngStream step_rng = rng.child(static_cast<std::uint64_t>(k));
      sx = apply_ensemble_noise(sx, scheme, step_rng);
    }
    Eigen::Index off = 0;
    if (scheme.include_cov) {
      const RealVector v = cov_features(sx);
      table.row(k - table_start).segment(off, v.size()) = v;
      off += v.size();
    }
    if (!scheme.uv_points.empty()) {
      const RealVector v = uv_cdf_features(sx, scheme.uv_points);
      table.row(k - table_start).segment(off, v.size()) = v;
      off += v.size();
    }
    if (!scheme.bv_grid.empty()) {
      const RealVector v = bv_cdf_features(sx, scheme.bv_grid);
      table.row(k - table_start).segment(off, v.size()) = v;
    }
  }

  FeatureMatrix out;
  out.values.resize(window.end - window.start, 1 + (scheme.memory_depth + 1) * nps);
  out.values.col(0).setOnes();
  for (std::int64_t k = window.start; k < window.end; ++k) {
    for (std::int64_t lag = 0; lag <= scheme.memory_depth; ++lag) {
      out.values.row(k - window.start).segment(1 + lag * nps, nps) =
          table.row(k - lag - table_start);
    }
  }
  out.column_names = column_names_for(scheme, n);
  return out;
}

}  // namespace cvqrc
