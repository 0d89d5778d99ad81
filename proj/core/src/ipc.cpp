#include <cvqrc/ipc.hpp>

#include <stdexcept>

#include <cvqrc/linalg.hpp>
#include <cvqrc/special_functions.hpp>

namespace cvqrc {

namespace {

constexpr double kRcond = 1e-12;
constexpr int kBlock = 256;  // speculative evaluations committed in order

// Target values for one delay list on a row window, from per-degree
// Legendre tables over the full input history.
void fill_target(const DelayList& list, const std::vector<RealVector>& leg,
                 std::int64_t row_start, Eigen::Index rows, RealMatrix& dst,
                 Eigen::Index col) {
  dst.col(col).setOnes();
  std::size_t i = 0;
  while (i < list.size()) {
    const int tau = list[i];
    std::size_t j = i;
    while (j < list.size() && list[j] == tau) ++j;
    const RealVector& table = leg[j - i];
    for (Eigen::Index r = 0; r < rows; ++r) {
      dst(r, col) *= table(row_start + r - tau);
    }
    i = j;
  }
}

}  // namespace

IPCReport compute_ipc(const std::vector<StepRecord>& records,
                      const std::vector<double>& inputs, const FeatureScheme& scheme,
                      const IPCConfig& config, const RngStream& rng) {
  const std::int64_t total_len = config.washout + config.train + config.test;
  if (static_cast<std::int64_t>(records.size()) != total_len ||
      static_cast<std::int64_t>(inputs.size()) != total_len) {
    throw std::invalid_argument("compute_ipc: split does not match sequence length");
  }
  if (config.washout < config.tau_max) {
    throw std::invalid_argument("compute_ipc: wash-out shorter than tau_max");
  }
  if (config.d_max < 1 || config.tau_max < 0 || config.patience < 1 ||
      config.threshold <= 0.0 || config.train < 1 || config.test < 1) {
    throw std::invalid_argument("compute_ipc: invalid configuration");
  }

  const WindowSpec train_w{config.washout, config.washout + config.train};
  const WindowSpec test_w{train_w.end, train_w.end + config.test};
  const FeatureMatrix o_train = assemble_feature_matrix(records, scheme, train_w, rng);
  const FeatureMatrix o_test = assemble_feature_matrix(records, scheme, test_w, rng);

  const ThinSvd svd = thin_svd(o_train.values, kRcond);
  // yhat_test = o_test * V * S^-1 * (U^T y_train); the left factor is shared
  // by every target, so capacities reduce to two small matrix products.
  const RealMatrix gain = o_test.values * svd.v * svd.s.cwiseInverse().asDiagonal();

  std::vector<RealVector> leg(static_cast<std::size_t>(config.d_max) + 1);
  for (int d = 1; d <= config.d_max; ++d) {
    RealVector& table = leg[static_cast<std::size_t>(d)];
    table.resize(total_len);
    for (std::int64_t k = 0; k < total_len; ++k) {
      table(k) = normalized_legendre(d, inputs[static_cast<std::size_t>(k)]);
    }
  }

  IPCReport report;
  report.per_degree.assign(static_cast<std::size_t>(config.d_max) + 1, 0.0);

  RealMatrix y_train(config.train, kBlock), y_test(config.test, kBlock);
  std::vector<DelayList> batch;
  batch.reserve(kBlock);

  for (int degree = 1; degree <= config.d_max; ++degree) {
    DelayListEnumerator stream(degree, config.tau_max, config.equal_delays_only);
    int misses = 0;
    bool degree_done = false;
    while (!degree_done) {
      batch.clear();
      DelayList list;
      while (static_cast<int>(batch.size()) < kBlock && stream.next(list)) {
        batch.push_back(list);
      }
      if (batch.empty()) break;
      const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
      for (Eigen::Index c = 0; c < b; ++c) {
        fill_target(batch[static_cast<std::size_t>(c)], leg, train_w.start, config.train,
                    y_train, c);
        fill_target(batch[static_cast<std::size_t>(c)], leg, test_w.start, config.test,
                    y_test, c);
      }
      const RealMatrix y_hat = gain * (svd.u.transpose() * y_train.leftCols(b));
      for (Eigen::Index c = 0; c < b; ++c) {
        const double den = y_test.col(c).squaredNorm();
        const double err = (y_test.col(c) - y_hat.col(c)).squaredNorm();
        const double cap = den > 0.0 ? std::max(0.0, 1.0 - err / den) : 0.0;
        if (cap > config.threshold) {
          misses = 0;
          report.per_degree[static_cast<std::size_t>(degree)] += cap;
          report.task_log.push_back({batch[static_cast<std::size_t>(c)], cap});
        } else if (++misses >= config.patience) {
          degree_done = true;
          break;
        }
      }
      if (static_cast<int>(batch.size()) < kBlock) break;  // stream exhausted
    }
    report.total += report.per_degree[static_cast<std::size_t>(degree)];
  }
  return report;
}

}  // namespace cvqrc
