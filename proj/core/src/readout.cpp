#include <cvqrc/readout.hpp>

#include <algorithm>
#include <stdexcept>

namespace cvqrc {

ReadoutWeights train(const FeatureMatrix& o_train, const std::vector<double>& y_train,
                     double rcond) {
  if (o_train.rows() == 0) throw std::invalid_argument("train: empty feature matrix");
  if (o_train.rows() != static_cast<Eigen::Index>(y_train.size())) {
    throw std::invalid_argument("train: row count does not match target length");
  }
  const Eigen::Map<const RealVector> y(y_train.data(), static_cast<Eigen::Index>(y_train.size()));
  LeastSquaresSolver solver(o_train.values, rcond);
  return {solver.solve(y)};
}

std::vector<double> predict(const FeatureMatrix& o, const ReadoutWeights& w) {
  if (o.cols() != w.weights.size()) {
    throw std::invalid_argument("predict: column count does not match weight length");
  }
  const RealVector y = o.values * w.weights;
  return {y.data(), y.data() + y.size()};
}

double nmse(const std::vector<double>& y_target, const std::vector<double>& y_pred) {
  if (y_target.size() != y_pred.size() || y_target.empty()) {
    throw std::invalid_argument("nmse: sequences must be nonempty and equal length");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < y_target.size(); ++k) {
    const double d = y_target[k] - y_pred[k];
    num += d * d;
    den += y_target[k] * y_target[k];
  }
  if (den == 0.0) throw std::invalid_argument("nmse: target is identically zero");
  return num / den;
}

double capacity(double nmse_value) {
  if (nmse_value < 0.0) throw std::invalid_argument("capacity: nmse must be >= 0");
  return std::clamp(1.0 - nmse_value, 0.0, 1.0);
}

TaskResult evaluate(const FeatureMatrix& o_test, const ReadoutWeights& w,
                    const std::vector<double>& y_test) {
  const double e = nmse(y_test, predict(o_test, w));
  return {e, capacity(e)};
}

}  // namespace cvqrc
