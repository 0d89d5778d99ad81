#pragma once

#include <vector>

#include <cvqrc/features.hpp>
#include <cvqrc/linalg.hpp>
#include <cvqrc/types.hpp>

namespace cvqrc {

struct ReadoutWeights {
  RealVector weights;  // one entry per feature column
};

struct TaskResult {
  double nmse = 0.0;
  double capacity = 0.0;
};

// Bare least squares, no regularization; rcond is the only conditioning
// control. Multi-target callers should hold a LeastSquaresSolver over
// O_train instead of re-factorizing per target.
ReadoutWeights train(const FeatureMatrix& o_train, const std::vector<double>& y_train,
                     double rcond = 1e-12);

std::vector<double> predict(const FeatureMatrix& o, const ReadoutWeights& w);

// sum((y - yhat)^2) / sum(y^2); rejects an all-zero target.
double nmse(const std::vector<double>& y_target, const std::vector<double>& y_pred);

// max(0, 1 - nmse), clamped to [0,1].
double capacity(double nmse_value);

TaskResult evaluate(const FeatureMatrix& o_test, const ReadoutWeights& w,
                    const std::vector<double>& y_test);

}  // namespace cvqrc
