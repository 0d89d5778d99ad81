#include <cvqrc/tasks.hpp>

#include <algorithm>
#include <stdexcept>

#include <cvqrc/special_functions.hpp>

namespace cvqrc {

std::vector<double> gen_inputs(std::int64_t length, RngStream& rng) {
  if (length <= 0) throw std::invalid_argument("gen_inputs: length must be positive");
  std::vector<double> s(static_cast<std::size_t>(length));
  for (double& v : s) v = rng.uniform(-1.0, 1.0);
  return s;
}

std::vector<double> narma_target(const std::vector<double>& s, const NarmaParams& params) {
  if (params.n < 1) throw std::invalid_argument("narma_target: order must be >= 1");
  const std::int64_t len = static_cast<std::int64_t>(s.size());
  if (len <= params.n) throw std::invalid_argument("narma_target: sequence too short");
  std::vector<double> y(s.size(), 0.0);
  for (std::int64_t k = params.n - 1; k + 1 < len; ++k) {
    double acc = 0.0;
    for (std::int64_t j = k - params.n + 1; j <= k; ++j) acc += y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(k + 1)] =
        params.alpha * y[static_cast<std::size_t>(k)] + params.beta * acc +
        params.gamma * s[static_cast<std::size_t>(k - params.n + 1)] * s[static_cast<std::size_t>(k)] +
        params.delta;
  }
  return y;
}

std::vector<double> legendre_target(const DelayList& list, const std::vector<double>& s) {
  if (list.empty()) throw std::invalid_argument("legendre_target: empty delay list");
  if (!std::is_sorted(list.begin(), list.end()) || list.front() < 0) {
    throw std::invalid_argument("legendre_target: delays must be non-decreasing and nonnegative");
  }
  const int max_delay = list.back();
  if (static_cast<std::size_t>(max_delay) >= s.size()) {
    throw std::invalid_argument("legendre_target: insufficient history");
  }
  std::vector<double> y(s.size(), 0.0);
  for (std::size_t k = static_cast<std::size_t>(max_delay); k < s.size(); ++k) {
    double prod = 1.0;
    std::size_t i = 0;
    while (i < list.size()) {
      const int tau = list[i];
      std::size_t j = i;
      while (j < list.size() && list[j] == tau) ++j;
      prod *= normalized_legendre(static_cast<int>(j - i), s[k - static_cast<std::size_t>(tau)]);
      i = j;
    }
    y[k] = prod;
  }
  return y;
}

DelayListEnumerator::DelayListEnumerator(int degree, int tau_max, bool equal_only)
    : degree_(degree), tau_max_(tau_max), equal_only_(equal_only) {
  if (degree < 1) throw std::invalid_argument("DelayListEnumerator: degree must be >= 1");
  if (tau_max < 0) throw std::invalid_argument("DelayListEnumerator: tau_max must be >= 0");
  current_.assign(static_cast<std::size_t>(degree), 0);
}

bool DelayListEnumerator::next(DelayList& out) {
  if (done_) return false;
  out = current_;

  const std::size_t d = current_.size();
  if (equal_only_) {
    if (current_.back() == tau_max_) {
      done_ = true;
    } else {
      current_.assign(d, current_.back() + 1);
    }
    return true;
  }

  // Advance the length d-1 prefix lexicographically within the group of
  // lists whose maximum is current_.back(); exhausted prefixes roll over
  // to the next maximum-delay group.
  const int group_max = current_.back();
  std::size_t i = d - 1;
  while (i > 0 && current_[i - 1] == group_max) --i;
  if (i == 0) {
    if (group_max == tau_max_) {
      done_ = true;
    } else {
      current_.assign(d, 0);
      current_.back() = group_max + 1;
    }
    return true;
  }
  const int bumped = current_[i - 1] + 1;
  for (std::size_t j = i - 1; j + 1 < d; ++j) current_[j] = bumped;
  return true;
}

}  // namespace cvqrc
