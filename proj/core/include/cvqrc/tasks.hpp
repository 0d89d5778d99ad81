#pragma once

#include <cstdint>
#include <vector>

#include <cvqrc/rng.hpp>

namespace cvqrc {

struct NarmaParams {
  double alpha = 0.3;
  double beta = 0.05;
  double gamma = 0.0375;
  double delta = 0.0;
  int n = 2;
};

// i.i.d. uniform on [-1, 1].
std::vector<double> gen_inputs(std::int64_t length, RngStream& rng);

// y[k+1] = alpha*y[k] + beta*sum_{tau<n} y[k-tau] + gamma*s[k-n+1]*s[k] + delta,
// zero-initialized history; y[k] pairs with feature row k.
std::vector<double> narma_target(const std::vector<double>& s, const NarmaParams& params);

// Non-decreasing delays; the multiplicity of each distinct delay is the
// Legendre degree applied to that delayed input.
using DelayList = std::vector<int>;

// Product over distinct delays tau of P_{m(tau)}(s[k-tau]), normalized;
// entries with k < max delay (never used, wash-out covers them) are zero.
std::vector<double> legendre_target(const DelayList& list, const std::vector<double>& s);

// Streams all non-decreasing delay lists of one degree, grouped by maximum
// delay ascending and lexicographic within a group; degree 3 starts
// {0,0,0},{0,0,1},{0,1,1},{1,1,1},{0,0,2},{0,1,2},... With equal_only set,
// only the lists {t,t,...,t} are produced.
class DelayListEnumerator {
 public:
  DelayListEnumerator(int degree, int tau_max, bool equal_only = false);

  // Fills `out` and returns true, or returns false when exhausted.
  bool next(DelayList& out);

 private:
  int degree_;
  int tau_max_;
  bool equal_only_;
  bool done_ = false;
  DelayList current_;  // next list to emit
};

}  // namespace cvqrc
