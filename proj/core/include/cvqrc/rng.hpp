#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace cvqrc {

// Deterministic 64-bit stream: xoshiro256++ state, seeded through splitmix64.
// The same seed always yields the same draw sequence. Child streams are derived
// by mixing the parent seed with the child index (see child()), so concurrent
// consumers never share state.
class RngStream {
public:
  // Serialized into result files; bump when the generator or any sampler changes.
  static constexpr std::string_view algorithm_id = "xoshiro256++/splitmix64/v1";

  explicit RngStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = splitmix64(x);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("RngStream::uniform: empty interval");
    return lo + (hi - lo) * uniform01();
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0,1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Gamma(shape, scale) by Marsaglia-Tsang squeeze; shape < 1 handled by the
  // boost gamma(shape+1) * u^(1/shape). No overflow for large shape: the
  // returned value is O(shape * scale), never a sum of shape terms.
  double gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
      throw std::invalid_argument("RngStream::gamma: shape and scale must be positive");
    if (shape < 1.0) {
      const double u = 1.0 - uniform01();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = 1.0 - uniform01();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
  }

  // Chi-distributed value with dof degrees of freedom: sqrt of chi-squared,
  // drawn as sqrt(2 * Gamma(dof/2)). Safe for dof up to 1e8 and beyond.
  double chi(double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("RngStream::chi: dof must be positive");
    return std::sqrt(2.0 * gamma(0.5 * dof, 1.0));
  }

  // Independent child stream. Derivation: seed_child = mix(mix(seed) ^ (index+1)),
  // where mix is splitmix64's finalizer; documented so externally generated
  // streams can reproduce it.
  RngStream child(std::uint64_t index) const {
    std::uint64_t x = seed_;
    std::uint64_t a = splitmix64(x);
    std::uint64_t y = a ^ (index + 1);
    return RngStream(splitmix64(y));
  }

private:
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  // Advances x and returns the mixed output (Steele-Lea-Burton finalizer).
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cvqrc
