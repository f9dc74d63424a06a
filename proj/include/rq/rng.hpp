#pragma once

#include <cmath>
#include <cstdint>

namespace rq {

// Counter-based deterministic generator (splitmix64 core). Substreams are
// derived by key, not by sequential draws, so parallel callers see the same
// numbers at any interleaving.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Independent substream keyed by index; the parent stream is untouched.
  Rng fork(std::uint64_t key) const {
    std::uint64_t mixed = state_ ^ (0x9e3779b97f4a7c15ull * (key + 0x632be59bd9b4e019ull));
    mixed ^= mixed >> 29;
    mixed *= 0xff51afd7ed558ccdull;
    mixed ^= mixed >> 32;
    return Rng(mixed);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; one value per call, cache unused half.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace rq
