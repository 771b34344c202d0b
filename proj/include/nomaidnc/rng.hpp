#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nomaidnc {

/// SplitMix64 finalizer. Used to derive independent stream seeds; the mix is
/// pure, so distributing work cannot change what any stream produces.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Seed for one (sweep point, trial) cell: chained splitmix64 over the indices.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t sweep_index,
                                 std::uint64_t trial_index) {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ (sweep_index + 0x9e3779b97f4a7c15ull));
  s = splitmix64(s ^ (trial_index + 0x517cc1b727220a95ull));
  return s;
}

/// mt19937_64 with hand-rolled variate transforms so that streams are
/// bit-identical across platforms and standard library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unit-mean exponential variate (a Rayleigh power fade).
  double exponential() { return -std::log1p(-uniform()); }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const int span = hi - lo + 1;
    int v = lo + static_cast<int>(uniform() * span);
    return v > hi ? hi : v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nomaidnc
