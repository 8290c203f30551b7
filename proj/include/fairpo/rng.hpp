#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace fairpo {

/// One SplitMix64 step. Advances `state` and returns a well-mixed 64-bit value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic seed for a substream identified by (base, a, b).
/// Used to give every episode / trial / shuffle its own independent stream
/// so that execution order never affects results.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = base;
  std::uint64_t h = splitmix64(s);
  s = h ^ (a + 0x9e3779b97f4a7c15ULL);
  h = splitmix64(s);
  s = h ^ (b + 0xc2b2ae3d27d4eb4fULL);
  return splitmix64(s);
}

/// Seeded random source with hand-rolled distributions.
///
/// All sampling is defined purely in terms of raw engine draws, so a given
/// seed reproduces the same sequence on any standard-conforming platform
/// (std::*_distribution makes no such guarantee).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::uniform_int: n must be positive");
    const auto span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<int>(x % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Poisson sample. Knuth's product method for small rates; larger rates are
  /// split additively (sums of independent Poissons are Poisson).
  int poisson(double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("Rng::poisson: rate must be >= 0");
    int total = 0;
    while (lambda > 30.0) {
      total += poisson_knuth(30.0);
      lambda -= 30.0;
    }
    if (lambda > 0.0) total += poisson_knuth(lambda);
    return total;
  }

  /// Index sample from a probability vector via CDF inversion.
  /// Probabilities are assumed nonnegative and summing to ~1; any rounding
  /// slack falls onto the last category.
  int categorical(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("Rng::categorical: empty distribution");
    const double r = uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (r < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size() - 1);
  }

  /// Counts of `draws` independent categorical samples.
  std::vector<int> multinomial(std::span<const double> probs, int draws) {
    std::vector<int> counts(probs.size(), 0);
    for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(categorical(probs))];
    return counts;
  }

 private:
  int poisson_knuth(double lambda) {
    const double threshold = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > threshold);
    return k - 1;
  }

  std::mt19937_64 engine_;
};

}  // namespace fairpo
