#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace slf {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is pinned by the C++ standard, and every value transform below is
// spelled out by hand because the standard library distributions are
// implementation-defined. Same seed, same stream, on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1), 53 mantissa bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; consumes two draws, no caching so copies
  // of the engine state stay value-like.
  double normal();

  // Poisson by Knuth's product-of-uniforms inversion; adequate for the small
  // daily rates used by the synthesizer.
  int poisson(double lambda);

  // Uniform integer in [0, n), rejection sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 eng_;
};

// FNV-1a, used to derive stable per-name child seeds.
std::uint64_t fnv1a64(std::string_view s);

// SplitMix64 finalizer; mixes a master seed with a name hash or index.
std::uint64_t splitmix64(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  return splitmix64(master ^ fnv1a64(name));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + 0x9e3779b97f4a7c15ull * (index + 1));
}

// Fisher-Yates with the explicit generator.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace slf
