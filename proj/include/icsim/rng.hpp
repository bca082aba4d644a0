#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace icsim::rng {

/// splitmix64 step; used only to derive independent child seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic child seed for (trial, slice) sub-streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = seed;
  std::uint64_t z = splitmix64(s);
  s ^= z + a * 0x9e3779b97f4a7c15ULL;
  z = splitmix64(s);
  s ^= z + b * 0xc2b2ae3d27d4eb4fULL;
  return splitmix64(s);
}

/// mt19937_64 with fully specified variate transforms, so identical seeds
/// give bit-identical streams on any platform.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Exponential with the given rate; rate <= 0 yields +inf (empty stream).
  double exponential(double rate) {
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log1p(-uniform()) / rate;
  }

  /// Box-Muller; caches the second variate.
  double normal(double sigma) {
    if (has_cached_) {
      has_cached_ = false;
      return cached_ * sigma;
    }
    const double u1 = 1.0 - uniform();  // in (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle) * sigma;
  }

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace icsim::rng
