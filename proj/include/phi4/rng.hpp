#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace phi4 {

/// Stream splitting: mixes a base seed with a stream id so that distinct
/// chains get decorrelated generators. splitmix64 finalizer.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Seeded Gaussian generator. Box-Muller on top of mt19937_64 keeps the
/// stream identical across platforms (std::normal_distribution does not
/// guarantee that).
class GaussianRng {
public:
  explicit GaussianRng(std::uint64_t seed, std::uint64_t stream = 0)
      : eng_(split_seed(seed, stream)) {}

  double uniform() {
    // in (0,1], never 0, so log() below is safe
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t raw() { return eng_(); }

private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace phi4
