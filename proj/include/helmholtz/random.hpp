// Portable random streams.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not, so uniform and normal
// variates are derived here from raw 64-bit words.

#ifndef HELMHOLTZ_RANDOM_HPP
#define HELMHOLTZ_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace helmholtz {

inline constexpr std::string_view kRngAlgorithm = "mt19937_64";

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for an independent stream: (base seed, stream tag, index) -> seed.
/// Trials use index = trial number, so parallel or reordered execution draws
/// the same numbers.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index = 0) {
  return mix64(mix64(mix64(seed) ^ stream) ^ index);
}

/// Stream tags used across the library.
namespace stream {
inline constexpr std::uint64_t kSampling = 0x53414d50;   // "SAMP"
inline constexpr std::uint64_t kTruth = 0x54525554;      // "TRUT"
inline constexpr std::uint64_t kNoise = 0x4e4f4953;      // "NOIS"
inline constexpr std::uint64_t kSplit = 0x53504c54;      // "SPLT"
}  // namespace stream

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t index(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Fisher-Yates shuffle of a random-access range.
  template <typename Range>
  void shuffle(Range& range) {
    using std::swap;
    const auto n = static_cast<std::uint64_t>(std::size(range));
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = index(i);
      swap(range[i - 1], range[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace helmholtz

#endif  // HELMHOLTZ_RANDOM_HPP
