#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace riskml {

using Rng = std::mt19937_64;

/// Mixes (master, stream) into an independent sub-seed with the SplitMix64 finalizer.
/// Each consumer of randomness owns a stream id, so draws never depend on the order
/// in which trees, folds or cells are processed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_seed(master, stream));
}

/// Stream ids. Per-item streams add the item index to the base.
namespace stream {
inline constexpr std::uint64_t kGenerator = 1;
inline constexpr std::uint64_t kSplit = 2;
inline constexpr std::uint64_t kFolds = 3;
inline constexpr std::uint64_t kOrderedPermutation = 4;
inline constexpr std::uint64_t kMlpInit = 5;
inline constexpr std::uint64_t kMlpShuffle = 6;
inline constexpr std::uint64_t kPredictProbe = 7;
inline constexpr std::uint64_t kForestTreeBase = 1'000;
inline constexpr std::uint64_t kFoldModelBase = 100'000;
inline constexpr std::uint64_t kVotingMemberBase = 200'000;
}  // namespace stream

/// Uniform integer in [0, bound) by modulo with rejection; portable across standard
/// libraries, unlike std::uniform_int_distribution.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal draw (Box-Muller, one variate per call).
inline double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform_unit(rng);  // (0, 1]
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

template <typename T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace riskml
