#pragma once

// Seeded counter-based random streams.
//
// A stream is identified by a 64-bit key and produces
//   value(i) = mix64(key + (i + 1) * 0x9E3779B97F4A7C15),   i = 0, 1, 2, ...
// where mix64 is the SplitMix64 finalizer. This is exactly the SplitMix64
// sequence started at state `key`, so any value can be recomputed from
// (key, i) alone and the integer outputs are identical on every platform.
//
// Bounded integers use Lemire's multiply-shift with rejection; unit doubles
// take the top 53 bits. Gaussians use Box-Muller and go through libm, so
// they are reproducible per platform but not bit-stable across libms.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace embq {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Independent child seed for (seed, tag). Chain calls for multi-level
/// derivations, e.g. derive_seed(derive_seed(master, batch), trial).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed + (tag + 1) * kGoldenGamma);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGoldenGamma);
  }

  /// Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

  double next_gaussian();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// `k` distinct indices from [0, n), ascending, uniform without
/// replacement (selection sampling): walking i = 0..n-1, index i is kept
/// when rng.next_below(n - i) < (k - kept so far). Requires k <= n.
std::vector<std::size_t> select_indices(std::size_t n, std::size_t k, CounterRng& rng);

/// Fisher-Yates, drawing j = next_below(i + 1) for i = len-1 down to 1.
template <typename T>
void shuffle(std::span<T> items, CounterRng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace embq
