#include "embq/random.hpp"

#include <cmath>
#include <numbers>

namespace embq {

__extension__ typedef unsigned __int128 u128;

std::uint64_t CounterRng::next_below(std::uint64_t bound) {
  std::uint64_t x = next_u64();
  u128 m = static_cast<u128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<u128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::vector<std::size_t> select_indices(std::size_t n, std::size_t k, CounterRng& rng) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::size_t needed = k;
  for (std::size_t i = 0; i < n && needed > 0; ++i) {
    if (rng.next_below(n - i) < needed) {
      out.push_back(i);
      --needed;
    }
  }
  return out;
}

double CounterRng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - next_unit();  // (0, 1]
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace embq
