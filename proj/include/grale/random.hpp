#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace grale {

/// splitmix64 finalizer step.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Output number `stream` + 1 of the splitmix64 sequence seeded with `master`.
/// Repetition r uses derive_seed(master, r); a split seed s hands
/// derive_seed(s, 0) to users and derive_seed(s, 1) to items.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t state = master;
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= stream; ++i) out = splitmix64(state);
  return out;
}

using Engine = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection; portable across standard
/// libraries, unlike std::uniform_int_distribution.
inline std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t draw;
  do {
    draw = engine();
  } while (draw >= limit);
  return draw % bound;
}

/// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle(std::span<T> values, Engine& engine) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(engine, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace grale
