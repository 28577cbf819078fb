#ifndef MIDRANK_RNG_HPP_
#define MIDRANK_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace midrank {

// Every random decision in the library draws from an mt19937_64 seeded
// through derive_seed(), so one root seed fans out into independent,
// reproducible sub-streams ("sampling", "scramble", "sdca", "restarts", ...).

std::uint64_t splitmix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(std::uint64_t root, std::string_view stream) noexcept;
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept;

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed ^ 0x9e3779b97f4a7c15ULL));
}

/// Uniform integer in [0, bound), bound >= 1.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// In-place Fisher-Yates shuffle with an explicit generator.
template <typename T>
void shuffle_in_place(std::vector<T>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace midrank

#endif  // MIDRANK_RNG_HPP_
