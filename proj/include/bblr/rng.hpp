#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace bblr {

// Unbiased integer in [0, n) by rejection. uniform_int_distribution is
// implementation-defined, so splits and noise masks go through this to
// stay reproducible for a recorded seed.
inline std::uint64_t bounded_rand(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

template <class T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& gen) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[bounded_rand(gen, i)]);
}

}  // namespace bblr
