#pragma once

#include <cstdint>

#include "ordwalk/ordinal.hpp"

namespace ordwalk {

// splitmix64; fixed algorithm so seeded runs are reproducible across platforms
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform-ish in [0, n); n >= 1
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  std::int64_t int_in(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
};

// some ordinal < b; spread over prefixes, coefficient drops and smaller tails
Ordinal rand_below(const Ordinal& b, Rng& g);

// random CNF value with every exponent < e (may be 0)
Ordinal rand_with_exponents_below(const Ordinal& e, Rng& g);

}  // namespace ordwalk
