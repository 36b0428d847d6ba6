#include "ordwalk/rng.hpp"

namespace ordwalk {

Ordinal rand_with_exponents_below(const Ordinal& e, Rng& g) {
  if (e.is_zero()) return {};
  Ordinal acc;
  Ordinal cur = e;
  int terms = 1 + static_cast<int>(g.below(2));
  for (int t = 0; t < terms; ++t) {
    if (cur.is_zero()) break;
    Ordinal ex = rand_below(cur, g);
    acc = acc + Ordinal::omega_pow(ex, 1 + g.below(3));
    if (ex.is_zero()) break;
    cur = ex;
  }
  return acc;
}

Ordinal rand_below(const Ordinal& b, Rng& g) {
  if (b.is_zero()) throw std::invalid_argument("rand_below: empty range");
  if (auto n = b.as_uint()) return Ordinal::from_uint(g.below(*n));

  std::size_t j = g.below(b.term_count());
  Ordinal prefix;
  for (std::size_t i = 0; i < j; ++i)
    prefix = prefix + Ordinal::omega_pow(b.exponent_at(i), b.coeff_at(i));
  const Ordinal& ej = b.exponent_at(j);
  std::uint64_t cj = b.coeff_at(j);

  switch (g.below(3)) {
    case 0:
      return prefix;
    case 1:
      if (cj > 1) {
        std::uint64_t c = 1 + g.below(cj - 1);
        return prefix + Ordinal::omega_pow(ej, c) + rand_with_exponents_below(ej, g);
      }
      [[fallthrough]];
    default:
      return prefix + rand_with_exponents_below(ej, g);
  }
}

}  // namespace ordwalk
