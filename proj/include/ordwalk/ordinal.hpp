#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ordwalk {

// Exact ordinal below epsilon_0, kept in Cantor normal form:
//   w^e0*c0 + w^e1*c1 + ... with e0 > e1 > ... and every ci >= 1.
// The empty term list is 0. Values are immutable after construction.
class Ordinal {
 public:
  struct Term;

  Ordinal() = default;
  static Ordinal from_uint(std::uint64_t n);
  static Ordinal omega();
  // w^exponent * coeff (coeff >= 1)
  static Ordinal omega_pow(const Ordinal& exponent, std::uint64_t coeff = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_successor() const;
  bool is_limit() const;
  // the natural n if this < w
  std::optional<std::uint64_t> as_uint() const;

  std::strong_ordering operator<=>(const Ordinal& o) const { return cmp(*this, o); }
  bool operator==(const Ordinal& o) const { return cmp(*this, o) == 0; }

  static std::strong_ordering cmp(const Ordinal& a, const Ordinal& b);
  friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
  friend Ordinal operator*(const Ordinal& a, const Ordinal& b);

  // for a <= b, the unique c with a + c = b
  static Ordinal sub_left(const Ordinal& a, const Ordinal& b);

  std::size_t term_count() const { return terms_.size(); }
  const Ordinal& exponent_at(std::size_t i) const;
  std::uint64_t coeff_at(std::size_t i) const;

  std::string render() const;
  std::uint64_t hash() const;

  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
  static Ordinal make(std::vector<Term> terms);
};

struct Ordinal::Term {
  Ordinal exponent;
  std::uint64_t coeff = 1;
};

struct ParseError : std::runtime_error {
  std::size_t pos;
  ParseError(const std::string& msg, std::size_t at)
      : std::runtime_error(msg + " at position " + std::to_string(at)), pos(at) {}
};

// Grammar:
//   expr   := term ('+' term)*
//   term   := 'w' ('^' factor)? ('*' nat)? | nat
//   factor := '(' expr ')' | term
// Non-canonical sums normalize (e.g. "1+w" is w). Nesting deeper than 64 is rejected.
Ordinal parse_ordinal(const std::string& text);

enum class CofKind { zero, successor, limit };
CofKind cof_kind(const Ordinal& x);

// Canonical fundamental sequence (Wainer-style), 0-indexed:
//   (a + w^(b+1))[k] = a + w^b * k,   (a + w^l)[k] = a + w^(l[k]) for l limit.
// Requires a limit argument.
Ordinal fund_seq(const Ordinal& delta, std::uint64_t k);

// x - 1; requires a successor
Ordinal pred(const Ordinal& x);

inline std::string to_string(const Ordinal& x) { return x.render(); }

}  // namespace ordwalk
