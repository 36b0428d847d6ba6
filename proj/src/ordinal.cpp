#include "ordwalk/ordinal.hpp"

#include <limits>

namespace ordwalk {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b)
    throw std::overflow_error("ordinal coefficient overflow");
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b)
    throw std::overflow_error("ordinal coefficient overflow");
  return a * b;
}

}  // namespace

Ordinal Ordinal::make(std::vector<Term> terms) {
  Ordinal x;
  x.terms_ = std::move(terms);
  return x;
}

Ordinal Ordinal::from_uint(std::uint64_t n) {
  if (n == 0) return {};
  return make({Term{Ordinal{}, n}});
}

Ordinal Ordinal::omega() { return omega_pow(from_uint(1)); }

Ordinal Ordinal::omega_pow(const Ordinal& exponent, std::uint64_t coeff) {
  if (coeff == 0) throw std::invalid_argument("omega_pow: zero coefficient");
  return make({Term{exponent, coeff}});
}

bool Ordinal::is_successor() const {
  return !terms_.empty() && terms_.back().exponent.is_zero();
}

bool Ordinal::is_limit() const {
  return !terms_.empty() && !terms_.back().exponent.is_zero();
}

std::optional<std::uint64_t> Ordinal::as_uint() const {
  if (terms_.empty()) return 0;
  if (terms_.size() == 1 && terms_[0].exponent.is_zero()) return terms_[0].coeff;
  return std::nullopt;
}

const Ordinal& Ordinal::exponent_at(std::size_t i) const { return terms_.at(i).exponent; }
std::uint64_t Ordinal::coeff_at(std::size_t i) const { return terms_.at(i).coeff; }

std::strong_ordering Ordinal::cmp(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = cmp(a.terms_[i].exponent, b.terms_[i].exponent);
    if (c != 0) return c;
    if (a.terms_[i].coeff != b.terms_[i].coeff)
      return a.terms_[i].coeff <=> b.terms_[i].coeff;
  }
  // equal prefix: the one with more terms is larger
  return a.terms_.size() <=> b.terms_.size();
}

Ordinal operator+(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& f = b.terms_[0].exponent;
  std::vector<Ordinal::Term> out;
  out.reserve(a.terms_.size() + b.terms_.size());
  for (const auto& t : a.terms_) {
    if (Ordinal::cmp(t.exponent, f) > 0)
      out.push_back(t);
    else
      break;
  }
  Ordinal::Term lead = b.terms_[0];
  if (out.size() < a.terms_.size() &&
      Ordinal::cmp(a.terms_[out.size()].exponent, f) == 0)
    lead.coeff = checked_add(lead.coeff, a.terms_[out.size()].coeff);
  out.push_back(lead);
  out.insert(out.end(), b.terms_.begin() + 1, b.terms_.end());
  return Ordinal::make(std::move(out));
}

Ordinal operator*(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Ordinal acc;
  for (const auto& t : b.terms_) {
    Ordinal part;
    if (t.exponent.is_zero()) {
      // a * n rescales only the leading coefficient
      std::vector<Ordinal::Term> p = a.terms_;
      p[0].coeff = checked_mul(p[0].coeff, t.coeff);
      part = Ordinal::make(std::move(p));
    } else {
      part = Ordinal::omega_pow(a.terms_[0].exponent + t.exponent, t.coeff);
    }
    acc = acc + part;
  }
  return acc;
}

Ordinal Ordinal::sub_left(const Ordinal& a, const Ordinal& b) {
  if (cmp(a, b) > 0) throw std::invalid_argument("sub_left: a > b");
  // first index where the term lists disagree
  std::size_t i = 0;
  while (i < a.terms_.size() && i < b.terms_.size() &&
         cmp(a.terms_[i].exponent, b.terms_[i].exponent) == 0 &&
         a.terms_[i].coeff == b.terms_[i].coeff)
    ++i;
  if (i == a.terms_.size()) {
    std::vector<Term> rest(b.terms_.begin() + i, b.terms_.end());
    return make(std::move(rest));
  }
  // a and b share the first i terms; a's term i is smaller than b's
  std::vector<Term> rest;
  if (cmp(a.terms_[i].exponent, b.terms_[i].exponent) == 0) {
    rest.push_back(Term{b.terms_[i].exponent, b.terms_[i].coeff - a.terms_[i].coeff});
    rest.insert(rest.end(), b.terms_.begin() + i + 1, b.terms_.end());
  } else {
    rest.insert(rest.end(), b.terms_.begin() + i, b.terms_.end());
  }
  return make(std::move(rest));
}

std::string Ordinal::render() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) out += '+';
    const Term& t = terms_[i];
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coeff);
      continue;
    }
    out += 'w';
    if (auto n = t.exponent.as_uint(); !(n && *n == 1)) {
      out += '^';
      if (n) {
        out += std::to_string(*n);
      } else if (t.coeff == 1 && t.exponent.terms_.size() == 1 &&
                 t.exponent.terms_[0].coeff == 1) {
        // right-assoc chain w^w^...; safe only when no '*c' follows to steal
        out += t.exponent.render();
      } else {
        out += '(' + t.exponent.render() + ')';
      }
    }
    if (t.coeff != 1) out += '*' + std::to_string(t.coeff);
  }
  return out;
}

std::uint64_t Ordinal::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (const auto& t : terms_) {
    mix(t.exponent.hash());
    mix(t.coeff);
  }
  return h;
}

namespace {

struct Parser {
  const std::string& s;
  std::size_t i = 0;
  int depth = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }

  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  std::uint64_t nat() {
    skip_ws();
    if (i >= s.size() || !isdigit(static_cast<unsigned char>(s[i])))
      throw ParseError("expected a number", i);
    std::uint64_t v = 0;
    while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) {
      if (v > (std::numeric_limits<std::uint64_t>::max() - 9) / 10)
        throw ParseError("number too large", i);
      v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
      ++i;
    }
    return v;
  }

  Ordinal expr() {
    Ordinal acc = term();
    while (eat('+')) acc = acc + term();
    return acc;
  }

  Ordinal term() {
    skip_ws();
    if (i >= s.size()) throw ParseError("expected a term", i);
    if (s[i] == 'w') {
      ++i;
      Ordinal exp = Ordinal::from_uint(1);
      if (eat('^')) exp = factor();
      std::uint64_t c = 1;
      if (eat('*')) {
        c = nat();
        if (c == 0) throw ParseError("zero coefficient", i);
      }
      return Ordinal::omega_pow(exp, c);
    }
    if (isdigit(static_cast<unsigned char>(s[i]))) return Ordinal::from_uint(nat());
    throw ParseError("unexpected character", i);
  }

  Ordinal factor() {
    if (++depth > 64) throw ParseError("exponent tower too deep", i);
    Ordinal r;
    if (eat('(')) {
      r = expr();
      if (!eat(')')) throw ParseError("missing ')'", i);
    } else {
      r = term();
    }
    --depth;
    return r;
  }
};

}  // namespace

Ordinal parse_ordinal(const std::string& text) {
  Parser p(text);
  Ordinal r = p.expr();
  p.skip_ws();
  if (p.i != text.size()) throw ParseError("trailing input", p.i);
  return r;
}

CofKind cof_kind(const Ordinal& x) {
  if (x.is_zero()) return CofKind::zero;
  return x.is_successor() ? CofKind::successor : CofKind::limit;
}

Ordinal pred(const Ordinal& x) {
  if (!x.is_successor()) throw std::invalid_argument("pred: not a successor");
  Ordinal acc;
  for (std::size_t i = 0; i + 1 < x.term_count(); ++i)
    acc = acc + Ordinal::omega_pow(x.exponent_at(i), x.coeff_at(i));
  std::uint64_t c = x.coeff_at(x.term_count() - 1);
  if (c > 1) acc = acc + Ordinal::from_uint(c - 1);
  return acc;
}

Ordinal fund_seq(const Ordinal& delta, std::uint64_t k) {
  if (!delta.is_limit()) throw std::invalid_argument("fund_seq: not a limit ordinal");
  const std::size_t last = delta.term_count() - 1;
  const Ordinal& e = delta.exponent_at(last);

  // delta = prefix + w^e, with prefix absorbing all but one copy of the last term
  Ordinal prefix;
  for (std::size_t i = 0; i < last; ++i)
    prefix = prefix + Ordinal::omega_pow(delta.exponent_at(i), delta.coeff_at(i));
  if (delta.coeff_at(last) > 1)
    prefix = prefix + Ordinal::omega_pow(e, delta.coeff_at(last) - 1);

  if (e.is_successor()) {
    Ordinal e1 = pred(e);
    // (prefix + w^(e1+1))[k] = prefix + w^e1 * k
    if (k == 0) return prefix;
    Ordinal step = e1.is_zero() ? Ordinal::from_uint(k) : Ordinal::omega_pow(e1, k);
    return prefix + step;
  }
  return prefix + Ordinal::omega_pow(fund_seq(e, k));
}

}  // namespace ordwalk
