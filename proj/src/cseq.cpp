#include "ordwalk/cseq.hpp"

#include <algorithm>
#include <cassert>

namespace ordwalk {

namespace {

const Ordinal kZero;
const Ordinal kOne = Ordinal::from_uint(1);

Ordinal omega() { return Ordinal::omega(); }

// terms of x with exponent >= r, as an ordinal (the "w^r-aligned head")
Ordinal head_at_exponent(const Ordinal& x, std::uint64_t r) {
  Ordinal h;
  for (std::size_t i = 0; i < x.term_count(); ++i) {
    auto e = x.exponent_at(i).as_uint();
    if (e && *e < r) break;
    h = h + Ordinal::omega_pow(x.exponent_at(i), x.coeff_at(i));
  }
  return h;
}

std::uint64_t coeff_of_exponent(const Ordinal& x, std::uint64_t r) {
  for (std::size_t i = 0; i < x.term_count(); ++i) {
    auto e = x.exponent_at(i).as_uint();
    if (e && *e == r) return x.coeff_at(i);
  }
  return 0;
}

}  // namespace

// ---------------------------------------------------------------- ClosedSet

Ordinal ClosedSet::Gen::at(std::uint64_t k) const {
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= k) cache.push_back(raw(cache.size()));
  return cache[k];
}

Ordinal ClosedSet::Block::first() const {
  return infinite() ? gen->at(0) : pts.front();
}

ClosedSet ClosedSet::empty() { return {}; }

ClosedSet ClosedSet::points(std::vector<Ordinal> pts) {
  if (pts.empty()) return {};
  Block b;
  b.pts = std::move(pts);
  for (std::size_t i = 0; i + 1 < b.pts.size(); ++i)
    if (!(b.pts[i] < b.pts[i + 1]))
      throw std::invalid_argument("ClosedSet::points: not strictly ascending");
  ClosedSet s;
  s.blocks_.push_back(std::move(b));
  return s;
}

ClosedSet ClosedSet::tail(std::function<Ordinal(std::uint64_t)> gen, Ordinal sup,
                          std::string tag) {
  Block b;
  b.gen = std::make_shared<Gen>();
  b.gen->raw = std::move(gen);
  b.gsup = std::move(sup);
  b.tag = std::move(tag);
  ClosedSet s;
  s.blocks_.push_back(std::move(b));
  return s;
}

ClosedSet ClosedSet::compose(std::vector<Block> blocks) {
  for (std::size_t i = 0; i + 1 < blocks.size(); ++i) {
    const Block& a = blocks[i];
    const Block& b = blocks[i + 1];
    if (a.infinite()) {
      if (!(b.first() == a.gsup))
        throw std::invalid_argument("ClosedSet::compose: gap after an infinite block");
    } else if (!(a.pts.back() < b.first())) {
      throw std::invalid_argument("ClosedSet::compose: blocks out of order");
    }
  }
  ClosedSet s;
  s.blocks_ = std::move(blocks);
  return s;
}

Ordinal ClosedSet::sup() const {
  if (blocks_.empty()) return kZero;
  const Block& b = blocks_.back();
  return b.infinite() ? b.gsup : b.pts.back();
}

namespace {

// count of block elements strictly below beta; nullopt when infinite
std::optional<std::uint64_t> blk_count_below(const ClosedSet::Block& b,
                                             const Ordinal& beta) {
  if (!b.infinite()) {
    std::uint64_t n = 0;
    for (const auto& p : b.pts)
      if (p < beta)
        ++n;
      else
        break;
    return n;
  }
  if (b.gsup <= beta) return std::nullopt;
  // exponential + binary search for the least k with gen(k) >= beta
  if (b.gen->at(0) >= beta) return 0;
  std::uint64_t hi = 1;
  while (b.gen->at(hi) < beta) hi *= 2;
  std::uint64_t lo = hi / 2;
  while (lo + 1 < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    (b.gen->at(mid) < beta ? lo : hi) = mid;
  }
  return hi;
}

std::optional<Ordinal> blk_min_at_least(const ClosedSet::Block& b,
                                        const Ordinal& beta) {
  if (!b.infinite()) {
    for (const auto& p : b.pts)
      if (p >= beta) return p;
    return std::nullopt;
  }
  if (beta >= b.gsup) return std::nullopt;
  auto k = blk_count_below(b, beta);
  return b.gen->at(*k);
}

bool blk_contains(const ClosedSet::Block& b, const Ordinal& x) {
  auto m = blk_min_at_least(b, x);
  return m && *m == x;
}

}  // namespace

bool ClosedSet::contains(const Ordinal& x) const {
  for (const auto& b : blocks_)
    if (blk_contains(b, x)) return true;
  return false;
}

std::optional<Ordinal> ClosedSet::min_at_least(const Ordinal& beta) const {
  for (const auto& b : blocks_)
    if (auto m = blk_min_at_least(b, beta)) return m;
  return std::nullopt;
}

Ordinal ClosedSet::otp_below(const Ordinal& beta) const {
  Ordinal acc;
  for (const auto& b : blocks_) {
    auto c = blk_count_below(b, beta);
    if (!c) {
      acc = acc + omega();
      continue;
    }
    acc = acc + Ordinal::from_uint(*c);
    if (!b.infinite() && *c == b.pts.size()) continue;
    break;  // this block straddles beta
  }
  return acc;
}

Ordinal ClosedSet::otp() const {
  Ordinal acc;
  for (const auto& b : blocks_)
    acc = acc + (b.infinite() ? omega() : Ordinal::from_uint(b.pts.size()));
  return acc;
}

Ordinal ClosedSet::sup_below(const Ordinal& beta) const {
  for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
    auto c = blk_count_below(*it, beta);
    if (!c) return it->gsup <= beta ? it->gsup : beta;  // gsup < beta impossible here
    if (*c == 0) continue;
    if (it->infinite()) {
      // finitely many below beta, so the largest is attained
      return it->gen->at(*c - 1);
    }
    return it->pts[*c - 1];
  }
  return kZero;
}

std::vector<Ordinal> ClosedSet::enumerate_below(const Ordinal& beta) const {
  std::vector<Ordinal> out;
  for (const auto& b : blocks_) {
    auto c = blk_count_below(b, beta);
    if (!c) throw QueryError("enumerate_below: infinite intersection");
    for (std::uint64_t k = 0; k < *c; ++k)
      out.push_back(b.infinite() ? b.gen->at(k) : b.pts[k]);
  }
  return out;
}

bool ClosedSet::isolated_at(const Ordinal& x) const {
  return contains(x) && sup_below(x) != x;
}

std::vector<Ordinal> ClosedSet::last_below(const Ordinal& beta, std::size_t n) const {
  std::vector<Ordinal> rev;
  for (auto it = blocks_.rbegin(); it != blocks_.rend() && rev.size() < n; ++it) {
    auto c = blk_count_below(*it, beta);
    if (!c) throw QueryError("last_below: set accumulates below beta");
    std::uint64_t k = *c;
    while (k > 0 && rev.size() < n) {
      --k;
      rev.push_back(it->infinite() ? it->gen->at(k) : it->pts[k]);
    }
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

std::optional<std::string> ClosedSet::approach_tag(const Ordinal& delta) const {
  for (const auto& b : blocks_)
    if (b.infinite() && b.gsup == delta) return b.tag;
  return std::nullopt;
}

std::optional<Ordinal> ClosedSet::approach_start(const Ordinal& delta) const {
  for (const auto& b : blocks_)
    if (b.infinite() && b.gsup == delta) return b.gen->at(0);
  return std::nullopt;
}

std::uint64_t ClosedSet::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (const auto& b : blocks_) {
    if (b.infinite()) {
      mix(0x7a11);
      for (char c : b.tag) mix(static_cast<std::uint64_t>(c));
      mix(b.gsup.hash());
      mix(b.gen->at(0).hash());
    } else {
      mix(0xf1);
      for (const auto& p : b.pts) mix(p.hash());
    }
  }
  return h;
}

// ---------------------------------------------------------------- OrdSets

namespace {

class MultiplesSet final : public OrdSet {
 public:
  MultiplesSet(std::uint64_t r, Ordinal bound) : r_(r), bound_(std::move(bound)) {}

  bool contains(const Ordinal& x) const override {
    if (x.is_zero() || !(x < bound_)) return false;
    auto e = x.exponent_at(x.term_count() - 1).as_uint();
    return !e || *e >= r_;
  }

  std::optional<Ordinal> min_at_least(const Ordinal& x) const override {
    Ordinal cand;
    if (x.is_zero()) {
      cand = Ordinal::omega_pow(Ordinal::from_uint(r_));
    } else {
      Ordinal h = head_at_exponent(x, r_);
      cand = (h == x) ? x : h + Ordinal::omega_pow(Ordinal::from_uint(r_));
    }
    if (!(cand < bound_)) return std::nullopt;
    return cand;
  }

  std::optional<Ordinal> acc_min_at_least(const Ordinal& x) const override {
    return MultiplesSet(r_ + 1, bound_).min_at_least(x);
  }

  Ordinal sup_below(const Ordinal& x) const override {
    if (x.is_zero()) return {};
    Ordinal h = head_at_exponent(x, r_);
    if (!(h == x)) return h;  // largest multiple <= x, possibly 0
    // x itself is a multiple: either an accumulation point or step one back
    if (MultiplesSet(r_ + 1, bound_).contains(x) || x == bound_) {
      auto e = x.exponent_at(x.term_count() - 1).as_uint();
      if (!e || *e > r_) return x;
    }
    Ordinal acc;
    for (std::size_t i = 0; i + 1 < x.term_count(); ++i)
      acc = acc + Ordinal::omega_pow(x.exponent_at(i), x.coeff_at(i));
    std::uint64_t c = x.coeff_at(x.term_count() - 1);
    if (c > 1)
      acc = acc + Ordinal::omega_pow(x.exponent_at(x.term_count() - 1), c - 1);
    return acc;
  }

  std::string tag() const override { return "multiples:w^" + std::to_string(r_); }

  std::uint64_t r_;
  Ordinal bound_;
};

class ResidueSet final : public OrdSet {
 public:
  ResidueSet(std::uint64_t s, std::uint64_t m, Ordinal bound)
      : s_(s % m), m_(m), bound_(std::move(bound)) {
    if (m < 2) throw std::invalid_argument("ResidueSet: modulus < 2");
  }

  bool contains(const Ordinal& x) const override {
    if (x.is_zero() || !(x < bound_)) return false;
    auto e = x.exponent_at(x.term_count() - 1).as_uint();
    if (!e || *e != 1) return false;
    return x.coeff_at(x.term_count() - 1) % m_ == s_;
  }

  std::optional<Ordinal> min_at_least(const Ordinal& x) const override {
    Ordinal h = head_at_exponent(x, 2);
    std::uint64_t c = coeff_of_exponent(x, 1);
    std::uint64_t n = coeff_of_exponent(x, 0);
    std::uint64_t c0 = c + (n > 0 ? 1 : 0);
    if (c0 == 0) c0 = 1;
    std::uint64_t cc = c0 + ((s_ + m_ - c0 % m_) % m_);
    if (cc == 0) cc = m_;  // coeff must be >= 1
    Ordinal cand = h + Ordinal::omega_pow(kOne, cc);
    if (cand < bound_) return cand;
    // roll over to the next w^2 head
    Ordinal h2 = h + Ordinal::omega_pow(Ordinal::from_uint(2));
    std::uint64_t c2 = s_ == 0 ? m_ : s_;
    cand = h2 + Ordinal::omega_pow(kOne, c2);
    if (cand < bound_) return cand;
    return std::nullopt;
  }

  std::optional<Ordinal> acc_min_at_least(const Ordinal& x) const override {
    // members H + w*c accumulate exactly at the positive multiples of w^2
    return MultiplesSet(2, bound_).min_at_least(x);
  }

  Ordinal sup_below(const Ordinal& x) const override {
    if (x.is_zero()) return {};
    Ordinal h = head_at_exponent(x, 2);
    std::uint64_t c = coeff_of_exponent(x, 1);
    std::uint64_t n = coeff_of_exponent(x, 0);
    std::uint64_t cap = n > 0 ? c : (c == 0 ? 0 : c - 1);
    // largest coefficient <= cap congruent to s_, at least 1
    if (cap >= 1) {
      std::uint64_t cc = cap - ((cap + m_ - s_) % m_);
      if (cc >= 1 && cc <= cap) return h + Ordinal::omega_pow(kOne, cc);
    }
    // nothing with this head: the members below approach the head itself
    return h;
  }

  std::string tag() const override {
    return "wcoeff:" + std::to_string(s_) + "mod" + std::to_string(m_);
  }

  std::uint64_t s_, m_;
  Ordinal bound_;
};

}  // namespace

std::shared_ptr<OrdSet> multiples_of_omega_pow(std::uint64_t r, Ordinal bound) {
  return std::make_shared<MultiplesSet>(r, std::move(bound));
}

std::shared_ptr<OrdSet> omega_coeff_residues(std::uint64_t residue, std::uint64_t m,
                                             Ordinal bound) {
  return std::make_shared<ResidueSet>(residue, m, std::move(bound));
}

// ---------------------------------------------------------------- providers

std::vector<Ordinal> CSeqProvider::special_indices_in(const Ordinal&,
                                                      const Ordinal&) const {
  return {};
}

std::uint64_t CSeqProvider::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : id()) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ull;
  }
  return h ^ bound().hash();
}

namespace {

class CanonicalProvider final : public CSeqProvider {
 public:
  CanonicalProvider(Ordinal bound, std::vector<std::uint64_t> padding)
      : bound_(std::move(bound)), padding_(std::move(padding)) {
    std::sort(padding_.begin(), padding_.end());
    padding_.erase(std::unique(padding_.begin(), padding_.end()), padding_.end());
  }

  const Ordinal& bound() const override { return bound_; }

  ClosedSet c_at(const Ordinal& delta) const override {
    if (bound_ < delta) throw QueryError("index above provider bound");
    if (delta.is_zero()) return ClosedSet::empty();
    if (delta.is_successor()) {
      Ordinal g = pred(delta);
      std::vector<Ordinal> pts;
      if (g.is_limit())
        for (std::uint64_t f : padding_) pts.push_back(Ordinal::from_uint(f));
      pts.push_back(g);
      return ClosedSet::points(std::move(pts));
    }
    Ordinal d = delta;
    return ClosedSet::tail([d](std::uint64_t k) { return fund_seq(d, k); }, delta,
                           "canon:" + delta.render());
  }

  std::string id() const override {
    std::string s = "canonical[" + bound_.render() + "]";
    if (!padding_.empty()) {
      s += "+pad{";
      for (std::uint64_t f : padding_) s += std::to_string(f) + ",";
      s += "}";
    }
    return s;
  }

 private:
  Ordinal bound_;
  std::vector<std::uint64_t> padding_;
};

class FileProvider final : public CSeqProvider {
 public:
  FileProvider(Ordinal bound, std::map<Ordinal, std::vector<Ordinal>> entries)
      : bound_(std::move(bound)), entries_(std::move(entries)) {
    for (const auto& [idx, pts] : entries_) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(pts[i] < idx))
          throw std::invalid_argument("file entry exceeds its index");
        if (i && !(pts[i - 1] < pts[i]))
          throw std::invalid_argument("file entry not strictly ascending");
      }
      if (idx.is_successor()) {
        Ordinal g = pred(idx);
        if (pts.empty() || !(pts.back() == g))
          throw std::invalid_argument("successor entry must end at its predecessor");
      }
    }
  }

  const Ordinal& bound() const override { return bound_; }

  ClosedSet c_at(const Ordinal& delta) const override {
    if (bound_ < delta) throw QueryError("index above provider bound");
    if (delta.is_zero()) return ClosedSet::empty();
    auto it = entries_.find(delta);
    if (it == entries_.end()) throw QueryError("unspecified index");
    const auto& pts = it->second;
    if (delta.is_successor()) return ClosedSet::points(pts);
    // canonical ladder continues strictly above the listed prefix
    Ordinal lo = pts.empty() ? kZero : pts.back();
    Ordinal d = delta;
    std::uint64_t k0 = 0;
    while (fund_seq(d, k0) <= lo) ++k0;
    std::vector<ClosedSet::Block> blocks;
    if (!pts.empty()) {
      ClosedSet::Block head;
      head.pts = pts;
      blocks.push_back(std::move(head));
    }
    ClosedSet t = ClosedSet::tail(
        [d, k0](std::uint64_t k) { return fund_seq(d, k0 + k); }, delta,
        "canon-above:" + delta.render() + "@" + lo.render());
    blocks.push_back(t.blocks()[0]);
    return ClosedSet::compose(std::move(blocks));
  }

  std::string id() const override {
    std::string s = "file[" + bound_.render() + "]";
    for (const auto& [idx, pts] : entries_) {
      s += idx.render() + ":";
      for (const auto& p : pts) s += p.render() + ",";
      s += ";";
    }
    return s;
  }

 private:
  Ordinal bound_;
  std::map<Ordinal, std::vector<Ordinal>> entries_;
};

class OverlayProvider final : public CSeqProvider {
 public:
  OverlayProvider(ProviderPtr base, std::map<Ordinal, ClosedSet> entries,
                  std::vector<Ordinal> special)
      : base_(std::move(base)), entries_(std::move(entries)),
        special_(std::move(special)) {}

  const Ordinal& bound() const override { return base_->bound(); }

  ClosedSet c_at(const Ordinal& delta) const override {
    auto it = entries_.find(delta);
    return it == entries_.end() ? base_->c_at(delta) : it->second;
  }

  std::string id() const override {
    std::string s = "overlay(" + base_->id() + ")[";
    for (const auto& [idx, cs] : entries_)
      s += idx.render() + "#" + std::to_string(cs.hash()) + ";";
    return s + "]";
  }

  std::vector<Ordinal> special_indices_in(const Ordinal& lo,
                                          const Ordinal& hi) const override {
    std::vector<Ordinal> out = base_->special_indices_in(lo, hi);
    for (const auto& a : special_)
      if (lo < a && a <= hi) out.push_back(a);
    return out;
  }

 private:
  ProviderPtr base_;
  std::map<Ordinal, ClosedSet> entries_;
  std::vector<Ordinal> special_;
};

}  // namespace

ProviderPtr canonical_provider(Ordinal bound, std::vector<std::uint64_t> padding) {
  return std::make_shared<CanonicalProvider>(std::move(bound), std::move(padding));
}

ProviderPtr file_provider(Ordinal bound,
                          std::map<Ordinal, std::vector<Ordinal>> entries) {
  return std::make_shared<FileProvider>(std::move(bound), std::move(entries));
}

ProviderPtr overlay_provider(ProviderPtr base, std::map<Ordinal, ClosedSet> entries,
                             std::vector<Ordinal> special) {
  return std::make_shared<OverlayProvider>(std::move(base), std::move(entries),
                                           std::move(special));
}

// ------------------------------------------------------- characteristics

namespace {

// do two delta-approaching tails coincide on a final segment below delta?
// exact when the tags match; otherwise decided on a 256-rung probe
struct TailCompare {
  bool equal = false;
  bool probed = false;
  Ordinal eps;
};

TailCompare compare_tails(const ClosedSet& cd, const ClosedSet& ca,
                          const Ordinal& delta) {
  TailCompare r;
  auto tag_d = cd.approach_tag(delta);
  auto tag_a = ca.approach_tag(delta);
  if (!tag_d || !tag_a) return r;
  Ordinal sd = *cd.approach_start(delta), sa = *ca.approach_start(delta);
  if (*tag_d == *tag_a) {
    r.equal = true;
    r.eps = std::max(sd, sa);
    return r;
  }
  r.probed = true;
  // align both rung streams above a common base and look for agreement on
  // the upper half of the probed horizon
  Ordinal base = std::max(sd, sa);
  auto stream = [&](const ClosedSet& s) {
    std::vector<Ordinal> v;
    Ordinal cur = base;
    for (int i = 0; i < 256; ++i) {
      auto m = s.min_at_least(cur);
      if (!m || !(*m < delta)) break;
      v.push_back(*m);
      cur = *m + kOne;
    }
    return v;
  };
  std::vector<Ordinal> vd = stream(cd), va = stream(ca);
  std::size_t n = std::min(vd.size(), va.size());
  if (n < 16) return r;
  std::size_t from = n / 2;
  for (std::size_t i = 0; i < n - from; ++i)
    if (!(vd[vd.size() - 1 - i] == va[va.size() - 1 - i])) return r;
  r.equal = true;
  r.eps = vd[vd.size() - (n - from)];
  return r;
}

}  // namespace

CharacteristicReport characteristics_window(const CSeqProvider& p,
                                            const Ordinal& delta, const Ordinal& hi) {
  if (!delta.is_limit()) throw std::invalid_argument("characteristics: delta not a limit");
  if (!(delta < hi) || p.bound() < hi)
    throw std::invalid_argument("characteristics: window must satisfy delta < hi <= bound");

  CharacteristicReport rep;
  rep.delta = delta;
  rep.hi = hi;

  ClosedSet cd = p.c_at(delta);
  Ordinal w = omega();

  // R' also constrains delta's own ladder
  if (!(cd.otp() < delta)) {
    rep.R1 = false;
    rep.witnesses.push_back({"R'", delta, std::nullopt});
  }

  for (const Ordinal& alpha : p.special_indices_in(delta, hi)) {
    if (!(delta < alpha) || hi < alpha) continue;
    ClosedSet ca = p.c_at(alpha);
    Ordinal otp = ca.otp_below(delta);

    bool in_acc = ca.contains(delta) && ca.sup_below(delta) == delta;
    if (in_acc && rep.A) {
      rep.A = false;
      rep.witnesses.push_back({"A", alpha, std::nullopt});
    }
    if (!(otp < w) && rep.A1) {
      rep.A1 = false;
      rep.witnesses.push_back({"A'", alpha, std::nullopt});
    }
    if (!(otp < delta)) {
      if (rep.R) {
        rep.R = false;
        rep.witnesses.push_back({"R", alpha, std::nullopt});
      }
      if (rep.R1) {
        rep.R1 = false;
        rep.witnesses.push_back({"R'", alpha, std::nullopt});
      }
    }

    TailCompare tc = compare_tails(cd, ca, delta);
    if (tc.probed) rep.probed_alphas.push_back(alpha);
    if (tc.equal) {
      if (rep.V) {
        rep.V = false;
        rep.witnesses.push_back({"V", alpha, tc.eps});
      }
      if (rep.V1) {
        rep.V1 = false;
        rep.witnesses.push_back({"V'", alpha, tc.eps});
      }
    }
  }

  // R' depends on R
  if (!rep.R) rep.R1 = false;
  return rep;
}

CQueryResult cseq_query(const CSeqProvider& p, const Ordinal& delta, CQuery q,
                        const Ordinal& arg) {
  ClosedSet c = p.c_at(delta);
  CQueryResult r;
  switch (q) {
    case CQuery::min_above: {
      if (c.is_empty()) throw QueryError("empty-C-sequence");
      r.ord = c.min_at_least(arg);
      if (!r.ord) throw QueryError("no element at or above the given ordinal");
      return r;
    }
    case CQuery::otp_below:
      r.ord = c.otp_below(arg);
      return r;
    case CQuery::kth: {
      auto k = arg.as_uint();
      if (!k) throw QueryError("kth: index must be a natural");
      Ordinal cur;
      for (std::uint64_t i = 0;; ++i) {
        auto m = c.min_at_least(i == 0 ? kZero : cur + kOne);
        if (!m) throw QueryError("kth: set exhausted");
        cur = *m;
        if (i == *k) break;
      }
      r.ord = cur;
      return r;
    }
    case CQuery::enumerate_below:
      r.list = c.enumerate_below(arg);
      return r;
  }
  throw std::logic_error("unreachable");
}

// ------------------------------------------------------- ladder transform

namespace {

class TransformedProvider final : public CSeqProvider {
 public:
  TransformedProvider(ProviderPtr base, std::vector<std::shared_ptr<OrdSet>> parts,
                      std::shared_ptr<OrdSet> club)
      : base_(std::move(base)), parts_(std::move(parts)), club_(std::move(club)) {}

  const Ordinal& bound() const override { return base_->bound(); }

  ClosedSet c_at(const Ordinal& delta) const override {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = memo_.find(delta); it != memo_.end()) return it->second;
    }
    ClosedSet r = build(delta);
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(delta, r);
    return r;
  }

  std::string id() const override {
    std::string s = "transformed(" + base_->id() + ";" + club_->tag() + ";";
    for (const auto& z : parts_) s += z->tag() + ",";
    return s + ")";
  }

  std::vector<Ordinal> special_indices_in(const Ordinal& lo,
                                          const Ordinal& hi) const override {
    return base_->special_indices_in(lo, hi);
  }

 private:
  ClosedSet build(const Ordinal& delta) const {
    bool in_acc_club = delta.is_limit() && club_->contains(delta) && club_acc(delta);
    if (in_acc_club) return mapped_ladder(delta);
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i]->contains(delta)) return padded(delta, i);
    }
    return base_->c_at(delta);
  }

  bool club_acc(const Ordinal& delta) const {
    // sampled acc test: club members must appear arbitrarily close below delta
    for (std::uint64_t j : {2ull, 5ull, 11ull}) {
      Ordinal probe = fund_seq(delta, j);
      auto m = club_->min_at_least(probe + kOne);
      if (!m || !(*m < delta)) return false;
    }
    return true;
  }

  // relativize the base ladder into the club, then push every rung into the
  // partition piece selected by its position
  ClosedSet mapped_ladder(const Ordinal& delta) const {
    ClosedSet basec = base_->c_at(delta);
    auto rel = std::make_shared<std::vector<Ordinal>>();
    auto cursor = std::make_shared<std::uint64_t>(0);
    ProviderPtr base = base_;
    auto club = club_;
    Ordinal d = delta;
    auto rel_at = [basec, rel, cursor, club, d](std::uint64_t k) {
      while (rel->size() <= k) {
        auto below = blk_stream_next(basec, cursor);
        auto c = club->min_at_least(below);
        if (!c || !(*c < d)) throw std::logic_error("relativized rung escaped delta");
        if (rel->empty() || rel->back() < *c) rel->push_back(*c);
      }
      return (*rel)[k];
    };
    auto parts = parts_;
    auto gen = [rel_at, parts, d](std::uint64_t k) {
      Ordinal gamma = rel_at(k);
      Ordinal beta = k == 0 ? Ordinal() : rel_at(k - 1);
      std::size_t idx = k == 0 ? 0 : static_cast<std::size_t>(k - 1);
      if (idx < parts.size()) {
        auto m = parts[idx]->min_at_least(beta);
        if (m && *m < gamma) return *m;
      }
      return beta;  // fallback branch of the case split
    };
    return ClosedSet::tail(gen, delta, "mapped:" + delta.render());
  }

  // (i+2) ∪ C_delta
  ClosedSet padded(const Ordinal& delta, std::size_t i) const {
    ClosedSet basec = base_->c_at(delta);
    std::vector<Ordinal> head;
    for (std::uint64_t v = 0; v < i + 2; ++v) head.push_back(Ordinal::from_uint(v));
    Ordinal cut = Ordinal::from_uint(i + 2);
    std::vector<ClosedSet::Block> blocks = ClosedSet::points(head).blocks();
    for (const auto& b : basec.blocks()) {
      if (b.infinite()) {
        auto below = blk_count_below(b, cut);
        if (!below) throw std::logic_error("padded: base accumulates below pad");
        std::uint64_t off = *below;
        auto g = b.gen;
        ClosedSet t = ClosedSet::tail(
            [g, off](std::uint64_t k) { return g->at(off + k); }, b.gsup, b.tag);
        blocks.push_back(t.blocks()[0]);
      } else {
        ClosedSet::Block nb;
        for (const auto& ptv : b.pts)
          if (!(ptv < cut)) nb.pts.push_back(ptv);
        if (!nb.pts.empty()) blocks.push_back(std::move(nb));
      }
    }
    return ClosedSet::compose(std::move(blocks));
  }

  static Ordinal blk_stream_next(const ClosedSet& s, std::shared_ptr<std::uint64_t> k) {
    // k-th element of s in increasing order
    Ordinal cur;
    std::uint64_t want = (*k)++;
    std::uint64_t i = 0;
    for (const auto& b : s.blocks()) {
      std::uint64_t len = b.infinite() ? UINT64_MAX : b.pts.size();
      if (want - i < len && !b.infinite()) return b.pts[want - i];
      if (b.infinite()) return b.gen->at(want - i);
      i += len;
    }
    throw std::logic_error("element index out of range");
  }

  ProviderPtr base_;
  std::vector<std::shared_ptr<OrdSet>> parts_;
  std::shared_ptr<OrdSet> club_;
  mutable std::map<Ordinal, ClosedSet> memo_;
  mutable std::mutex mu_;
};

void validate_transform_inputs(const CSeqProvider& base,
                               const std::vector<std::shared_ptr<OrdSet>>& parts,
                               const OrdSet& club) {
  if (parts.empty()) throw std::invalid_argument("transform: empty partition");
  const Ordinal& bound = base.bound();
  // sample each piece: members must be limits, pieces pairwise disjoint,
  // every piece cofinal up to the bound
  std::vector<std::vector<Ordinal>> samples(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    Ordinal cur;
    for (int t = 0; t < 24; ++t) {
      auto m = parts[i]->min_at_least(cur);
      if (!m) break;
      if (!m->is_limit())
        throw std::invalid_argument("transform: partition piece contains a non-limit");
      samples[i].push_back(*m);
      cur = *m + kOne;
    }
    if (samples[i].empty())
      throw std::invalid_argument("transform: empty partition piece");
    if (bound.is_limit()) {
      for (std::uint64_t j : {1ull, 4ull}) {
        Ordinal high = fund_seq(bound, 7 + j);
        auto m = parts[i]->min_at_least(high);
        if (!m) throw std::invalid_argument("transform: piece not cofinal in window");
      }
    }
  }
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (i == j) continue;
      for (const auto& x : samples[i])
        if (parts[j]->contains(x))
          throw std::invalid_argument("transform: partition pieces overlap");
    }
  // club: disjoint from the pieces, and accumulated by every piece
  Ordinal cur;
  for (int t = 0; t < 16; ++t) {
    auto c = club.min_at_least(cur);
    if (!c) break;
    for (const auto& z : parts) {
      if (z->contains(*c))
        throw std::invalid_argument("transform: club meets a partition piece");
      if (c->is_limit()) {
        Ordinal probe = fund_seq(*c, 5);
        auto m = z->min_at_least(probe);
        if (!m || !(*m < *c))
          throw std::invalid_argument("transform: club point not accumulated by a piece");
      }
    }
    cur = *c + kOne;
  }
}

}  // namespace

ProviderPtr transform_ladders(ProviderPtr base,
                              std::vector<std::shared_ptr<OrdSet>> parts,
                              std::shared_ptr<OrdSet> club) {
  validate_transform_inputs(*base, parts, *club);
  return std::make_shared<TransformedProvider>(std::move(base), std::move(parts),
                                               std::move(club));
}

TransformCheck transform_guarantee_check(const CSeqProvider& transformed,
                                         std::shared_ptr<OrdSet> club,
                                         const Ordinal& hi, std::size_t deltas,
                                         std::size_t pairs_per_delta) {
  TransformCheck out;
  // walk the club's accumulation points from below
  Ordinal cur = kOne;
  std::size_t found = 0;
  while (found < deltas) {
    auto c = club->acc_min_at_least(cur);
    if (!c || !(*c < hi)) break;
    cur = *c + kOne;
    if (!c->is_limit() || !club->contains(*c)) continue;
    // accumulation test: club members arbitrarily close below
    Ordinal probe = fund_seq(*c, 6);
    auto m = club->min_at_least(probe + kOne);
    if (!m || !(*m < *c)) continue;
    ++found;
    Ordinal delta = *c;
    ClosedSet cd = transformed.c_at(delta);
    std::vector<Ordinal> rungs;
    {
      Ordinal at;
      for (std::size_t k = 0; k + 1 < pairs_per_delta + 2; ++k) {
        auto r = cd.min_at_least(k == 0 ? kZero : at + kOne);
        if (!r) break;
        at = *r;
        rungs.push_back(at);
      }
    }
    for (std::size_t k = 0; k + 1 < rungs.size(); ++k) {
      const Ordinal& alpha = rungs[k];
      const Ordinal& beta = rungs[k + 1];
      ClosedSet cb = transformed.c_at(beta);
      TransformCheck::Row row;
      row.delta = delta;
      row.alpha = alpha;
      row.beta = beta;
      row.otp_big = cb.otp_below(alpha);
      row.otp_small = cd.otp_below(alpha);
      row.ok = row.otp_small + kOne < row.otp_big;
      out.all_ok = out.all_ok && row.ok;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

// ------------------------------------------------- club-guessing diagnostic

std::vector<ThetaCheckRow> theta_window_check(const CSeqProvider& p,
                                              const ThetaCheckInput& in) {
  std::vector<ThetaCheckRow> out;
  for (const Ordinal& delta : in.S) {
    ClosedSet cd = p.c_at(delta);
    ThetaCheckRow row;
    row.delta = delta;
    row.ok = true;
    for (std::uint64_t tau = 0; tau < in.theta && row.ok; ++tau) {
      bool hit = false;
      for (const Ordinal& gamma : in.D) {
        if (!(gamma < delta) || !(in.above < gamma)) continue;
        if (std::find(in.T.begin(), in.T.end(), gamma) == in.T.end()) continue;
        if (!cd.isolated_at(gamma)) continue;
        Ordinal o = cd.otp_below(gamma);
        if (in.h(o) != tau) continue;
        if (in.use_g && in.g(o) != in.nu) continue;
        hit = true;
        break;
      }
      if (!hit) {
        row.ok = false;
        row.failing_tau = tau;
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace ordwalk
