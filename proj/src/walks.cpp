#include "ordwalk/walks.hpp"

#include <algorithm>
#include <set>

namespace ordwalk {

namespace {
const Ordinal kZero;
const Ordinal kOne = Ordinal::from_uint(1);
}  // namespace

WalkReport WalkEngine::walk(const Ordinal& beta, const Ordinal& gamma) const {
  if (gamma < beta) throw std::invalid_argument("walk: beta > gamma");
  if (p_->bound() < gamma) throw QueryError("walk: gamma above provider bound");
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = memo_.find({beta, gamma}); it != memo_.end()) return it->second;
  }

  WalkReport r;
  r.beta = beta;
  r.gamma = gamma;
  Ordinal cur = gamma;
  while (beta < cur) {
    ClosedSet c = p_->c_at(cur);
    auto next = c.min_at_least(beta);
    if (!next) throw QueryError("walk: C-sequence not cofinal at " + cur.render());
    r.trace.push_back(cur);
    r.rho0.push_back(c.otp_below(beta));
    Ordinal s = c.sup_below(beta);
    if (r.lambda < s) r.lambda = s;
    if (s < beta && r.lambda2 < s) r.lambda2 = s;
    cur = *next;
  }
  r.rho2 = r.trace.size();
  for (const auto& v : r.rho0)
    if (r.rho1 < v) r.rho1 = v;
  if (r.lambda < beta || r.trace.empty())
    r.last = beta;
  else
    r.last = r.trace.back();

  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(std::make_pair(beta, gamma), r);
  return r;
}

std::uint64_t sigma_h(const std::vector<Ordinal>& sigma,
                      const std::function<std::uint64_t(const Ordinal&)>& h) {
  std::uint64_t m = 0;
  for (const auto& v : sigma) m = std::max(m, h(v));
  return m;
}

std::strong_ordering lex_compare_seq(const std::vector<Ordinal>& f,
                                     const std::vector<Ordinal>& g) {
  std::size_t n = std::min(f.size(), g.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = Ordinal::cmp(f[i], g[i]);
    if (c != 0) return c;
  }
  // comparable: the longer (proper extension) sorts first
  return g.size() <=> f.size();
}

namespace {

// rho0 strings differ at xi iff the walks differ; for rho2 only their length matters
enum class DiffMode { full, length };

struct DiffSearch {
  const WalkEngine& eng;
  DiffMode mode;

  bool strings_differ(const WalkReport& a, const WalkReport& b) const {
    if (mode == DiffMode::length) return a.rho2 != b.rho2;
    if (a.rho2 != b.rho2) return true;
    for (std::size_t i = 0; i < a.rho0.size(); ++i)
      if (!(a.rho0[i] == b.rho0[i])) return true;
    return false;
  }

  // least xi in [lo, hi) with fiber values of (., x) and (., y) unequal;
  // requires hi <= min(x, y). Ladder cells are streamed lazily: when hi is a
  // limit equal to min(x, y) there are infinitely many cells, but the otp
  // entries of the lower fiber grow unboundedly while the other side stays
  // bounded, so a disagreement always surfaces after finitely many cells.
  std::optional<Ordinal> run(const Ordinal& x, const Ordinal& y, const Ordinal& lo,
                             const Ordinal& hi) const {
    if (x == y || !(lo < hi)) return std::nullopt;
    ClosedSet cx = eng.provider().c_at(x);
    ClosedSet cy = eng.provider().c_at(y);

    auto handle_interval = [&](const Ordinal& from,
                               const Ordinal& to) -> std::optional<Ordinal> {
      if (!(from < to)) return std::nullopt;
      // no ladder points of either set inside [from, to)
      Ordinal kx = cx.otp_below(from), ky = cy.otp_below(from);
      Ordinal sx = *cx.min_at_least(from), sy = *cy.min_at_least(from);
      if (mode == DiffMode::full && !(kx == ky)) return from;
      if (sx == sy) return std::nullopt;
      return run(sx, sy, from, to);
    };

    Ordinal s = lo;
    for (int guard = 0; guard < 1000000; ++guard) {
      auto px = cx.min_at_least(s);
      auto py = cy.min_at_least(s);
      std::optional<Ordinal> p;
      if (px && *px < hi) p = *px;
      if (py && *py < hi && (!p || *py < *p)) p = *py;
      if (auto d = handle_interval(s, p ? *p : hi)) return d;
      if (!p) return std::nullopt;
      // the boundary point itself: compare outright
      if (strings_differ(eng.walk(*p, x), eng.walk(*p, y))) return *p;
      s = *p + kOne;
      if (!(s < hi)) return std::nullopt;
    }
    throw std::logic_error("fiber delta: cell stream did not settle");
  }
};

}  // namespace

FiberDelta fiber_delta_exact(const WalkEngine& eng, Family fam, const Ordinal& a,
                             const Ordinal& b) {
  if (fam == Family::rho1)
    throw std::invalid_argument("fiber_delta_exact: rho1 unsupported");
  DiffSearch ds{eng, fam == Family::rho2 ? DiffMode::length : DiffMode::full};
  FiberDelta out;
  Ordinal hi = std::min(a, b);
  auto d = ds.run(a, b, kZero, hi);
  if (!d) {
    out.comparable = true;
  } else {
    out.delta = *d;
  }
  return out;
}

std::vector<Ordinal> rho1_level_set(const WalkEngine& eng, const Ordinal& delta,
                                    std::uint64_t i) {
  std::set<Ordinal> out;
  // alpha < x belongs iff otp(C_x ∩ alpha) <= i and the rest of the walk
  // stays within the bound as well
  std::function<void(const Ordinal&, const Ordinal&)> visit =
      [&](const Ordinal& x, const Ordinal& cap) {
        ClosedSet c = eng.provider().c_at(x);
        Ordinal prev;  // exclusive lower edge of the current rung window
        for (std::uint64_t j = 0; j <= i; ++j) {
          auto el = c.min_at_least(j == 0 ? kZero : prev + kOne);
          if (!el) break;
          Ordinal cj = std::min(*el, cap);
          if (*el < cap && *el < x) out.insert(*el);
          // alpha strictly between prev and c_j walks on into c_j
          if (!el->is_zero() && prev < *el) visit(*el, cj);
          prev = *el;
          if (!(*el < cap)) break;
        }
      };
  visit(delta, delta);

  // keep only values whose full rho1 really stays <= i (the recursion
  // over-approximates at block seams); final filter is exact
  std::vector<Ordinal> res;
  for (const auto& al : out)
    if (al < delta) {
      WalkReport w = eng.walk(al, delta);
      auto m = w.rho1.as_uint();
      if (m && *m <= i) res.push_back(al);
    }
  return res;
}

std::optional<std::uint64_t> rect_min_rho2(const WalkEngine& eng,
                                           const std::vector<Ordinal>& as,
                                           const std::vector<Ordinal>& bs) {
  std::optional<std::uint64_t> best;
  for (const auto& a : as)
    for (const auto& b : bs) {
      if (!(a < b)) continue;
      std::uint64_t v = eng.walk(a, b).rho2;
      if (!best || v < *best) best = v;
    }
  return best;
}

}  // namespace ordwalk
