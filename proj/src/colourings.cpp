#include "ordwalk/colourings.hpp"

#include <algorithm>

namespace ordwalk {

namespace {

const Ordinal kOne = Ordinal::from_uint(1);

bool strict_below(const TreeNode& a, const TreeNode& b) {
  return a.cut < b.cut && node_subset(a, b);
}

std::string node_key(const TreeNode& n) {
  std::string s = n.cut.render() + "|";
  for (const auto& [k, v] : n.values) s += k.render() + ":" + value_render(v) + ";";
  return s;
}

// deterministic injection of component tuples into the naturals:
// collect every tuple, sort, use the rank
class TupleCoder {
 public:
  std::size_t add(std::string t) {
    tuples_.insert(std::move(t));
    return 0;
  }
  Ordinal rank(const std::string& t) const {
    std::uint64_t i = 0;
    for (const auto& s : tuples_) {
      if (s == t) return Ordinal::from_uint(i);
      ++i;
    }
    throw std::logic_error("TupleCoder: unknown tuple");
  }

 private:
  std::set<std::string> tuples_;
};

bool infinite_limit_cut(const Ordinal& cut) {
  return cut.is_limit();  // every limit is >= w
}

}  // namespace

GoodCheck check_good(const TreeWindow& w, const GoodColouring& c) {
  GoodCheck out;
  for (const auto& [i, col] : c.colours) {
    if (!(col < w.nodes[i].cut)) {
      out.regressive = false;
      out.bad_node = i;
      break;
    }
  }
  for (auto it = c.colours.begin(); it != c.colours.end() && out.chain_injective; ++it)
    for (auto jt = std::next(it); jt != c.colours.end(); ++jt) {
      const TreeNode& a = w.nodes[it->first];
      const TreeNode& b = w.nodes[jt->first];
      if ((strict_below(a, b) || strict_below(b, a)) && it->second == jt->second) {
        out.chain_injective = false;
        out.bad_chain = {it->first, jt->first};
        break;
      }
    }
  return out;
}

bool is_antichain(const TreeWindow& w, const std::vector<std::size_t>& nodes) {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (strict_below(w.nodes[nodes[i]], w.nodes[nodes[j]]) ||
          strict_below(w.nodes[nodes[j]], w.nodes[nodes[i]]))
        return false;
  return true;
}

std::size_t min_antichain_cover(const TreeWindow& w,
                                const std::vector<std::size_t>& nodes) {
  if (nodes.empty()) return 0;
  // Mirsky level = longest chain ending at the node
  std::vector<std::size_t> order(nodes.begin(), nodes.end());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return w.nodes[a].cut < w.nodes[b].cut;
  });
  std::map<std::size_t, std::size_t> lvl;
  std::size_t maxlvl = 0;
  for (std::size_t idx : order) {
    std::size_t best = 0;
    for (std::size_t prev : order) {
      if (prev == idx) continue;
      if (strict_below(w.nodes[prev], w.nodes[idx]) && lvl.count(prev))
        best = std::max(best, lvl[prev] + 1);
    }
    lvl[idx] = best;
    maxlvl = std::max(maxlvl, best);
  }
  return maxlvl + 1;
}

namespace {

bool brute_colourable(const TreeWindow& w, const std::vector<std::size_t>& nodes,
                      std::vector<std::size_t>& colour, std::size_t at, std::size_t k) {
  if (at == nodes.size()) return true;
  for (std::size_t c = 0; c < k; ++c) {
    bool ok = true;
    for (std::size_t j = 0; j < at && ok; ++j)
      if (colour[j] == c &&
          (strict_below(w.nodes[nodes[j]], w.nodes[nodes[at]]) ||
           strict_below(w.nodes[nodes[at]], w.nodes[nodes[j]])))
        ok = false;
    if (ok) {
      colour[at] = c;
      if (brute_colourable(w, nodes, colour, at + 1, k)) return true;
    }
  }
  return false;
}

}  // namespace

std::size_t min_antichain_cover_brute(const TreeWindow& w,
                                      const std::vector<std::size_t>& nodes) {
  if (nodes.size() > 12)
    throw std::invalid_argument("brute antichain cover: too many nodes");
  if (nodes.empty()) return 0;
  for (std::size_t k = 1;; ++k) {
    std::vector<std::size_t> colour(nodes.size(), 0);
    if (brute_colourable(w, nodes, colour, 0, k)) return k;
  }
}

GoodColouring specializer_to_good(const TreeWindow& w, const NodeMap& f) {
  // contract: every mapped node goes strictly below itself
  for (const auto& [i, target] : f) {
    if (w.nodes[i].cut.is_zero()) continue;
    if (!(target.cut < w.nodes[i].cut) || !node_subset(target, w.nodes[i]))
      throw std::invalid_argument("specializer not regressive at node " +
                                  std::to_string(i));
  }

  // group preimages and lay each out in Mirsky levels
  std::map<std::string, std::vector<std::size_t>> pre;
  for (const auto& [i, target] : f) pre[node_key(target)].push_back(i);

  std::map<std::size_t, std::pair<std::string, std::size_t>> parts;
  for (const auto& [zkey, xs] : pre) {
    std::vector<std::size_t> order = xs;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return w.nodes[a].cut < w.nodes[b].cut;
    });
    std::map<std::size_t, std::size_t> lvl;
    for (std::size_t idx : order) {
      std::size_t best = 0;
      for (std::size_t prev : order)
        if (prev != idx && strict_below(w.nodes[prev], w.nodes[idx]) && lvl.count(prev))
          best = std::max(best, lvl[prev] + 1);
      lvl[idx] = best;
      parts[idx] = {zkey, best};
    }
  }

  TupleCoder coder;
  for (const auto& [i, zl] : parts)
    coder.add(zl.first + "#" + std::to_string(zl.second));

  GoodColouring out;
  out.provenance = "good-from-specializer";
  for (const auto& [i, zl] : parts) {
    if (!infinite_limit_cut(w.nodes[i].cut)) continue;
    out.colours[i] = coder.rank(zl.first + "#" + std::to_string(zl.second));
  }
  std::set<Ordinal> lv;
  for (const auto& [i, col] : out.colours) lv.insert(w.nodes[i].cut);
  out.levels.assign(lv.begin(), lv.end());
  return out;
}

NodeMap good_to_specializer(const TreeWindow& w, const GoodColouring& c) {
  std::set<Ordinal> D(c.levels.begin(), c.levels.end());
  for (const auto& d : D)
    if (!infinite_limit_cut(d))
      throw std::invalid_argument("specializer levels must be infinite limits");
  NodeMap f;
  for (std::size_t i = 0; i < w.nodes.size(); ++i) {
    const TreeNode& x = w.nodes[i];
    if (x.cut.is_zero()) continue;
    if (D.count(x.cut) && c.colours.count(i)) {
      f[i] = restrict_node(x, c.colours.at(i) + kOne);
    } else {
      Ordinal s;
      for (const auto& d : D)
        if (d < x.cut && s < d) s = d;
      f[i] = restrict_node(x, s);
    }
  }
  return f;
}

GoodColouring specialize_via_coherence(const TreeWindow& w,
                                       const std::map<Ordinal, std::size_t>& designated,
                                       const std::map<std::size_t, Ordinal>& d) {
  // preconditions: levels cohere, d regressive on the b's, d injective on chains
  for (const auto& [delta, bi] : designated) {
    if (!infinite_limit_cut(delta))
      throw std::invalid_argument("designated level is not an infinite limit");
    if (!(w.nodes[bi].cut == delta))
      throw std::invalid_argument("designated node is not at its level");
    auto coh = coherence_check(w, delta);
    if (!coh.ok)
      throw std::invalid_argument("window not coherent at level " + delta.render());
    if (!(d.at(bi) < delta))
      throw std::invalid_argument("d not regressive at level " + delta.render());
  }
  for (const auto& [del1, b1] : designated)
    for (const auto& [del2, b2] : designated) {
      if (!(del1 < del2)) continue;
      if (strict_below(w.nodes[b1], w.nodes[b2]) && d.at(b1) == d.at(b2))
        throw std::invalid_argument("d constant on the chain " + del1.render() +
                                    " < " + del2.render());
    }

  // f(x) := pi(d(b_gamma), beta, index of b_gamma restricted to beta), where x
  // agrees with b_gamma on the probe from beta on
  struct Part {
    Ordinal dval, beta;
    std::string restriction;
  };
  std::map<std::size_t, Part> parts;
  for (const auto& [gamma, bi] : designated) {
    const TreeNode& b = w.nodes[bi];
    for (std::size_t xi : w.level(gamma)) {
      const TreeNode& x = w.nodes[xi];
      Ordinal beta;  // strict bound on the disagreement points
      for (const auto& [p, v] : x.values)
        if (!value_eq(v, b.values.at(p)) && !(p + kOne < beta)) beta = p + kOne;
      parts[xi] = {d.at(bi), beta, node_key(restrict_node(b, beta))};
    }
  }

  TupleCoder coder;
  for (const auto& [xi, part] : parts)
    coder.add(part.dval.render() + "|" + part.beta.render() + "|" + part.restriction);

  GoodColouring out;
  out.provenance = "coherent-specializer";
  for (const auto& [xi, part] : parts)
    out.colours[xi] =
        coder.rank(part.dval.render() + "|" + part.beta.render() + "|" + part.restriction);
  for (const auto& [delta, bi] : designated) out.levels.push_back(delta);
  return out;
}

namespace {

// least gamma' in {gamma} ∪ pool ∪ window witnesses whose fiber matches the
// node on its probed domain
Ordinal least_matching_witness(const WalkEngine& eng, const TreeWindow& w,
                               const TreeNode& x, const std::vector<Ordinal>& pool) {
  std::set<Ordinal> cands;
  cands.insert(x.cut);
  for (const auto& p : pool)
    if (!(p < x.cut)) cands.insert(p);
  for (const auto& n : w.nodes)
    if (!(n.witness < x.cut)) cands.insert(n.witness);
  for (const auto& g : cands) {
    bool match = true;
    for (const auto& [p, v] : x.values) {
      WalkReport rep = eng.walk(p, g);
      FiberValue gv;
      if (w.family == TreeFamily::rho0)
        gv = rep.rho0;
      else if (w.family == TreeFamily::rho1)
        gv = rep.rho1;
      else
        gv = static_cast<std::int64_t>(rep.rho2);
      if (!value_eq(gv, v)) {
        match = false;
        break;
      }
    }
    if (match) return g;
  }
  throw std::logic_error("no matching witness for a window node");
}

Ordinal otp_between(const ClosedSet& c, const Ordinal& lo, const Ordinal& hi) {
  // otp(c ∩ [lo, hi)) via left subtraction of the initial segment
  return Ordinal::sub_left(c.otp_below(lo), c.otp_below(hi));
}

}  // namespace

GoodColouring rho2_good_colouring(const WalkEngine& eng, const TreeWindow& w2,
                                  std::vector<Ordinal> pool) {
  if (w2.family != TreeFamily::rho2)
    throw std::invalid_argument("rho2_good_colouring: window family must be rho2");

  struct Parts {
    int casenum;
    std::uint64_t steps;
    Ordinal a, e;
  };
  std::map<std::size_t, Parts> parts;
  for (std::size_t i = 0; i < w2.nodes.size(); ++i) {
    const TreeNode& x = w2.nodes[i];
    const Ordinal& gamma = x.cut;
    if (!infinite_limit_cut(gamma)) continue;
    // window-relative R flag for the cut
    if (!characteristics_window(eng.provider(), gamma, eng.provider().bound()).R)
      throw std::invalid_argument("cut outside the R window: " + gamma.render());
    Ordinal gp = least_matching_witness(eng, w2, x, pool);
    ClosedSet cg = eng.provider().c_at(gamma);
    if (gp == gamma) {
      Ordinal otp = cg.otp();
      parts[i] = {0, 0, Ordinal(), otp < gamma ? otp : Ordinal()};
      continue;
    }
    WalkReport rep = eng.walk(gamma, gp);
    if (rep.lambda < gamma) {
      Ordinal a = rep.lambda + kOne;
      Ordinal otp = otp_between(cg, a, gamma);
      parts[i] = {1, rep.rho2, a, otp < gamma ? otp : Ordinal()};
    } else {
      Ordinal a = rep.lambda2 + kOne;
      ClosedSet cl = eng.provider().c_at(rep.last);
      parts[i] = {2, rep.rho2, a, otp_between(cl, a, gamma)};
    }
  }

  auto tuple_of = [](const Parts& p) {
    return std::to_string(p.casenum) + "|" + std::to_string(p.steps) + "|" +
           p.a.render() + "|" + p.e.render();
  };
  TupleCoder coder;
  for (const auto& [i, p] : parts) coder.add(tuple_of(p));

  GoodColouring out;
  out.provenance = "rho2-three-case";
  std::set<Ordinal> lv;
  for (const auto& [i, p] : parts) {
    out.colours[i] = coder.rank(tuple_of(p));
    lv.insert(w2.nodes[i].cut);
  }
  out.levels.assign(lv.begin(), lv.end());
  return out;
}

GoodColouring transfer_rho2_to_rho0(const TreeWindow& w0, const TreeWindow& w2,
                                    const GoodColouring& d2) {
  if (w0.family != TreeFamily::rho0 || w2.family != TreeFamily::rho2)
    throw std::invalid_argument("transfer: family mismatch");
  GoodColouring out;
  out.provenance = "rho0-from-rho2-lengths";
  out.levels = d2.levels;
  std::set<Ordinal> D(d2.levels.begin(), d2.levels.end());
  for (std::size_t i = 0; i < w0.nodes.size(); ++i) {
    const TreeNode& x = w0.nodes[i];
    if (!D.count(x.cut)) continue;
    TreeNode lx;
    lx.witness = x.witness;
    lx.cut = x.cut;
    for (const auto& [p, v] : x.values)
      lx.values.emplace(p, static_cast<std::int64_t>(std::get<OrdSeq>(v).size()));
    auto j = w2.find(lx);
    if (!j || !d2.colours.count(*j))
      throw std::invalid_argument("transfer: length image missing from the rho2 window");
    out.colours[i] = d2.colours.at(*j);
  }
  return out;
}

GoodColouring transfer_rho0_to_rho2(
    const WalkEngine& eng, const TreeWindow& w2,
    const std::function<Ordinal(const Ordinal&, const Ordinal&)>& d0,
    std::vector<Ordinal> pool) {
  if (w2.family != TreeFamily::rho2)
    throw std::invalid_argument("transfer: window family must be rho2");

  struct Parts {
    int casenum;
    std::uint64_t steps;
    std::string t;
    Ordinal d;
  };
  std::map<std::size_t, Parts> parts;
  for (std::size_t i = 0; i < w2.nodes.size(); ++i) {
    const TreeNode& x = w2.nodes[i];
    const Ordinal& gamma = x.cut;
    if (!infinite_limit_cut(gamma)) continue;
    Ordinal gp = least_matching_witness(eng, w2, x, pool);
    if (gp == gamma) {
      parts[i] = {0, 0, "", d0(gamma, gamma)};
      continue;
    }
    WalkReport rep = eng.walk(gamma, gp);
    if (rep.lambda < gamma) {
      Ordinal a = rep.lambda + kOne;
      // the rho2 fiber of gamma itself, cut to alpha
      TreeNode gfib;
      gfib.witness = gamma;
      gfib.cut = a;
      for (const auto& p : w2.probe_below(a))
        gfib.values.emplace(p, static_cast<std::int64_t>(eng.walk(p, gamma).rho2));
      parts[i] = {1, rep.rho2, node_key(gfib), d0(gamma, gamma)};
    } else {
      Ordinal a = rep.lambda2 + kOne;
      // the rho2 fiber of `last` cut to alpha, plus d at the rho0 fiber of
      // `last` cut to gamma
      TreeNode lastfib;
      lastfib.witness = rep.last;
      lastfib.cut = a;
      for (const auto& p : w2.probe_below(a))
        lastfib.values.emplace(
            p, static_cast<std::int64_t>(eng.walk(p, rep.last).rho2));
      parts[i] = {2, rep.rho2, node_key(lastfib), d0(rep.last, gamma)};
    }
  }

  auto tuple_of = [](const Parts& p) {
    return std::to_string(p.casenum) + "|" + std::to_string(p.steps) + "|" + p.t +
           "|" + p.d.render();
  };
  TupleCoder coder;
  for (const auto& [i, p] : parts) coder.add(tuple_of(p));

  GoodColouring out;
  out.provenance = "rho2-from-rho0";
  std::set<Ordinal> lv;
  for (const auto& [i, p] : parts) {
    out.colours[i] = coder.rank(tuple_of(p));
    lv.insert(w2.nodes[i].cut);
  }
  out.levels.assign(lv.begin(), lv.end());
  return out;
}

namespace {

const Ordinal& meet_colour(const TreeWindow& w,
                           const std::map<std::size_t, Ordinal>& colour,
                           std::size_t i, std::size_t j) {
  DeltaMeet dm = delta_meet(w.nodes[i], w.nodes[j]);
  auto k = w.find(dm.meet);
  if (!k) throw std::invalid_argument("colouring does not cover a meet (close the window)");
  auto it = colour.find(*k);
  if (it == colour.end())
    throw std::invalid_argument("colouring missing on node " + std::to_string(*k));
  return it->second;
}

}  // namespace

bool flipped_less(const TreeWindow& w, const std::map<std::size_t, Ordinal>& colour,
                  const std::vector<Ordinal>& A, std::size_t i, std::size_t j) {
  if (i == j) return false;
  const Ordinal& c = meet_colour(w, colour, i, j);
  bool in_a = std::binary_search(A.begin(), A.end(), c);
  auto lex = lex_compare(w.nodes[i], w.nodes[j]);
  return in_a ? lex == std::strong_ordering::less : lex == std::strong_ordering::greater;
}

FlipCheck flipped_order_check(const TreeWindow& w,
                              const std::map<std::size_t, Ordinal>& colour,
                              const std::vector<Ordinal>& A) {
  FlipCheck out;
  std::size_t n = w.nodes.size();
  std::vector<std::vector<bool>> less(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) less[i][j] = flipped_less(w, colour, A, i, j);

  for (std::size_t i = 0; i < n && out.total_order; ++i)
    for (std::size_t j = 0; j < n && out.total_order; ++j) {
      if (i == j) continue;
      if (less[i][j] == less[j][i]) {
        out.total_order = false;
        out.violation = "connexity fails at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")";
      }
    }
  for (std::size_t i = 0; i < n && out.total_order; ++i)
    for (std::size_t j = 0; j < n && out.total_order; ++j)
      for (std::size_t k = 0; k < n && out.total_order; ++k) {
        if (i == j || j == k || i == k) continue;
        if (less[i][j] && less[j][k] && !less[i][k]) {
          out.total_order = false;
          out.violation = "transitivity fails at (" + std::to_string(i) + "," +
                          std::to_string(j) + "," + std::to_string(k) + ")";
        }
      }
  return out;
}

RainbowReport induced_pair_colouring(const TreeWindow& w,
                                     const std::map<std::size_t, Ordinal>& colour,
                                     const std::vector<Ordinal>& witnesses) {
  RainbowReport out;
  std::map<Ordinal, std::size_t> node_of;
  for (const auto& b : witnesses) {
    auto i = w.node_of(b, b);
    if (!i) throw std::invalid_argument("witness " + b.render() + " has no maximal node");
    node_of[b] = *i;
  }
  for (std::size_t i = 0; i < witnesses.size(); ++i)
    for (std::size_t j = i + 1; j < witnesses.size(); ++j) {
      const Ordinal& c =
          meet_colour(w, colour, node_of[witnesses[i]], node_of[witnesses[j]]);
      out.pair_colours[{witnesses[i], witnesses[j]}] = c;
    }
  for (std::size_t i = 0; i < witnesses.size() && out.rainbow_free; ++i)
    for (std::size_t j = i + 1; j < witnesses.size() && out.rainbow_free; ++j)
      for (std::size_t k = j + 1; k < witnesses.size() && out.rainbow_free; ++k) {
        const Ordinal& ab = out.pair_colours[{witnesses[i], witnesses[j]}];
        const Ordinal& ac = out.pair_colours[{witnesses[i], witnesses[k]}];
        const Ordinal& bc = out.pair_colours[{witnesses[j], witnesses[k]}];
        if (!(ab == ac) && !(ab == bc) && !(ac == bc)) {
          out.rainbow_free = false;
          out.witness = {witnesses[i], witnesses[j], witnesses[k]};
        }
      }
  return out;
}

}  // namespace ordwalk
