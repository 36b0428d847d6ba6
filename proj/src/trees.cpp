#include "ordwalk/trees.hpp"

#include <algorithm>
#include <set>

namespace ordwalk {

namespace {
const Ordinal kZero;
const Ordinal kOne = Ordinal::from_uint(1);
}  // namespace

std::string family_name(TreeFamily f) {
  switch (f) {
    case TreeFamily::rho0: return "rho0";
    case TreeFamily::rho1: return "rho1";
    case TreeFamily::rho2: return "rho2";
    case TreeFamily::rho0_flat: return "rho0*";
    case TreeFamily::rho2_flat: return "rho2*";
  }
  return "?";
}

bool value_eq(const FiberValue& a, const FiberValue& b) {
  return value_cmp(a, b) == 0;
}

std::strong_ordering value_cmp(const FiberValue& a, const FiberValue& b) {
  if (a.index() != b.index())
    throw std::invalid_argument("value_cmp: mixed fiber families");
  if (std::holds_alternative<OrdSeq>(a))
    return lex_compare_seq(std::get<OrdSeq>(a), std::get<OrdSeq>(b));
  if (std::holds_alternative<Ordinal>(a))
    return Ordinal::cmp(std::get<Ordinal>(a), std::get<Ordinal>(b));
  return std::get<std::int64_t>(a) <=> std::get<std::int64_t>(b);
}

std::string value_render(const FiberValue& v) {
  if (std::holds_alternative<OrdSeq>(v)) {
    std::string s = "<";
    const auto& q = std::get<OrdSeq>(v);
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (i) s += ",";
      s += q[i].render();
    }
    return s + ">";
  }
  if (std::holds_alternative<Ordinal>(v)) return std::get<Ordinal>(v).render();
  return std::to_string(std::get<std::int64_t>(v));
}

std::vector<Ordinal> TreeWindow::cuts() const {
  std::vector<Ordinal> out;
  for (const auto& n : nodes)
    if (out.empty() || !(out.back() == n.cut)) out.push_back(n.cut);
  return out;
}

std::vector<std::size_t> TreeWindow::level(const Ordinal& cut) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].cut == cut) out.push_back(i);
  return out;
}

namespace {

bool same_values(const TreeNode& a, const TreeNode& b) {
  if (!(a.cut == b.cut) || a.values.size() != b.values.size()) return false;
  auto it = b.values.begin();
  for (const auto& [k, v] : a.values) {
    if (!(it->first == k) || !value_eq(it->second, v)) return false;
    ++it;
  }
  return true;
}

bool node_before(const TreeNode& a, const TreeNode& b) {
  auto c = Ordinal::cmp(a.cut, b.cut);
  if (c != 0) return c < 0;
  auto ia = a.values.begin();
  auto ib = b.values.begin();
  for (; ia != a.values.end() && ib != b.values.end(); ++ia, ++ib) {
    auto k = Ordinal::cmp(ia->first, ib->first);
    if (k != 0) return k < 0;
    auto v = value_cmp(ia->second, ib->second);
    if (v != 0) return v < 0;
  }
  return ia == a.values.end() && ib != b.values.end();
}

}  // namespace

std::optional<std::size_t> TreeWindow::find(const TreeNode& n) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (same_values(nodes[i], n)) return i;
  return std::nullopt;
}

std::optional<std::size_t> TreeWindow::node_of(const Ordinal& witness,
                                               const Ordinal& cut) const {
  if (auto it = pair_index.find({witness, cut}); it != pair_index.end())
    return it->second;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].cut == cut && nodes[i].witness == witness) return i;
  return std::nullopt;
}

std::vector<Ordinal> TreeWindow::probe_below(const Ordinal& cut) const {
  std::vector<Ordinal> out;
  for (const auto& p : probe)
    if (p < cut) out.push_back(p);
  return out;
}

std::uint64_t TreeWindow::probe_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& p : probe) {
    h ^= p.hash();
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t TreeWindow::hash() const {
  std::uint64_t h = probe_hash() ^ provider_hash;
  for (const auto& n : nodes) {
    h ^= n.cut.hash();
    h *= 1099511628211ull;
    for (const auto& [k, v] : n.values) {
      h ^= k.hash();
      h *= 1099511628211ull;
      for (char c : value_render(v)) h = (h ^ static_cast<unsigned char>(c)) * 31;
    }
  }
  return h;
}

namespace {

FiberValue fiber_value(const WalkEngine& eng, TreeFamily fam, const Ordinal& xi,
                       const Ordinal& witness) {
  WalkReport w = eng.walk(xi, witness);
  switch (fam) {
    case TreeFamily::rho0: return w.rho0;
    case TreeFamily::rho1: return w.rho1;
    case TreeFamily::rho2: return static_cast<std::int64_t>(w.rho2);
    default:
      throw std::invalid_argument("fiber_value: flattened families are built, not walked");
  }
}

}  // namespace

TreeWindow build_window(const WalkEngine& eng, TreeFamily fam,
                        const std::vector<Ordinal>& witnesses,
                        const std::vector<Ordinal>& cuts,
                        std::vector<Ordinal> probe0,
                        const OrdSet* club) {
  TreeWindow w;
  w.family = fam;
  w.provider_hash = eng.provider().hash();

  Ordinal maxcut;
  for (const auto& c : cuts)
    if (maxcut < c) maxcut = c;
  for (const auto& b : witnesses)
    for (const auto& c : cuts)
      if (c <= b && maxcut < c) maxcut = c;

  std::set<Ordinal> probe(probe0.begin(), probe0.end());
  probe.insert(kZero);

  // probe closure: walking a probe point drags in the trace ordinals and the
  // ladder points it touches; iterate until stable
  for (int round = 0; round < 8; ++round) {
    std::set<Ordinal> next = probe;
    for (const auto& b : witnesses) {
      for (const auto& c : cuts) {
        if (!(c <= b)) continue;
        for (const auto& xi : probe) {
          if (!(xi < c)) continue;
          WalkReport rep = eng.walk(xi, b);
          for (const auto& t : rep.trace)
            if (t < maxcut) next.insert(t);
          for (const auto& step : rep.trace) {
            ClosedSet cs = eng.provider().c_at(step);
            Ordinal below = cs.otp_below(xi) < Ordinal::omega()
                                ? xi
                                : kZero;  // keep only finite chunks
            if (!below.is_zero()) {
              for (const auto& e : cs.enumerate_below(xi))
                if (e < maxcut) next.insert(e);
            }
            Ordinal s = cs.sup_below(xi);
            if (!s.is_zero() && s < maxcut) next.insert(s);
          }
        }
      }
    }
    if (club) {
      bool grew = true;
      while (grew) {
        grew = false;
        std::vector<Ordinal> snapshot(next.begin(), next.end());
        for (const auto& p : snapshot) {
          Ordinal v = club->sup_below(p);
          if (!v.is_zero() && v < p && next.insert(v).second) grew = true;
        }
      }
    }
    if (next.size() == probe.size()) break;
    probe = std::move(next);
  }
  w.probe.assign(probe.begin(), probe.end());

  for (const auto& b : witnesses) {
    for (const auto& c : cuts) {
      if (!(c <= b)) continue;
      TreeNode n;
      n.witness = b;
      n.cut = c;
      for (const auto& xi : w.probe) {
        if (!(xi < c)) break;
        n.values.emplace(xi, fiber_value(eng, fam, xi, b));
      }
      if (!w.find(n)) w.nodes.push_back(std::move(n));
    }
  }
  std::sort(w.nodes.begin(), w.nodes.end(), node_before);
  for (const auto& b : witnesses)
    for (const auto& c : cuts) {
      if (!(c <= b)) continue;
      TreeNode n;
      n.witness = b;
      n.cut = c;
      for (const auto& xi : w.probe) {
        if (!(xi < c)) break;
        n.values.emplace(xi, fiber_value(eng, fam, xi, b));
      }
      w.pair_index[{b, c}] = *w.find(n);
    }
  return w;
}

bool node_subset(const TreeNode& s, const TreeNode& t) {
  if (t.cut < s.cut) return false;
  for (const auto& [k, v] : s.values) {
    auto it = t.values.find(k);
    if (it == t.values.end() || !value_eq(it->second, v)) return false;
  }
  return true;
}

TreeNode restrict_node(const TreeNode& t, const Ordinal& cut) {
  TreeNode r;
  r.witness = t.witness;
  r.cut = cut;
  for (const auto& [k, v] : t.values) {
    if (!(k < cut)) break;
    r.values.emplace(k, v);
  }
  return r;
}

DeltaMeet delta_meet(const TreeNode& s, const TreeNode& t) {
  DeltaMeet out;
  const Ordinal& lowcut = s.cut < t.cut ? s.cut : t.cut;
  for (const auto& [k, v] : s.values) {
    if (!(k < lowcut)) break;
    auto it = t.values.find(k);
    if (it == t.values.end())
      throw std::invalid_argument("delta_meet: probe domains differ");
    if (!value_eq(it->second, v)) {
      out.delta = k;
      out.meet = restrict_node(s, k);
      return out;
    }
  }
  out.comparable = true;
  out.meet = t.cut < s.cut ? t : s;
  return out;
}

std::strong_ordering lex_compare(const TreeNode& s, const TreeNode& t) {
  DeltaMeet dm = delta_meet(s, t);
  if (dm.comparable) {
    // a proper extension sorts first
    return Ordinal::cmp(t.cut, s.cut);
  }
  return value_cmp(s.values.at(dm.delta), t.values.at(dm.delta));
}

CoherenceResult coherence_check(const TreeWindow& w, const Ordinal& delta) {
  CoherenceResult out;
  auto lvl = w.level(delta);
  auto below = w.probe_below(delta);
  for (std::size_t i = 0; i < lvl.size() && out.ok; ++i) {
    for (std::size_t j = i + 1; j < lvl.size() && out.ok; ++j) {
      const TreeNode& a = w.nodes[lvl[i]];
      const TreeNode& b = w.nodes[lvl[j]];
      Ordinal top_disagree;
      bool any = false;
      for (const auto& p : below) {
        if (!value_eq(a.values.at(p), b.values.at(p))) {
          any = true;
          top_disagree = p;
        }
      }
      if (any && (below.empty() || !(top_disagree < below.back()))) {
        out.ok = false;
        out.witness = {lvl[i], lvl[j]};
      }
    }
  }
  return out;
}

TreeWindow flatten_psi(const TreeWindow& w, const OrdSet& E) {
  if (w.family != TreeFamily::rho0 && w.family != TreeFamily::rho2)
    throw std::invalid_argument("flatten_psi: family must be rho0 or rho2");
  TreeWindow out;
  out.family = w.family == TreeFamily::rho0 ? TreeFamily::rho0_flat
                                            : TreeFamily::rho2_flat;
  out.probe = w.probe;
  out.provider_hash = w.provider_hash;

  for (const TreeNode& t : w.nodes) {
    TreeNode n;
    n.witness = t.witness;
    n.cut = t.cut;
    for (const auto& [beta, v] : t.values) {
      if (beta.is_zero()) {  // the sup formula degenerates at the bottom
        n.values.emplace(beta, v);
        continue;
      }
      Ordinal alpha = E.sup_below(beta);
      if (alpha == beta) {
        if (w.family == TreeFamily::rho0)
          n.values.emplace(beta, OrdSeq{});
        else
          n.values.emplace(beta, static_cast<std::int64_t>(0));
        continue;
      }
      auto it = t.values.find(alpha);
      if (it == t.values.end())
        throw std::invalid_argument("flatten_psi: sup(E ∩ " + beta.render() +
                                    ") = " + alpha.render() + " is not a probe point");
      if (w.family == TreeFamily::rho0) {
        const OrdSeq& a = std::get<OrdSeq>(it->second);
        const OrdSeq& b = std::get<OrdSeq>(v);
        std::size_t e = 0;
        while (e < a.size() && e < b.size() && a[e] == b[e]) ++e;
        OrdSeq star;
        star.push_back(Ordinal::from_uint(a.size() - e));
        star.insert(star.end(), b.begin() + static_cast<std::ptrdiff_t>(e), b.end());
        n.values.emplace(beta, std::move(star));
      } else {
        std::int64_t a = std::get<std::int64_t>(it->second);
        std::int64_t b = std::get<std::int64_t>(v);
        n.values.emplace(beta, b - a);
      }
    }
    out.nodes.push_back(std::move(n));
  }
  // order kept aligned with the input window (psi is applied nodewise)
  return out;
}

TreeWindow meet_closure(const TreeWindow& w) {
  TreeWindow out = w;
  bool grew = true;
  while (grew) {
    grew = false;
    std::size_t n = out.nodes.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        DeltaMeet dm = delta_meet(out.nodes[i], out.nodes[j]);
        if (!out.find(dm.meet)) {
          out.nodes.push_back(dm.meet);
          grew = true;
        }
      }
  }
  std::sort(out.nodes.begin(), out.nodes.end(), node_before);
  out.pair_index.clear();
  for (const auto& [key, idx] : w.pair_index) out.pair_index[key] = *out.find(w.nodes[idx]);
  return out;
}

}  // namespace ordwalk
