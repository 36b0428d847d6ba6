// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run through ctest or directly:
//   ./acceptance --cli ./ordwalk

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ordwalk/colourings.hpp"
#include "ordwalk/json_io.hpp"
#include "ordwalk/partition_lab.hpp"
#include "ordwalk/projections.hpp"
#include "ordwalk/rng.hpp"

using namespace ordwalk;

namespace {

Ordinal O(const std::string& s) { return parse_ordinal(s); }

int g_failures = 0;

struct Criterion {
  int id;
  std::string what;
  std::chrono::steady_clock::time_point start;
  Criterion(int id_, std::string what_)
      : id(id_), what(std::move(what_)), start(std::chrono::steady_clock::now()) {}
  void done(bool ok, const std::string& detail = "") {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::printf("criterion %2d: %s  %s (%lld ms)%s%s\n", id, ok ? "PASS" : "FAIL",
                what.c_str(), static_cast<long long>(ms), detail.empty() ? "" : " — ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
  }
};

// ---------------------------------------------------------------- 1..3

void criterion1() {
  Criterion c(1, "two-colour projections: exhaustive scan + CRT witnesses");
  auto r1 = verify_hn(build_family(1));
  auto r2 = verify_hn(build_family(2));
  bool ok = r1.ok && r2.ok && r1.cases == 4 && r2.cases == 450;
  c.done(ok, std::to_string(r1.cases + r2.cases) + " cases");
}

void criterion2() {
  Criterion c(2, "level projections g: exhaustive and randomised witnesses");
  auto f1 = build_family(1);
  auto f2 = build_family(2);
  auto a = verify_gn_exhaustive(f1, 3, 256);
  auto b = verify_gn_exhaustive(f2, 1, 225);
  auto r = verify_gn_random(f2, 1, 10000, 1000000000ull, 0x6071);
  bool ok = a.ok && b.ok && r.ok;
  c.done(ok, std::to_string(a.cases + b.cases + r.cases) + " cases");
}

void criterion3() {
  Criterion c(3, "signed projections f: both branches + negative control");
  auto f1 = verify_fn(build_family(1), 2, 8, -10000, 10000, 50, 0xf17);
  auto f2 = verify_fn(build_family(2), 2, 8, -10000, 10000, 50, 0xf18);
  bool branches = f1.branch_reflect > 0 && f1.branch_nonneg > 0 &&
                  f2.branch_reflect > 0 && f2.branch_nonneg > 0;
  bool neg = fn_negative_control(10000);
  bool ok = f1.ok && f2.ok && branches && neg;
  c.done(ok, std::to_string(f1.cases + f2.cases) + " cases");
}

// ---------------------------------------------------------------- 4..6

void criterion4() {
  Criterion c(4, "walk decomposition identity on 10^4 random triples");
  WalkEngine eng(canonical_provider(O("w^w")));
  Rng g(0x416);
  Ordinal bound = O("w^6");
  const Ordinal one = Ordinal::from_uint(1);
  int done = 0, bad = 0;
  while (done < 10000) {
    Ordinal gamma = rand_below(bound, g);
    if (gamma.is_zero()) continue;
    Ordinal beta = rand_below(gamma, g);
    if (beta.is_zero()) continue;
    WalkReport wbg = eng.walk(beta, gamma);
    if (!(wbg.lambda < beta) || !(wbg.lambda + one < beta)) continue;
    Ordinal alpha =
        wbg.lambda + one + rand_below(Ordinal::sub_left(wbg.lambda + one, beta), g);
    if (!(wbg.lambda < alpha) || !(alpha < beta)) continue;
    ++done;
    WalkReport wag = eng.walk(alpha, gamma);
    WalkReport wab = eng.walk(alpha, beta);
    std::vector<Ordinal> glued = wbg.trace;
    glued.insert(glued.end(), wab.trace.begin(), wab.trace.end());
    if (wag.trace != glued) ++bad;
  }
  c.done(bad == 0, std::to_string(done) + " triples");
}

void criterion5() {
  Criterion c(5, "lex monotonicity of fibers and the last-ordinal laws");
  WalkEngine eng(canonical_provider(O("w^w")));
  Rng g(0x517);
  Ordinal bound = O("w^5");
  int done = 0, bad = 0;
  while (done < 1000) {
    Ordinal gamma = rand_below(bound, g);
    if (gamma.is_zero()) continue;
    Ordinal beta = rand_below(gamma, g);
    if (beta.is_zero()) continue;
    Ordinal alpha = rand_below(beta, g);
    if (alpha.is_zero()) continue;
    ++done;
    WalkReport wa = eng.walk(alpha, gamma);
    WalkReport wb = eng.walk(beta, gamma);
    if (lex_compare_seq(wa.rho0, wb.rho0) != std::strong_ordering::less) ++bad;
    if (!(wb.lambda2 < beta)) ++bad;
    WalkReport wl = eng.walk(wb.last, gamma);
    if (!(wl.lambda < beta)) ++bad;
    if (wl.trace.size() > wb.trace.size()) ++bad;
    for (std::size_t i = 0; i < wl.trace.size(); ++i)
      if (!(wl.trace[i] == wb.trace[i])) ++bad;
    if (!(wb.last == beta)) {
      ClosedSet cl = eng.provider().c_at(wb.last);
      if (!(cl.sup_below(beta) == beta)) ++bad;
    }
  }
  c.done(bad == 0, std::to_string(done) + " pairs");
}

void criterion6() {
  Criterion c(6, "fiber deltas avoid accumulation points (nacc: zero or successor)");
  WalkEngine eng(canonical_provider(O("w^3")));
  Rng g(0x611);
  Ordinal bound = O("w^3");
  int pairs = 0, limits = 0, zeros = 0, succs = 0;
  while (pairs < 1000) {
    Ordinal a = rand_below(bound, g);
    Ordinal b = rand_below(bound, g);
    if (a.is_zero() || b.is_zero() || a == b) continue;
    FiberDelta d0 = fiber_delta_exact(eng, Family::rho0, a, b);
    if (d0.comparable) continue;
    ++pairs;
    if (d0.delta.is_limit()) ++limits;
    if (d0.delta.is_zero()) ++zeros;
    if (d0.delta.is_successor()) ++succs;
    FiberDelta d2 = fiber_delta_exact(eng, Family::rho2, a, b);
    if (!d2.comparable && d2.delta.is_limit()) ++limits;
  }
  c.done(limits == 0, std::to_string(pairs) + " pairs, " + std::to_string(succs) +
                          " successor + " + std::to_string(zeros) +
                          " zero deltas; the lemma bounds them out of acc");
}

// ---------------------------------------------------------------- 7

TreeWindow big_window(WalkEngine& eng, TreeFamily fam, const OrdSet* club,
                      std::vector<Ordinal>* witnesses_out) {
  std::vector<Ordinal> witnesses;
  for (int a = 1; a <= 3; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int n : {0, 2, 3}) {
        Ordinal x = Ordinal::omega_pow(Ordinal::from_uint(2), a);
        if (b) x = x + Ordinal::omega_pow(Ordinal::from_uint(1), b);
        if (n) x = x + Ordinal::from_uint(n);
        witnesses.push_back(x);
      }
  std::vector<Ordinal> cuts = {O("w"),       O("w*2"),       O("w*2+1"),
                               O("w*3+1"),   O("w*4"),       O("w^2"),
                               O("w^2+w"),   O("w^2+w*3"),   O("w^2*2"),
                               O("w^2*2+w*2"), O("w^2*2+w*4+1"), O("w^2*3"),
                               O("w^2*3+w")};
  std::vector<Ordinal> probe = {O("0"), O("1"), O("2"), O("w"), O("w+1"), O("w*2"),
                                O("w*2+4"), O("w*3"), O("w^2"), O("w^2+w"), O("w^2+1")};
  for (std::size_t i = 0; i < witnesses.size(); ++i)
    for (std::size_t j = i + 1; j < witnesses.size(); ++j) {
      Family f = fam == TreeFamily::rho2 ? Family::rho2 : Family::rho0;
      FiberDelta fd = fiber_delta_exact(eng, f, witnesses[i], witnesses[j]);
      if (!fd.comparable) probe.push_back(fd.delta);
    }
  if (witnesses_out) *witnesses_out = witnesses;
  return build_window(eng, fam, witnesses, cuts, probe, club);
}

void criterion7() {
  Criterion c(7, "flattening preserves domain/extension/lex/delta; image coheres");
  Ordinal bound = O("w^3");
  WalkEngine eng(canonical_provider(bound));
  auto club = multiples_of_omega_pow(1, bound);
  bool ok = true;
  std::string detail;
  std::size_t total_nodes = 0;
  for (TreeFamily fam : {TreeFamily::rho0, TreeFamily::rho2}) {
    TreeWindow w = big_window(eng, fam, club.get(), nullptr);
    total_nodes += w.nodes.size();
    TreeWindow flat = flatten_psi(w, *club);
    if (flat.nodes.size() != w.nodes.size()) ok = false;
    for (std::size_t i = 0; i < w.nodes.size() && ok; ++i) {
      if (!(flat.nodes[i].cut == w.nodes[i].cut) ||
          flat.nodes[i].values.size() != w.nodes[i].values.size())
        ok = false;
      for (std::size_t j = 0; j < w.nodes.size() && ok; ++j) {
        if (i == j) continue;
        if (node_subset(w.nodes[i], w.nodes[j]) !=
            node_subset(flat.nodes[i], flat.nodes[j]))
          ok = false;
        DeltaMeet a = delta_meet(w.nodes[i], w.nodes[j]);
        DeltaMeet b = delta_meet(flat.nodes[i], flat.nodes[j]);
        if (a.comparable != b.comparable) ok = false;
        if (!a.comparable && ok) {
          if (!(a.delta == b.delta)) ok = false;
          if (lex_compare(w.nodes[i], w.nodes[j]) !=
              lex_compare(flat.nodes[i], flat.nodes[j]))
            ok = false;
        }
      }
    }
    // coherence of the image at the A-flagged acc(E) levels present
    for (const auto& cut : flat.cuts()) {
      if (cut.is_zero() || !club->accumulates_at(cut)) continue;
      if (!characteristics_window(eng.provider(), cut, bound).A) continue;
      if (!coherence_check(flat, cut).ok) {
        ok = false;
        detail = "incoherent at " + cut.render();
      }
    }
  }
  c.done(ok && total_nodes >= 200,
         detail.empty() ? std::to_string(total_nodes) + " nodes, exhaustive pairs"
                        : detail);
}

// ---------------------------------------------------------------- 8

void criterion8() {
  Criterion c(8, "all colouring factories good; ladder-transform pipeline works");
  Ordinal bound = O("w^3");
  WalkEngine eng(canonical_provider(bound));
  bool ok = true;
  std::string detail;

  std::vector<Ordinal> witnesses;
  TreeWindow w0 = big_window(eng, TreeFamily::rho0, nullptr, &witnesses);
  TreeWindow w2 = big_window(eng, TreeFamily::rho2, nullptr, nullptr);
  if (w0.nodes.size() < 100 || w2.nodes.size() < 100) {
    ok = false;
    detail = "windows too small";
  }

  // specializer -> good colouring -> specializer
  NodeMap f;
  for (std::size_t i = 0; i < w0.nodes.size(); ++i) {
    const TreeNode& x = w0.nodes[i];
    if (x.cut.is_zero()) continue;
    Ordinal below;
    for (const auto& cut : w0.cuts())
      if (cut < x.cut && below < cut) below = cut;
    f[i] = restrict_node(x, below);
  }
  GoodColouring via_spec = specializer_to_good(w0, f);
  if (!check_good(w0, via_spec).ok()) {
    ok = false;
    detail = "specializer_to_good failed";
  }
  NodeMap back = good_to_specializer(w0, via_spec);
  for (const auto& [i, target] : back)
    if (!(target.cut < w0.nodes[i].cut) || !node_subset(target, w0.nodes[i])) {
      ok = false;
      detail = "good_to_specializer not regressive";
    }

  // the rho2 three-case colouring, and both transfers
  GoodColouring d2 = rho2_good_colouring(eng, w2, witnesses);
  if (!check_good(w2, d2).ok()) {
    ok = false;
    detail = "rho2 colouring failed";
  }
  GoodColouring c0 = transfer_rho2_to_rho0(w0, w2, d2);
  if (!check_good(w0, c0).ok()) {
    ok = false;
    detail = "rho2->rho0 transfer failed";
  }
  {
    // d0: injective coding of the rho0 fibers themselves
    auto d0 = [&eng, &w0](const Ordinal& witness, const Ordinal& cut) {
      std::uint64_t h = 1469598103934665603ull;
      for (const auto& p : w0.probe_below(cut)) {
        for (const auto& v : eng.walk(p, witness).rho0) {
          h ^= v.hash();
          h *= 1099511628211ull;
        }
        h ^= 0x9e37;
      }
      return Ordinal::from_uint(h % 100000);
    };
    GoodColouring c2 = transfer_rho0_to_rho2(eng, w2, d0, witnesses);
    auto chk = check_good(w2, c2);
    if (!chk.regressive) {
      ok = false;
      detail = "rho0->rho2 transfer not regressive";
    }
  }

  // ladder-transform pipeline: transformed ladders, d = min(C_delta), coherent
  // specializer over a rho1 window
  {
    Ordinal tbound = O("w^4");
    std::vector<std::shared_ptr<OrdSet>> parts;
    for (std::uint64_t i = 0; i < 14; ++i)
      parts.push_back(omega_coeff_residues(i + 1, 16, tbound));
    auto club = multiples_of_omega_pow(2, tbound);
    auto transformed = transform_ladders(canonical_provider(tbound), parts, club);
    auto gap = transform_guarantee_check(*transformed, club, tbound, 3, 8);
    if (!gap.all_ok) {
      ok = false;
      detail = "transform order-type gap failed";
    }
    WalkEngine teng(transformed);
    std::vector<Ordinal> levels = {O("w^3"), O("w^3*2"), O("w^3*3")};
    std::vector<Ordinal> tw = levels;
    tw.push_back(O("w^3*3+w^2*2"));
    tw.push_back(O("w^3*2+w*5"));
    // the transformed rungs themselves discriminate the level fibers, so
    // they must be probe points
    std::vector<Ordinal> probe = {O("0"), O("w"), O("w*5"), O("w^2"), O("w^2+w")};
    for (const auto& lv : levels) {
      ClosedSet cs = transformed->c_at(lv);
      Ordinal at;
      for (int k = 0; k < 10; ++k) {
        auto r = cs.min_at_least(k == 0 ? Ordinal() : at + Ordinal::from_uint(1));
        if (!r) break;
        at = *r;
        probe.push_back(at);
      }
    }
    TreeWindow w1 = build_window(teng, TreeFamily::rho1, tw, levels, probe);
    std::map<Ordinal, std::size_t> designated;
    std::map<std::size_t, Ordinal> d;
    for (const auto& lv : levels) {
      auto idx = w1.node_of(lv, lv);
      if (!idx) {
        ok = false;
        detail = "missing designated node";
        break;
      }
      designated[lv] = *idx;
      d[*idx] = *transformed->c_at(lv).min_at_least(Ordinal());
    }
    if (ok) {
      GoodColouring pipeline = specialize_via_coherence(w1, designated, d);
      if (!check_good(w1, pipeline).ok()) {
        ok = false;
        detail = "pipeline colouring failed";
      }
    }
  }

  c.done(ok, detail.empty()
                 ? std::to_string(w0.nodes.size()) + "+" + std::to_string(w2.nodes.size()) +
                       " nodes across the two windows"
                 : detail);
}

// ---------------------------------------------------------------- 9..10

void criterion9() {
  Criterion c(9, "stabilisation scenarios: both equations at every admissible point");
  int made = 0, bad = 0;
  std::uint64_t qualifying = 0;
  for (std::uint64_t b : {1ull, 2ull, 3ull, 4ull}) {
    for (std::uint64_t cc : {2ull, 5ull, 7ull}) {
      if (b + 1 == cc) continue;
      for (std::uint64_t m : {1ull, 2ull, 3ull}) {
        std::uint64_t n = 1 + (b + cc + m) % 3;
        auto inst = stabiliser_instance(b, cc, m, n);
        auto res = stabiliser_scenario(inst);
        ++made;
        qualifying += res.qualifying;
        if (!res.ok || res.qualifying < 2) ++bad;
      }
    }
  }
  c.done(made >= 20 && bad == 0,
         std::to_string(made) + " instances, " + std::to_string(qualifying) +
             " verified points");
}

void criterion10() {
  Criterion c(10, "induced pair colourings: no rainbow triangles in 100 windows");
  WalkEngine eng(canonical_provider(O("w^3")));
  Rng g(0xabc);
  int bad = 0;
  for (int it = 0; it < 100; ++it) {
    std::vector<Ordinal> witnesses;
    while (witnesses.size() < 5) {
      Ordinal b = rand_below(O("w^3"), g);
      if (b.is_zero()) continue;
      bool dup = false;
      for (const auto& x : witnesses) dup = dup || x == b;
      if (!dup) witnesses.push_back(b);
    }
    auto w = meet_closure(build_window(eng, TreeFamily::rho0, witnesses, witnesses,
                                       {O("0"), O("1"), O("w")}));
    std::map<std::size_t, Ordinal> colour;
    for (std::size_t i = 0; i < w.nodes.size(); ++i)
      colour[i] = Ordinal::from_uint(g.below(5));
    if (!induced_pair_colouring(w, colour, witnesses).rainbow_free) ++bad;
  }
  c.done(bad == 0, "100 windows, all-triples scans");
}

// ---------------------------------------------------------------- 11

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion11(const std::string& cli) {
  Criterion c(11, "seeded CLI reruns are byte-identical");
  if (cli.empty()) {
    c.done(false, "no --cli path given");
    return;
  }
  std::vector<json> configs;
  configs.push_back(json{
      {"op", "walk"},
      {"seed", 7},
      {"params",
       json{{"beta", "w*3+4"}, {"gamma", "w^2*2"},
            {"provider", json{{"kind", "canonical"}, {"bound", "w^3"}}}}}});
  configs.push_back(json{{"op", "proj_verify"},
                         {"seed", 99},
                         {"params", json{{"n", 2}, {"lemma", "gn"}, {"mode", "random"},
                                         {"lmax", 1}, {"count", 200},
                                         {"range", 100000}}}});
  configs.push_back(json{
      {"op", "cseq_report"},
      {"params", json{{"delta", "w^2"}, {"hi", "w^2*2"},
                      {"provider", json{{"kind", "canonical"}, {"bound", "w^3"}}}}}});
  bool ok = true;
  for (std::size_t i = 0; i < configs.size() && ok; ++i) {
    std::string cfg = "/tmp/ordwalk_accept_cfg" + std::to_string(i) + ".json";
    std::string o1 = "/tmp/ordwalk_accept_a" + std::to_string(i) + ".json";
    std::string o2 = "/tmp/ordwalk_accept_b" + std::to_string(i) + ".json";
    for (const auto& [cpath, opath] : {std::pair{cfg, o1}, std::pair{cfg, o2}}) {
      json withme = configs[i];
      withme["out"] = opath;
      std::ofstream f(cpath);
      f << withme.dump();
      f.close();
      std::string cmd = cli + " run --config " + cpath + " >/dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) ok = false;
    }
    if (ok) {
      std::string a = slurp(o1), b = slurp(o2);
      if (a.empty() || a != b) ok = false;
    }
  }
  c.done(ok, std::to_string(configs.size()) + " configs, two runs each");
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11(cli);

  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
