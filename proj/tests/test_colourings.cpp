#include "doctest.h"
#include "ordwalk/colourings.hpp"
#include "ordwalk/rng.hpp"

using namespace ordwalk;

namespace {

Ordinal O(const std::string& s) { return parse_ordinal(s); }

std::vector<Ordinal> ords(std::initializer_list<const char*> xs) {
  std::vector<Ordinal> v;
  for (auto* x : xs) v.push_back(O(x));
  return v;
}

TreeWindow medium_window(const WalkEngine& eng, TreeFamily fam) {
  return build_window(
      eng, fam,
      ords({"w^2", "w^2+w", "w^2+w*3+1", "w^2*2", "w^2*2+w*2", "w^2*3+4", "w*9+1"}),
      ords({"w", "w*4", "w^2", "w^2+w*3", "w^2*2"}),
      ords({"0", "1", "3", "w", "w+2", "w*3", "w*3+2", "w^2", "w^2+w", "w^2+1"}));
}

}  // namespace

TEST_CASE("constant zero is good on an antichain level") {
  WalkEngine eng(canonical_provider(O("w^3")));
  auto w = build_window(eng, TreeFamily::rho0,
                        ords({"w^2", "w^2+w", "w^2*2"}), ords({"w^2"}),
                        ords({"0", "1", "w", "w*2"}));
  GoodColouring c;
  c.provenance = "constant-zero";
  c.levels = {O("w^2")};
  for (auto i : w.level(O("w^2")))
    c.colours[i] = Ordinal();
  CHECK(is_antichain(w, w.level(O("w^2"))));
  CHECK(check_good(w, c).ok());
}

TEST_CASE("specializer to good colouring and back") {
  WalkEngine eng(canonical_provider(O("w^3")));
  auto w = medium_window(eng, TreeFamily::rho0);
  REQUIRE(w.nodes.size() >= 12);

  // the canonical specializer: drop to the previous requested cut
  NodeMap f;
  for (std::size_t i = 0; i < w.nodes.size(); ++i) {
    const TreeNode& x = w.nodes[i];
    if (x.cut.is_zero()) continue;
    Ordinal below;
    for (const auto& c : w.cuts())
      if (c < x.cut && below < c) below = c;
    f[i] = restrict_node(x, below);
  }
  GoodColouring good = specializer_to_good(w, f);
  CHECK(check_good(w, good).ok());
  CHECK(!good.colours.empty());

  NodeMap back = good_to_specializer(w, good);
  // preimages at successor heights are antichains; all preimages decompose
  // into at most window-many antichains
  std::map<std::string, std::vector<std::size_t>> pre;
  for (const auto& [i, target] : back) {
    CHECK(node_subset(target, w.nodes[i]));
    CHECK(target.cut < w.nodes[i].cut);
    std::string key = target.cut.render() + "#" + std::to_string(target.values.size());
    for (const auto& [k, v] : target.values) key += value_render(v);
    pre[key].push_back(i);
  }
  for (const auto& [key, xs] : pre) {
    CHECK(min_antichain_cover(w, xs) <= w.nodes.size());
    if (xs.size() <= 9) {
      CHECK(min_antichain_cover(w, xs) == min_antichain_cover_brute(w, xs));
    }
  }
  // preimages over successor-height targets are antichains
  std::map<std::string, std::vector<std::size_t>> by_successor_target;
  for (const auto& [i, target] : back)
    if (target.cut.is_successor()) {
      std::string key = target.cut.render();
      for (const auto& [k, v] : target.values) key += "|" + value_render(v);
      by_successor_target[key].push_back(i);
    }
  CHECK(!by_successor_target.empty());
  for (const auto& [key, xs] : by_successor_target) CHECK(is_antichain(w, xs));

  // a non-regressive specializer is rejected with a witness
  NodeMap bad = f;
  for (auto& [i, target] : bad) {
    target = w.nodes[i];  // not strictly below
    break;
  }
  CHECK_THROWS_AS(specializer_to_good(w, bad), std::invalid_argument);
}

TEST_CASE("mirsky cover equals brute force on small posets") {
  WalkEngine eng(canonical_provider(O("w^3")));
  auto w = medium_window(eng, TreeFamily::rho0);
  Rng g(11);
  for (int it = 0; it < 40; ++it) {
    std::vector<std::size_t> sample;
    for (std::size_t i = 0; i < w.nodes.size(); ++i)
      if (g.below(3) == 0 && sample.size() < 10) sample.push_back(i);
    CHECK(min_antichain_cover(w, sample) == min_antichain_cover_brute(w, sample));
  }
}

TEST_CASE("coherent specializer over a rho1 window") {
  WalkEngine eng(canonical_provider(O("w^3")));
  auto w = build_window(eng, TreeFamily::rho1,
                        ords({"w^2", "w^2+w", "w^2*2", "w^2*2+w*2"}),
                        ords({"w^2", "w^2*2"}),
                        ords({"0", "2", "w", "w*2+1", "w^2", "w^2+w"}));
  std::map<Ordinal, std::size_t> designated;
  std::map<std::size_t, Ordinal> d;
  for (const Ordinal& lv : {O("w^2"), O("w^2*2")}) {
    auto node = w.node_of(lv, lv);
    REQUIRE(node);
    designated[lv] = *node;
    d[*node] = *eng.provider().c_at(lv).min_at_least(Ordinal());
  }
  GoodColouring f = specialize_via_coherence(w, designated, d);
  CHECK(check_good(w, f).ok());
  CHECK(f.colours.size() == w.level(O("w^2")).size() + w.level(O("w^2*2")).size());

  // adversarial d constant on a chain is rejected
  auto n1 = w.node_of(O("w^2"), O("w^2"));
  auto n2 = w.node_of(O("w^2*2"), O("w^2*2"));
  REQUIRE(n1);
  REQUIRE(n2);
  if (node_subset(w.nodes[*n1], w.nodes[*n2])) {
    std::map<std::size_t, Ordinal> dbad = d;
    dbad[*n2] = dbad[*n1];
    CHECK_THROWS_AS(specialize_via_coherence(w, designated, dbad),
                    std::invalid_argument);
  }
}

TEST_CASE("rho2 three-case colouring is good") {
  WalkEngine eng(canonical_provider(O("w^3")));
  auto w2 = medium_window(eng, TreeFamily::rho2);
  GoodColouring c = rho2_good_colouring(eng, w2, ords({"w^2*3+4", "w^2*2+w*2"}));
  CHECK(check_good(w2, c).ok());
  // every infinite-limit-cut node got a colour
  std::size_t expected = 0;
  for (const auto& n : w2.nodes)
    if (n.cut.is_limit()) ++expected;
  CHECK(c.colours.size() == expected);
}

TEST_CASE("transfers between rho0 and rho2 windows") {
  WalkEngine eng(canonical_provider(O("w^3")));
  auto w0 = medium_window(eng, TreeFamily::rho0);
  auto w2 = medium_window(eng, TreeFamily::rho2);
  auto pool = ords({"w^2*3+4", "w^2*2+w*2"});

  GoodColouring d2 = rho2_good_colouring(eng, w2, pool);
  GoodColouring c0 = transfer_rho2_to_rho0(w0, w2, d2);
  CHECK(check_good(w0, c0).ok());

  // comparable rho0 nodes have comparable length images, so colours differ
  for (const auto& [i, ci] : c0.colours)
    for (const auto& [j, cj] : c0.colours) {
      if (i == j) continue;
      if (node_subset(w0.nodes[i], w0.nodes[j]) && w0.nodes[i].cut < w0.nodes[j].cut)
        CHECK(!(ci == cj));
    }

  auto d0fn = [&](const Ordinal& witness, const Ordinal& cut) {
    // any regressive chain-injective stand-in: colour by the exact pair
    return c0.colours.count(0) ? Ordinal::from_uint((witness.hash() ^ cut.hash()) % 1024)
                               : Ordinal();
  };
  GoodColouring c2 = transfer_rho0_to_rho2(eng, w2, d0fn, pool);
  CHECK(check_good(w2, c2).regressive);
}

TEST_CASE("flipped orders: full palette is lex, empty palette is reverse") {
  WalkEngine eng(canonical_provider(O("w^3")));
  auto w = meet_closure(build_window(eng, TreeFamily::rho0,
                                     ords({"w+3", "w+4", "w*2", "w*2+5"}),
                                     ords({"w", "w+3", "w*2"}),
                                     ords({"0", "1", "4", "w"})));
  Rng g(99);
  std::map<std::size_t, Ordinal> colour;
  for (std::size_t i = 0; i < w.nodes.size(); ++i)
    colour[i] = Ordinal::from_uint(g.below(3));

  std::vector<Ordinal> full = {O("0"), O("1"), O("2")};
  std::vector<Ordinal> none;
  for (std::size_t i = 0; i < w.nodes.size(); ++i)
    for (std::size_t j = 0; j < w.nodes.size(); ++j) {
      if (i == j) continue;
      bool lex_ij = lex_compare(w.nodes[i], w.nodes[j]) == std::strong_ordering::less;
      CHECK(flipped_less(w, colour, full, i, j) == lex_ij);
      CHECK(flipped_less(w, colour, none, i, j) == !lex_ij);
    }

  CHECK(flipped_order_check(w, colour, full).total_order);
  CHECK(flipped_order_check(w, colour, none).total_order);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    Rng ga(seed);
    std::vector<Ordinal> A;
    for (std::uint64_t v = 0; v < 3; ++v)
      if (ga.below(2)) A.push_back(Ordinal::from_uint(v));
    CHECK(flipped_order_check(w, colour, A).total_order);
  }
}

TEST_CASE("induced pair colourings have no rainbow triangles") {
  WalkEngine eng(canonical_provider(O("w^3")));
  Rng g(12321);
  for (int it = 0; it < 30; ++it) {
    std::vector<Ordinal> witnesses;
    while (witnesses.size() < 5) {
      Ordinal b = rand_below(O("w^3"), g);
      if (b.is_zero()) continue;
      bool dup = false;
      for (const auto& x : witnesses) dup = dup || x == b;
      if (!dup) witnesses.push_back(b);
    }
    std::vector<Ordinal> cuts = witnesses;
    auto w = meet_closure(
        build_window(eng, TreeFamily::rho0, witnesses, cuts, ords({"0", "1", "w"})));
    std::map<std::size_t, Ordinal> colour;
    for (std::size_t i = 0; i < w.nodes.size(); ++i)
      colour[i] = Ordinal::from_uint(g.below(4));
    auto rep = induced_pair_colouring(w, colour, witnesses);
    CHECK(rep.rainbow_free);

    // two witnesses: vacuous pass
    auto rep2 = induced_pair_colouring(w, colour, {witnesses[0], witnesses[1]});
    CHECK(rep2.rainbow_free);
  }
}

TEST_CASE("chain witnesses share at most two meet colours") {
  WalkEngine eng(canonical_provider(O("w^3")));
  // three fibers on one chain: meets coincide pairwise
  auto witnesses = ords({"w*2", "w*2+1", "w*2+2"});
  auto w = meet_closure(build_window(eng, TreeFamily::rho0, witnesses, witnesses,
                                     ords({"0", "1", "w"})));
  std::map<std::size_t, Ordinal> colour;
  for (std::size_t i = 0; i < w.nodes.size(); ++i)
    colour[i] = Ordinal::from_uint(i % 5);
  auto rep = induced_pair_colouring(w, colour, witnesses);
  std::set<Ordinal> distinct;
  for (const auto& [pr, c] : rep.pair_colours) distinct.insert(c);
  CHECK(distinct.size() <= 2);
}

TEST_CASE("rho2 colouring: equal case-0 data gives equal colours") {
  WalkEngine eng(canonical_provider(O("w^3")));
  // two maximal nodes whose own ladders have the same order type
  auto w2 = build_window(eng, TreeFamily::rho2, ords({"w*2", "w*3"}),
                         ords({"w*2", "w*3"}), ords({"0", "1", "w", "w+1"}));
  GoodColouring c = rho2_good_colouring(eng, w2, {});
  auto a = w2.node_of(O("w*2"), O("w*2"));
  auto b = w2.node_of(O("w*3"), O("w*3"));
  REQUIRE(a);
  REQUIRE(b);
  // both fall into the self-witness case with otp(C_gamma) = w
  CHECK(c.colours.at(*a) == c.colours.at(*b));
}
