#include "doctest.h"
#include "ordwalk/json_io.hpp"

using namespace ordwalk;

namespace {
Ordinal O(const std::string& s) { return parse_ordinal(s); }
}

TEST_CASE("provider specs round-trip and build") {
  ProviderSpec s;
  s.kind = "file";
  s.bound = O("w^3");
  s.entries[O("w*2")] = {O("5"), O("w")};
  s.entries[O("w+1")] = {O("w")};
  ProviderSpec back = ProviderSpec::from_json(s.to_json());
  CHECK(back.kind == s.kind);
  CHECK(back.bound == s.bound);
  CHECK(back.entries == s.entries);
  auto p = back.build();
  CHECK(p->c_at(O("w*2")).contains(O("5")));

  ProviderSpec lem;
  lem.kind = "transformed";
  lem.bound = O("w^4");
  lem.parts = 6;
  auto prov = lem.build();
  CHECK(prov->c_at(O("w^2+w*3")).contains(O("0")));  // a padded index
}

TEST_CASE("windows and colourings round-trip through JSON") {
  ProviderSpec spec;
  spec.bound = O("w^3");
  WalkEngine eng(spec.build());
  for (TreeFamily fam : {TreeFamily::rho0, TreeFamily::rho1, TreeFamily::rho2}) {
    auto w = build_window(eng, fam, {O("w*2+1"), O("w^2")}, {O("w"), O("w*2"), O("w^2")},
                          {O("0"), O("3"), O("w"), O("w+4")});
    auto [back, spec2] = window_from_json(window_to_json(w, spec));
    REQUIRE(back.nodes.size() == w.nodes.size());
    CHECK(back.probe == w.probe);
    CHECK(back.family == w.family);
    for (std::size_t i = 0; i < w.nodes.size(); ++i) {
      CHECK(back.nodes[i].cut == w.nodes[i].cut);
      REQUIRE(back.nodes[i].values.size() == w.nodes[i].values.size());
      auto it = w.nodes[i].values.begin();
      for (const auto& [k, v] : back.nodes[i].values) {
        CHECK(k == it->first);
        CHECK(value_eq(v, it->second));
        ++it;
      }
    }
    CHECK(back.pair_index == w.pair_index);
  }

  GoodColouring c;
  c.provenance = "test";
  c.levels = {O("w^2")};
  c.colours[3] = O("w+2");
  c.colours[7] = O("4");
  GoodColouring back = colouring_from_json(colouring_to_json(c));
  CHECK(back.provenance == c.provenance);
  CHECK(back.levels == c.levels);
  CHECK(back.colours.size() == 2);
  CHECK(back.colours.at(3) == O("w+2"));
}

TEST_CASE("DOT export names every node and keeps lex-sorted levels") {
  ProviderSpec spec;
  spec.bound = O("w^3");
  WalkEngine eng(spec.build());
  auto w = build_window(eng, TreeFamily::rho0, {O("w+3"), O("w+4")},
                        {O("0"), O("w"), O("w+3")}, {O("0"), O("1"), O("w")});
  std::string dot = window_to_dot(w);
  CHECK(dot.find("digraph") != std::string::npos);
  for (std::size_t i = 0; i < w.nodes.size(); ++i)
    CHECK(dot.find("n" + std::to_string(i)) != std::string::npos);
  CHECK(dot.find("rank=same") != std::string::npos);
}
