#pragma once

#include <array>
#include <functional>
#include <set>

#include "ordwalk/trees.hpp"

namespace ordwalk {

// A regressive node colouring on selected (infinite limit) cuts that is
// injective on the window's chains.
struct GoodColouring {
  std::string provenance;
  std::vector<Ordinal> levels;             // the club sample D of coloured cuts
  std::map<std::size_t, Ordinal> colours;  // window node index -> colour < cut
};

struct GoodCheck {
  bool regressive = true;
  bool chain_injective = true;
  std::optional<std::size_t> bad_node;
  std::optional<std::pair<std::size_t, std::size_t>> bad_chain;
  bool ok() const { return regressive && chain_injective; }
};

GoodCheck check_good(const TreeWindow& w, const GoodColouring& c);

// specializer: every mapped node goes to a strict probed ancestor
using NodeMap = std::map<std::size_t, TreeNode>;

// the two constructive directions of "special iff good colouring"
GoodColouring specializer_to_good(const TreeWindow& w, const NodeMap& f);
NodeMap good_to_specializer(const TreeWindow& w, const GoodColouring& c);

bool is_antichain(const TreeWindow& w, const std::vector<std::size_t>& nodes);
// Mirsky: minimum antichain cover = longest chain
std::size_t min_antichain_cover(const TreeWindow& w,
                                const std::vector<std::size_t>& nodes);
// exact search, intended for <= 12 nodes
std::size_t min_antichain_cover_brute(const TreeWindow& w,
                                      const std::vector<std::size_t>& nodes);

// Coherent-tree specializer: designated nodes b_delta per level with a map d
// that is regressive and injective on chains of the b's. Requires the window
// to cohere at every designated level.
GoodColouring specialize_via_coherence(const TreeWindow& w,
                                       const std::map<Ordinal, std::size_t>& designated,
                                       const std::map<std::size_t, Ordinal>& d);

// Three-case good colouring of a rho2 window; the least matching witness is
// searched in {cut} ∪ pool ∪ window witnesses.
GoodColouring rho2_good_colouring(const WalkEngine& eng, const TreeWindow& w2,
                                  std::vector<Ordinal> pool);

// colour transfers between the rho0 and rho2 windows (shared provider+probe)
GoodColouring transfer_rho2_to_rho0(const TreeWindow& w0, const TreeWindow& w2,
                                    const GoodColouring& d2);
GoodColouring transfer_rho0_to_rho2(
    const WalkEngine& eng, const TreeWindow& w2,
    const std::function<Ordinal(const Ordinal& witness, const Ordinal& cut)>& d0,
    std::vector<Ordinal> pool);

// s <^A t: lex below meets whose colour is in A, reversed elsewhere.
// The colouring must cover every meet of the window.
bool flipped_less(const TreeWindow& w, const std::map<std::size_t, Ordinal>& colour,
                  const std::vector<Ordinal>& A, std::size_t i, std::size_t j);

struct FlipCheck {
  bool total_order = true;
  std::string violation;
};

// totality, antisymmetry and transitivity over all window triples
FlipCheck flipped_order_check(const TreeWindow& w,
                              const std::map<std::size_t, Ordinal>& colour,
                              const std::vector<Ordinal>& A);

struct RainbowReport {
  bool rainbow_free = true;
  std::optional<std::array<Ordinal, 3>> witness;
  std::map<std::pair<Ordinal, Ordinal>, Ordinal> pair_colours;
};

// d(a,b) := colour(node_a ∧ node_b) over ordinal-labelled maximal nodes,
// with an all-triples rainbow scan
RainbowReport induced_pair_colouring(const TreeWindow& w,
                                     const std::map<std::size_t, Ordinal>& colour,
                                     const std::vector<Ordinal>& witnesses);

}  // namespace ordwalk
