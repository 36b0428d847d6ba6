#pragma once

#include <cstdint>
#include <map>
#include <variant>

#include "ordwalk/walks.hpp"

namespace ordwalk {

enum class TreeFamily { rho0, rho1, rho2, rho0_flat, rho2_flat };

std::string family_name(TreeFamily f);

// rho0 / rho0_flat carry finite ordinal sequences, rho1 an ordinal,
// rho2 / rho2_flat an integer
using OrdSeq = std::vector<Ordinal>;
using FiberValue = std::variant<OrdSeq, Ordinal, std::int64_t>;

bool value_eq(const FiberValue& a, const FiberValue& b);
// Kleene-Brouwer value order (clause (ii) for ordinals/integers, (iii) for sequences)
std::strong_ordering value_cmp(const FiberValue& a, const FiberValue& b);
std::string value_render(const FiberValue& v);

struct TreeNode {
  Ordinal witness;  // first witness that produced the node
  Ordinal cut;
  std::map<Ordinal, FiberValue> values;  // keyed by the probe points < cut
};

// A finite fragment of T(rho_i): deduplicated fibers restricted to a probe.
// Every equality / meet / lex verdict is relative to the recorded probe.
class TreeWindow {
 public:
  TreeFamily family = TreeFamily::rho0;
  std::vector<Ordinal> probe;  // sorted, closure-extended at build time
  std::vector<TreeNode> nodes; // sorted by (cut, values)
  std::uint64_t provider_hash = 0;
  // every requested (witness, cut) pair, including the deduplicated ones
  std::map<std::pair<Ordinal, Ordinal>, std::size_t> pair_index;

  std::vector<Ordinal> cuts() const;
  std::vector<std::size_t> level(const Ordinal& cut) const;
  // index of the deduplicated node equal to n, if present
  std::optional<std::size_t> find(const TreeNode& n) const;
  std::optional<std::size_t> node_of(const Ordinal& witness, const Ordinal& cut) const;
  std::vector<Ordinal> probe_below(const Ordinal& cut) const;
  std::uint64_t probe_hash() const;
  std::uint64_t hash() const;
};

// Materializes the fibers of every (witness, cut) pair with cut <= witness.
// The probe is closed under the trace ordinals and the ladder points touched
// while walking; 0 is always a probe point. When a club is supplied the
// probe is additionally closed under beta -> sup(club ∩ beta), which
// flatten_psi needs.
TreeWindow build_window(const WalkEngine& eng, TreeFamily fam,
                        const std::vector<Ordinal>& witnesses,
                        const std::vector<Ordinal>& cuts,
                        std::vector<Ordinal> probe0,
                        const OrdSet* club = nullptr);

bool node_subset(const TreeNode& s, const TreeNode& t);  // probed s ⊆ t
TreeNode restrict_node(const TreeNode& t, const Ordinal& cut);

struct DeltaMeet {
  bool comparable = false;
  Ordinal delta;   // least probe point of disagreement when incomparable
  TreeNode meet;   // restriction to delta (or the smaller node when comparable)
};

DeltaMeet delta_meet(const TreeNode& s, const TreeNode& t);

// Definition-2.9 order: a proper extension sorts below its prefix; otherwise
// the value order at the first probed disagreement decides
std::strong_ordering lex_compare(const TreeNode& s, const TreeNode& t);

struct CoherenceResult {
  bool ok = true;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // offending pair
};

// every pair of level-delta nodes agrees from some probe point on
CoherenceResult coherence_check(const TreeWindow& w, const Ordinal& delta);

// The flattening t -> t* applied pointwise with alpha = sup(E ∩ beta):
//   alpha = beta        ->  empty value
//   alpha < beta        ->  <|t(alpha)| - |meet|> ⌢ suffix   (rho0)
//                           t(beta) - t(alpha)               (rho2, integers)
// Coordinate 0 is kept verbatim (the sup formula degenerates there).
// Every needed alpha must be a probe point. rho0 -> rho0_flat, rho2 -> rho2_flat.
TreeWindow flatten_psi(const TreeWindow& w, const OrdSet& E);

// window extended by all pairwise meets (colouring domains need them)
TreeWindow meet_closure(const TreeWindow& w);

}  // namespace ordwalk
