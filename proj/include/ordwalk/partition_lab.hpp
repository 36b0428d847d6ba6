#pragma once

#include "ordwalk/colourings.hpp"

namespace ordwalk {

// A finite instance of the meet partition check: a lex-ordered window, a node
// colouring, and a height-rapid family S of n-tuples of nodes.
struct MeetInstance {
  TreeWindow window;  // meet-closed
  std::map<std::size_t, Ordinal> colour;
  std::uint64_t n = 1;
  std::uint64_t m = 1;
  std::vector<std::vector<std::size_t>> tuples;  // each of size n
};

// rapidity and arity; throws on violation
void validate_meet_instance(const MeetInstance& inst);

struct MeetVerdict {
  bool witness_found = false;
  std::size_t first = 0, second = 0;  // indices into S when found
  // finite-S verdicts are evidence, not refutations of the full statement
  std::string label = "evidence-only";
  std::uint64_t pairs_scanned = 0;
  // pairs failing only the meet-level-count bullet
  std::uint64_t sole_bullet3_failures = 0;
};

MeetVerdict check_meet_clause1(const MeetInstance& inst, const Ordinal& tau);

// Entangledness checker: one column per line, entries are ranks in that
// line's finite linear order; columns must be injective.
struct EntangledInstance {
  std::vector<std::vector<std::uint64_t>> matrix;  // matrix[row][col]
  std::vector<std::uint64_t> pattern;              // 0/1 per column
};

struct EntangledVerdict {
  bool witness_found = false;
  std::size_t alpha = 0, beta = 0;
};

EntangledVerdict check_entangled(const EntangledInstance& inst);

}  // namespace ordwalk
