#include "ordwalk/partition_lab.hpp"

#include <algorithm>

namespace ordwalk {

void validate_meet_instance(const MeetInstance& inst) {
  for (const auto& t : inst.tuples) {
    if (t.size() != inst.n)
      throw std::invalid_argument("meet instance: tuple arity mismatch");
    for (auto i : t)
      if (i >= inst.window.nodes.size())
        throw std::invalid_argument("meet instance: node index out of range");
  }
  // height-rapid: the cut ranges of distinct tuples are separated
  auto range = [&](const std::vector<std::size_t>& t) {
    Ordinal lo = inst.window.nodes[t[0]].cut, hi = lo;
    for (auto i : t) {
      const Ordinal& c = inst.window.nodes[i].cut;
      if (c < lo) lo = c;
      if (hi < c) hi = c;
    }
    return std::make_pair(lo, hi);
  };
  for (std::size_t a = 0; a < inst.tuples.size(); ++a)
    for (std::size_t b = a + 1; b < inst.tuples.size(); ++b) {
      auto [la, ha] = range(inst.tuples[a]);
      auto [lb, hb] = range(inst.tuples[b]);
      if (!(ha < lb) && !(hb < la))
        throw std::invalid_argument("meet instance: family is not height-rapid");
    }
}

MeetVerdict check_meet_clause1(const MeetInstance& inst, const Ordinal& tau) {
  validate_meet_instance(inst);
  MeetVerdict out;
  const TreeWindow& w = inst.window;
  for (std::size_t a = 0; a < inst.tuples.size(); ++a) {
    for (std::size_t b = 0; b < inst.tuples.size(); ++b) {
      if (a == b) continue;
      ++out.pairs_scanned;
      bool colours_ok = true, order_ok = true;
      std::set<Ordinal> meet_cuts;
      for (std::uint64_t k = 0; k < inst.n && colours_ok && order_ok; ++k) {
        const TreeNode& x = w.nodes[inst.tuples[a][k]];
        const TreeNode& y = w.nodes[inst.tuples[b][k]];
        DeltaMeet dm = delta_meet(x, y);
        auto mi = w.find(dm.meet);
        if (!mi) throw std::invalid_argument("meet instance: window not meet-closed");
        auto ci = inst.colour.find(*mi);
        if (ci == inst.colour.end())
          throw std::invalid_argument("meet instance: colouring misses a meet");
        meet_cuts.insert(dm.meet.cut);
        if (!(ci->second == tau)) colours_ok = false;
        if (lex_compare(x, y) == std::strong_ordering::less && !(x.cut < y.cut))
          order_ok = false;
      }
      bool count_ok = meet_cuts.size() <= inst.m;
      if (colours_ok && order_ok && !count_ok) ++out.sole_bullet3_failures;
      if (colours_ok && order_ok && count_ok && !out.witness_found) {
        out.witness_found = true;
        out.first = a;
        out.second = b;
      }
    }
  }
  return out;
}

EntangledVerdict check_entangled(const EntangledInstance& inst) {
  EntangledVerdict out;
  const std::size_t rows = inst.matrix.size();
  const std::size_t cols = inst.pattern.size();
  for (std::size_t r = 0; r < rows; ++r)
    if (inst.matrix[r].size() != cols)
      throw std::invalid_argument("entangled: ragged matrix");
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r1 = 0; r1 < rows; ++r1)
      for (std::size_t r2 = r1 + 1; r2 < rows; ++r2)
        if (inst.matrix[r1][c] == inst.matrix[r2][c])
          throw std::invalid_argument("entangled: column not injective");

  for (std::size_t a = 0; a < rows && !out.witness_found; ++a)
    for (std::size_t b = a + 1; b < rows && !out.witness_found; ++b) {
      bool ok = true;
      for (std::size_t c = 0; c < cols && ok; ++c) {
        bool up = inst.matrix[a][c] < inst.matrix[b][c];
        ok = up == (inst.pattern[c] == 1);
      }
      if (ok) {
        out.witness_found = true;
        out.alpha = a;
        out.beta = b;
      }
    }
  return out;
}

}  // namespace ordwalk
