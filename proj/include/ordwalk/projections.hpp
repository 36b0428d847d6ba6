#pragma once

#include <cstdint>
#include <functional>

#include "ordwalk/trees.hpp"

namespace ordwalk {

// ---- prime-product projection maps ----

struct ProjectionFamily {
  std::uint64_t n = 1;
  std::vector<std::uint64_t> primes;  // q_0 < ... < q_{n-1}, q_0 > n, minimal
  std::uint64_t b = 2;                // product of the primes

  // 0 iff some q_j divides z
  std::uint64_t h(std::uint64_t z) const;
  // least l with h of the l-th base-b digit equal to 1; 0 when none
  std::uint64_t g(std::uint64_t z) const;
  std::uint64_t f(std::int64_t z) const { return g(z < 0 ? static_cast<std::uint64_t>(-z)
                                                         : static_cast<std::uint64_t>(z)); }
};

ProjectionFamily build_family(std::uint64_t n);

struct VerifyFailure {
  std::vector<std::int64_t> p;
  std::uint64_t l = 0, d = 0;
  std::string what;
};

struct VerifyReport {
  bool ok = true;
  std::uint64_t cases = 0;
  std::optional<VerifyFailure> failure;
  std::uint64_t branch_nonneg = 0, branch_reflect = 0;  // f_n case split counts
};

// every residue tuple and both colours; the CRT-built witness is checked
// against a linear scan
VerifyReport verify_hn(const ProjectionFamily& fam);

// m = b^(l+1); every p below entry_bound (or `count` seeded random ones);
// both the scanned witness and the digit-by-digit construction must land
VerifyReport verify_gn_exhaustive(const ProjectionFamily& fam, std::uint64_t l_max,
                                  std::uint64_t entry_bound);
VerifyReport verify_gn_random(const ProjectionFamily& fam, std::uint64_t l_max,
                              std::uint64_t count, std::uint64_t range,
                              std::uint64_t seed);

// signed inputs with pairwise spread <= d over [lo, hi]; the two-branch
// construction is verified everywhere and cross-checked by scan on a seeded
// subsample of `scan_samples` cases per (l, d) cell
VerifyReport verify_fn(const ProjectionFamily& fam, std::uint64_t l_max,
                       std::uint64_t d_max, std::int64_t lo, std::int64_t hi,
                       std::uint64_t scan_samples, std::uint64_t seed);

// no single map works for every n: with m built for n=l=d=1 and p the
// identity on [0,m), every i has some k with f(p(k)+i)=1
bool fn_negative_control(std::uint64_t i_max);

// ---- the integer projection phi ----

namespace phi {

// bijective coding of finitely-supported integer sequences; tau = 0 is the
// zero sequence
std::vector<std::pair<std::uint64_t, std::int64_t>> decode(std::uint64_t tau);
std::uint64_t encode(std::vector<std::pair<std::uint64_t, std::int64_t>> support);
std::int64_t d_at(std::uint64_t tau, std::uint64_t pos);

// phi(sigma) = sum_j d_{sigma(j)}(max of the previous entries), phi(empty)=0
std::int64_t eval(const std::vector<std::uint64_t>& sigma);

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z);

}  // namespace phi

// ---- windowed walk stabilisation ----

struct StabiliserInstance {
  ProviderPtr provider;
  std::function<std::uint64_t(const Ordinal&)> h;
  Ordinal delta;
  std::vector<std::vector<Ordinal>> beta;  // beta[i][k], i < m, k < n
  std::vector<Ordinal> upsilon;            // size m
  std::vector<Ordinal> probe_xis;          // xi window below delta
};

struct StabiliserResult {
  Ordinal eps;
  std::uint64_t tau = 0;
  std::uint64_t qualifying = 0;  // xi in the window that meet the h-condition
  bool ok = true;
  std::string failure;
};

// checks the four hypotheses (throwing with the clause number on violation),
// replays the construction of (eps, tau) and verifies both concluding
// equations for every qualifying probe xi
StabiliserResult stabiliser_scenario(const StabiliserInstance& inst);

// deterministic valid instances below w^6: delta = w^3*b + w^2*c
StabiliserInstance stabiliser_instance(std::uint64_t b, std::uint64_t c, std::uint64_t m,
                                 std::uint64_t n);

// ---- tuple enumerations and the tree colouring factories ----

class SigmaEnum {
 public:
  SigmaEnum(std::uint64_t n, bool allow_empty) : n_(n), allow_empty_(allow_empty) {}
  std::vector<std::vector<std::uint64_t>> tuple(std::uint64_t l) const;
  std::uint64_t index_of(const std::vector<std::vector<std::uint64_t>>& t) const;

 private:
  std::uint64_t n_;
  bool allow_empty_;
};

// t* = the node value at sup(E ∩ cut) when that is a probe point below the
// cut; empty otherwise
OrdSeq star_projection(const TreeNode& t, const OrdSet& E);

struct Thm82Params {
  std::uint64_t n = 1;
  std::function<std::uint64_t(const Ordinal&)> h;
  std::function<std::vector<std::uint64_t>(const Ordinal&)> g;  // -> n palette values
  const OrdSet* E = nullptr;
};

std::map<std::size_t, std::uint64_t> colouring_thm82(const TreeWindow& w0,
                                                     const Thm82Params& par);

struct Thm84Params {
  std::uint64_t n = 1;
  std::function<std::uint64_t(const Ordinal&)> h;
  std::function<OrdSeq(const Ordinal&)> g;                   // -> finite sequence
  std::function<std::vector<Ordinal>(const Ordinal&)> psi;   // -> n ordinals
  const OrdSet* E = nullptr;
};

std::map<std::size_t, Ordinal> colouring_thm84(const TreeWindow& w0,
                                               const Thm84Params& par);

}  // namespace ordwalk
