#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include "ordwalk/cseq.hpp"
#include "ordwalk/ordinal.hpp"

namespace ordwalk {

// Everything the walk from gamma down to beta produces. The diagonal
// (beta, beta) yields the empty walk with all-zero characteristics.
struct WalkReport {
  Ordinal beta, gamma;
  std::vector<Ordinal> trace;   // tr: strictly descending, every entry > beta
  std::vector<Ordinal> rho0;    // otp(C_step ∩ beta) along the trace
  Ordinal rho1;                 // max(rho0 ∪ {0})
  std::uint64_t rho2 = 0;       // trace length
  Ordinal lambda;               // max over trace of sup(C_step ∩ beta)
  Ordinal lambda2;              // same, restricted to steps with that sup < beta
  Ordinal last;                 // beta if lambda < beta, else min of the trace
};

class WalkEngine {
 public:
  explicit WalkEngine(ProviderPtr p) : p_(std::move(p)) {}

  const CSeqProvider& provider() const { return *p_; }
  ProviderPtr provider_ptr() const { return p_; }

  // requires beta <= gamma <= bound
  WalkReport walk(const Ordinal& beta, const Ordinal& gamma) const;

 private:
  ProviderPtr p_;
  mutable std::map<std::pair<Ordinal, Ordinal>, WalkReport> memo_;
  mutable std::mutex mu_;
};

// sup(h ∘ sigma); 0 for the empty sequence
std::uint64_t sigma_h(const std::vector<Ordinal>& sigma,
                      const std::function<std::uint64_t(const Ordinal&)>& h);

enum class Family { rho0, rho1, rho2 };

struct FiberDelta {
  bool comparable = false;  // one fiber extends the other below min(a,b)
  Ordinal delta;            // least disagreement point otherwise
};

// Exact least disagreement of the fibers rho_i(., a) and rho_i(., b),
// computed by interval splitting along the ladder cells. Supported for
// families rho0 and rho2 over providers whose C-sets meet every proper
// initial segment in a finite set.
FiberDelta fiber_delta_exact(const WalkEngine& eng, Family fam, const Ordinal& a,
                             const Ordinal& b);

// exact enumeration of { alpha < delta : rho1(alpha, delta) <= i }
std::vector<Ordinal> rho1_level_set(const WalkEngine& eng, const Ordinal& delta,
                                    std::uint64_t i);

// min of rho2 over {(a,b) : a in as, b in bs, a < b}; diagnostics only
std::optional<std::uint64_t> rect_min_rho2(const WalkEngine& eng,
                                           const std::vector<Ordinal>& as,
                                           const std::vector<Ordinal>& bs);

// Kleene-Brouwer-style order on finite ordinal sequences: a proper
// extension sorts below its prefix; otherwise the first disagreement decides.
std::strong_ordering lex_compare_seq(const std::vector<Ordinal>& f,
                                     const std::vector<Ordinal>& g);

}  // namespace ordwalk
