#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ordwalk/ordinal.hpp"

namespace ordwalk {

struct QueryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A closed subset of some ordinal, stored as finitely many blocks: finite
// runs of points and infinite strictly-increasing tails with a known sup.
// Every infinite block that is not last must be followed by a block starting
// exactly at its sup, so the whole set is closed below its sup.
class ClosedSet {
 public:
  struct Gen {
    std::function<Ordinal(std::uint64_t)> raw;
    mutable std::vector<Ordinal> cache;
    mutable std::mutex mu;
    Ordinal at(std::uint64_t k) const;
  };

  struct Block {
    std::vector<Ordinal> pts;        // used when gen == nullptr
    std::shared_ptr<Gen> gen;        // infinite strictly increasing
    Ordinal gsup;                    // sup of gen values (not attained)
    std::string tag;                 // structural identity of an infinite tail
    bool infinite() const { return gen != nullptr; }
    Ordinal first() const;
  };

  ClosedSet() = default;

  static ClosedSet empty();
  static ClosedSet points(std::vector<Ordinal> pts);  // ascending
  static ClosedSet tail(std::function<Ordinal(std::uint64_t)> gen, Ordinal sup,
                        std::string tag);
  static ClosedSet compose(std::vector<Block> blocks);

  bool is_empty() const { return blocks_.empty(); }
  // sup of the set; for an attained max this is that max
  Ordinal sup() const;
  bool contains(const Ordinal& x) const;
  // least element >= beta
  std::optional<Ordinal> min_at_least(const Ordinal& beta) const;
  // order type of set ∩ [0, beta)
  Ordinal otp_below(const Ordinal& beta) const;
  Ordinal otp() const;
  // sup(set ∩ beta); 0 when empty; may equal beta when the set accumulates there
  Ordinal sup_below(const Ordinal& beta) const;
  // throws QueryError when set ∩ [0, beta) is infinite
  std::vector<Ordinal> enumerate_below(const Ordinal& beta) const;
  bool accumulates_at(const Ordinal& x) const { return sup_below(x) == x && !x.is_zero(); }
  // x in set and not a limit of the set
  bool isolated_at(const Ordinal& x) const;

  // last n elements strictly below beta (fewer if the set is smaller)
  std::vector<Ordinal> last_below(const Ordinal& beta, std::size_t n) const;

  const std::vector<Block>& blocks() const { return blocks_; }
  // tag of the infinite tail accumulating at delta, if any
  std::optional<std::string> approach_tag(const Ordinal& delta) const;
  // first element of that tail
  std::optional<Ordinal> approach_start(const Ordinal& delta) const;

  std::uint64_t hash() const;

 private:
  std::vector<Block> blocks_;
};

// Abstract set of ordinals supporting monotone queries; used for the
// partition pieces and clubs fed to the club-guided ladder transform.
class OrdSet {
 public:
  virtual ~OrdSet() = default;
  virtual bool contains(const Ordinal& x) const = 0;
  // least member >= x, if any below the set's own bound
  virtual std::optional<Ordinal> min_at_least(const Ordinal& x) const = 0;
  // least accumulation point of the set that is >= x
  virtual std::optional<Ordinal> acc_min_at_least(const Ordinal& x) const = 0;
  // sup(set ∩ x); 0 when empty; equals x when the set accumulates at x
  virtual Ordinal sup_below(const Ordinal& x) const = 0;
  virtual std::string tag() const = 0;

  bool accumulates_at(const Ordinal& x) const {
    auto a = acc_min_at_least(x);
    return a && *a == x;
  }
};

// positive multiples of w^r below bound
std::shared_ptr<OrdSet> multiples_of_omega_pow(std::uint64_t r, Ordinal bound);
// { H + w*c : c >= 1, c ≡ residue (mod m), H a multiple of w^2 }, below bound
std::shared_ptr<OrdSet> omega_coeff_residues(std::uint64_t residue, std::uint64_t m,
                                             Ordinal bound);

class CSeqProvider {
 public:
  virtual ~CSeqProvider() = default;
  virtual const Ordinal& bound() const = 0;
  virtual ClosedSet c_at(const Ordinal& delta) const = 0;
  virtual std::string id() const = 0;
  // indices in (lo, hi] whose C may fail tameness (C_alpha ∩ x infinite for
  // some x < alpha). Everything else is guaranteed tame, which the
  // characteristic evaluation exploits.
  virtual std::vector<Ordinal> special_indices_in(const Ordinal& lo,
                                                  const Ordinal& hi) const;
  std::uint64_t hash() const;
};

using ProviderPtr = std::shared_ptr<const CSeqProvider>;

// canonical ladders from the fundamental-sequence scheme;
// successor rule C_{g+1} = {g}, padded to F ∪ {g} at limit g when F given
ProviderPtr canonical_provider(Ordinal bound,
                               std::vector<std::uint64_t> padding = {});

// explicit per-index prefixes; the canonical ladder continues strictly above
// the listed prefix at limit indices; unlisted indices raise QueryError
ProviderPtr file_provider(Ordinal bound,
                          std::map<Ordinal, std::vector<Ordinal>> entries);

// base with finitely many replaced entries (in-memory experiments)
ProviderPtr overlay_provider(ProviderPtr base, std::map<Ordinal, ClosedSet> entries,
                             std::vector<Ordinal> special);

struct CharacteristicWitness {
  std::string flag;
  Ordinal alpha;
  std::optional<Ordinal> eps;
};

struct CharacteristicReport {
  Ordinal delta;
  Ordinal hi;
  bool A = true, A1 = true, R = true, R1 = true, V = true, V1 = true;
  std::vector<CharacteristicWitness> witnesses;
  // alphas whose tail comparison was only probe-checked (distinct tail tags)
  std::vector<Ordinal> probed_alphas;
};

// Definition-4.4 flags with every quantifier over alpha restricted to (delta, hi]
CharacteristicReport characteristics_window(const CSeqProvider& p,
                                            const Ordinal& delta, const Ordinal& hi);

enum class CQuery { min_above, otp_below, kth, enumerate_below };

struct CQueryResult {
  std::optional<Ordinal> ord;
  std::vector<Ordinal> list;
};

CQueryResult cseq_query(const CSeqProvider& p, const Ordinal& delta, CQuery q,
                        const Ordinal& arg);

// ---- club-guided ladder transform ----

struct TransformCheck {
  struct Row {
    Ordinal delta, alpha, beta;
    Ordinal otp_big, otp_small;  // otp(C•_beta ∩ alpha) vs otp(C•_delta ∩ alpha)
    bool ok;
  };
  std::vector<Row> rows;
  bool all_ok = true;
};

ProviderPtr transform_ladders(ProviderPtr base,
                              std::vector<std::shared_ptr<OrdSet>> parts,
                              std::shared_ptr<OrdSet> club);

// verify, for sampled delta in acc(club) ∩ (0, hi] and the first k successive
// pairs alpha < beta of C•_delta, that otp(C•_beta ∩ alpha) > otp(C•_delta ∩ alpha) + 1
TransformCheck transform_guarantee_check(const CSeqProvider& transformed,
                                         std::shared_ptr<OrdSet> club,
                                         const Ordinal& hi, std::size_t deltas,
                                         std::size_t pairs_per_delta);

// ---- windowed club-guessing diagnostic ----

struct ThetaCheckInput {
  std::vector<Ordinal> S;              // indices to test
  std::vector<Ordinal> T;              // target set sample
  std::vector<Ordinal> D;              // club sample of candidate points
  std::function<std::uint64_t(const Ordinal&)> h;
  std::function<std::uint64_t(const Ordinal&)> g;  // optional; empty = unused
  bool use_g = false;
  std::uint64_t theta = 1;
  std::uint64_t nu = 0;
  Ordinal above;                       // hits must lie strictly above this
};

struct ThetaCheckRow {
  Ordinal delta;
  bool ok;
  std::optional<std::uint64_t> failing_tau;
};

std::vector<ThetaCheckRow> theta_window_check(const CSeqProvider& p,
                                              const ThetaCheckInput& in);

}  // namespace ordwalk
