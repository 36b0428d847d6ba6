#include "ordwalk/projections.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "ordwalk/rng.hpp"
#include "ordwalk/walks.hpp"

namespace ordwalk {

namespace {

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t d = 2; d * d <= x; ++d)
    if (x % d == 0) return false;
  return true;
}

// modular inverse for coprime a, m
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(m),
               nr = static_cast<std::int64_t>(a % m);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

// CRT for pairwise coprime moduli
std::uint64_t crt(const std::vector<std::uint64_t>& residues,
                  const std::vector<std::uint64_t>& mods) {
  std::uint64_t b = 1;
  for (auto m : mods) b *= m;
  std::uint64_t x = 0;
  for (std::size_t j = 0; j < mods.size(); ++j) {
    std::uint64_t mj = b / mods[j];
    x = (x + residues[j] % mods[j] * mj % b * inv_mod(mj, mods[j])) % b;
  }
  return x;
}

}  // namespace

std::uint64_t ProjectionFamily::h(std::uint64_t z) const {
  for (auto q : primes)
    if (z % q == 0) return 0;
  return 1;
}

std::uint64_t ProjectionFamily::g(std::uint64_t z) const {
  std::uint64_t lvl = 0;
  while (z > 0) {
    if (h(z % b) == 1) return lvl;
    z /= b;
    ++lvl;
  }
  return 0;
}

ProjectionFamily build_family(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("build_family: n must be positive");
  ProjectionFamily fam;
  fam.n = n;
  std::uint64_t q = n + 1;
  while (fam.primes.size() < n) {
    if (is_prime(q)) fam.primes.push_back(q);
    ++q;
  }
  fam.b = 1;
  for (auto p : fam.primes) fam.b *= p;
  return fam;
}

namespace {

// the two CRT recipes behind the two-colour map
std::uint64_t crt_witness(const ProjectionFamily& fam,
                          const std::vector<std::uint64_t>& p, std::uint64_t l) {
  std::vector<std::uint64_t> residues;
  for (std::size_t j = 0; j < fam.n; ++j) {
    std::uint64_t q = fam.primes[j];
    if (l == 0) {
      residues.push_back((q - p[j] % q) % q);
    } else {
      std::uint64_t pick = q;  // least residue avoiding every -p(k) mod q
      for (std::uint64_t r = 0; r < q; ++r) {
        bool bad = false;
        for (std::size_t k = 0; k < fam.n; ++k)
          if ((p[k] + r) % q == 0) bad = true;
        if (!bad) {
          pick = r;
          break;
        }
      }
      if (pick == q) throw std::logic_error("two-colour recipe: no free residue");
      residues.push_back(pick);
    }
  }
  return crt(residues, fam.primes);
}

bool hn_hits(const ProjectionFamily& fam, const std::vector<std::uint64_t>& p,
             std::uint64_t l, std::uint64_t i) {
  for (std::size_t k = 0; k < fam.n; ++k)
    if (fam.h((p[k] + i) % fam.b) != l) return false;
  return true;
}

}  // namespace

VerifyReport verify_hn(const ProjectionFamily& fam) {
  VerifyReport rep;
  std::vector<std::uint64_t> p(fam.n, 0);
  for (;;) {
    for (std::uint64_t l = 0; l < 2; ++l) {
      ++rep.cases;
      bool found = false;
      for (std::uint64_t i = 0; i < fam.b && !found; ++i) found = hn_hits(fam, p, l, i);
      std::uint64_t ic = crt_witness(fam, p, l);
      if (!found || ic >= fam.b || !hn_hits(fam, p, l, ic)) {
        rep.ok = false;
        rep.failure = VerifyFailure{std::vector<std::int64_t>(p.begin(), p.end()), l, 0,
                                    found ? "CRT witness invalid" : "no witness"};
        return rep;
      }
    }
    // next residue tuple
    std::size_t j = 0;
    while (j < fam.n && ++p[j] == fam.b) p[j++] = 0;
    if (j == fam.n) break;
  }
  return rep;
}

namespace {

std::uint64_t pow_u64(std::uint64_t base, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= base;
  return r;
}

// the digit-by-digit witness below b^(l+1)
std::uint64_t gn_construct(const ProjectionFamily& fam,
                           const std::vector<std::uint64_t>& p, std::uint64_t l) {
  std::uint64_t c = 0;
  std::uint64_t i = 0;
  for (std::uint64_t j = 0; j <= l; ++j) {
    std::uint64_t bj = pow_u64(fam.b, j);
    std::vector<std::uint64_t> pj;
    for (std::size_t k = 0; k < fam.n; ++k) pj.push_back((p[k] + c) / bj);
    std::uint64_t ij = crt_witness(fam, pj, j == l ? 1 : 0);
    i += ij * bj;
    c = i;
  }
  return i;
}

bool gn_hits(const ProjectionFamily& fam, const std::vector<std::uint64_t>& p,
             std::uint64_t l, std::uint64_t i) {
  for (std::size_t k = 0; k < fam.n; ++k)
    if (fam.g(p[k] + i) != l) return false;
  return true;
}

bool gn_check_one(const ProjectionFamily& fam, const std::vector<std::uint64_t>& p,
                  std::uint64_t l, VerifyReport& rep) {
  ++rep.cases;
  std::uint64_t m = pow_u64(fam.b, l + 1);
  bool found = false;
  for (std::uint64_t i = 0; i < m && !found; ++i) found = gn_hits(fam, p, l, i);
  std::uint64_t ic = gn_construct(fam, p, l);
  if (!found || ic >= m || !gn_hits(fam, p, l, ic)) {
    rep.ok = false;
    rep.failure = VerifyFailure{std::vector<std::int64_t>(p.begin(), p.end()), l, 0,
                                found ? "construction invalid" : "no witness below m"};
    return false;
  }
  return true;
}

}  // namespace

VerifyReport verify_gn_exhaustive(const ProjectionFamily& fam, std::uint64_t l_max,
                                  std::uint64_t entry_bound) {
  VerifyReport rep;
  std::vector<std::uint64_t> p(fam.n, 0);
  for (;;) {
    for (std::uint64_t l = 0; l <= l_max; ++l)
      if (!gn_check_one(fam, p, l, rep)) return rep;
    std::size_t j = 0;
    while (j < fam.n && ++p[j] == entry_bound) p[j++] = 0;
    if (j == fam.n) break;
  }
  return rep;
}

VerifyReport verify_gn_random(const ProjectionFamily& fam, std::uint64_t l_max,
                              std::uint64_t count, std::uint64_t range,
                              std::uint64_t seed) {
  VerifyReport rep;
  for (std::uint64_t t = 0; t < count; ++t) {
    // inputs derived from the index, so any scan partition sees the same cases
    Rng g(seed ^ (t * 0x9e3779b97f4a7c15ull + 1));
    std::vector<std::uint64_t> p;
    for (std::uint64_t k = 0; k < fam.n; ++k) p.push_back(g.below(range));
    for (std::uint64_t l = 0; l <= l_max; ++l)
      if (!gn_check_one(fam, p, l, rep)) return rep;
  }
  return rep;
}

namespace {

// the sign-split witness below d + 2*b^(l+1)
std::uint64_t fn_construct(const ProjectionFamily& fam,
                           const std::vector<std::int64_t>& p, std::uint64_t l,
                           std::uint64_t d, bool& reflected) {
  std::uint64_t mbar = pow_u64(fam.b, l + 1);
  std::int64_t mb = static_cast<std::int64_t>(mbar);
  std::int64_t mx = *std::max_element(p.begin(), p.end());
  std::vector<std::uint64_t> pp;
  if (mx >= -mb) {
    reflected = false;
    for (auto v : p) pp.push_back(static_cast<std::uint64_t>(v + static_cast<std::int64_t>(d) + mb));
    std::uint64_t ip = gn_construct(fam, pp, l);
    return d + mbar + ip;
  }
  reflected = true;
  for (auto v : p) pp.push_back(static_cast<std::uint64_t>(-v - mb));
  std::uint64_t ip = gn_construct(fam, pp, l);
  return mbar - ip;
}

bool fn_hits(const ProjectionFamily& fam, const std::vector<std::int64_t>& p,
             std::uint64_t l, std::uint64_t i) {
  for (auto v : p)
    if (fam.f(v + static_cast<std::int64_t>(i)) != l) return false;
  return true;
}

}  // namespace

namespace {

std::uint64_t worker_count() {
  if (const char* env = std::getenv("ORDWALK_WORKERS")) {
    std::uint64_t w = std::strtoull(env, nullptr, 10);
    if (w >= 1 && w <= 64) return w;
  }
  return 1;
}

}  // namespace

VerifyReport verify_fn(const ProjectionFamily& fam, std::uint64_t l_max,
                       std::uint64_t d_max, std::int64_t lo, std::int64_t hi,
                       std::uint64_t scan_samples, std::uint64_t seed) {
  VerifyReport rep;
  for (std::uint64_t l = 0; l <= l_max && rep.ok; ++l) {
    for (std::uint64_t d = 0; d <= d_max && rep.ok; ++d) {
      std::uint64_t m = d + 2 * pow_u64(fam.b, l + 1);
      std::uint64_t stride =
          scan_samples == 0
              ? 0
              : std::max<std::uint64_t>(
                    1, static_cast<std::uint64_t>(hi - lo) / scan_samples);

      auto run_chunk = [&](std::int64_t from, std::int64_t to, VerifyReport& out) {
        auto check = [&](const std::vector<std::int64_t>& p, bool also_scan) {
          ++out.cases;
          bool reflected = false;
          std::uint64_t ic = fn_construct(fam, p, l, d, reflected);
          (reflected ? out.branch_reflect : out.branch_nonneg)++;
          if (ic >= m || !fn_hits(fam, p, l, ic)) {
            out.ok = false;
            out.failure = VerifyFailure{p, l, d, "construction invalid"};
            return false;
          }
          if (also_scan) {
            bool found = false;
            for (std::uint64_t i = 0; i < m && !found; ++i)
              found = fn_hits(fam, p, l, i);
            if (!found) {
              out.ok = false;
              out.failure = VerifyFailure{p, l, d, "scan found no witness below m"};
              return false;
            }
          }
          return true;
        };
        for (std::int64_t p0 = from; p0 <= to; ++p0) {
          // sample selection depends only on (seed, l, d, p0), never on the
          // partition, so verdicts agree for every worker count
          Rng pick(seed ^ (static_cast<std::uint64_t>(p0 - lo) * 0x9e3779b97f4a7c15ull) ^
                   (l << 32) ^ d);
          bool scan_here = stride != 0 && pick.below(stride) == 0;
          if (fam.n == 1) {
            if (!check({p0}, scan_here)) return;
          } else {
            for (std::int64_t off = -static_cast<std::int64_t>(d);
                 off <= static_cast<std::int64_t>(d); ++off) {
              std::vector<std::int64_t> p{p0, p0 + off};
              for (std::uint64_t k = 2; k < fam.n; ++k) p.push_back(p0);
              if (!check(p, scan_here && off == 0)) return;
            }
          }
        }
      };

      std::uint64_t workers = worker_count();
      if (workers <= 1) {
        run_chunk(lo, hi, rep);
      } else {
        std::vector<VerifyReport> parts(workers);
        std::vector<std::thread> threads;
        std::int64_t span = (hi - lo + 1 + static_cast<std::int64_t>(workers) - 1) /
                            static_cast<std::int64_t>(workers);
        for (std::uint64_t w = 0; w < workers; ++w) {
          std::int64_t from = lo + static_cast<std::int64_t>(w) * span;
          std::int64_t to = std::min<std::int64_t>(hi, from + span - 1);
          if (from > hi) break;
          threads.emplace_back([&, from, to, w] { run_chunk(from, to, parts[w]); });
        }
        for (auto& t : threads) t.join();
        for (const auto& part : parts) {
          rep.cases += part.cases;
          rep.branch_nonneg += part.branch_nonneg;
          rep.branch_reflect += part.branch_reflect;
          if (!part.ok && rep.ok) {
            rep.ok = false;
            rep.failure = part.failure;
          }
        }
      }
    }
  }
  return rep;
}

bool fn_negative_control(std::uint64_t i_max) {
  ProjectionFamily fam = build_family(1);
  // m chosen for n = l = d = 1
  std::uint64_t m = 1 + 2 * fam.b * fam.b;
  for (std::uint64_t i = 0; i < i_max; ++i) {
    bool some = false;
    for (std::uint64_t k = 0; k < m && !some; ++k)
      some = fam.f(static_cast<std::int64_t>(k + i)) == 1;
    if (!some) return false;  // a uniform witness would exist after all
  }
  return true;
}

// ------------------------------------------------------------------ phi

namespace phi {

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y) {
  return (x + y) * (x + y + 1) / 2 + y;
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
  std::uint64_t w = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(z) + 1) - 1) / 2);
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  while (w * (w + 1) / 2 > z) --w;
  std::uint64_t y = z - w * (w + 1) / 2;
  return {w - y, y};
}

namespace {

std::uint64_t zig(std::int64_t v) {  // nonzero ints onto the naturals
  return v > 0 ? 2 * static_cast<std::uint64_t>(v - 1)
               : 2 * static_cast<std::uint64_t>(-v) - 1;
}

std::int64_t unzig(std::uint64_t z) {
  return z % 2 == 0 ? static_cast<std::int64_t>(z / 2) + 1
                    : -static_cast<std::int64_t>((z + 1) / 2);
}

}  // namespace

std::vector<std::pair<std::uint64_t, std::int64_t>> decode(std::uint64_t tau) {
  std::vector<std::pair<std::uint64_t, std::int64_t>> out;
  std::uint64_t pos_base = 0;
  bool first = true;
  while (tau != 0) {
    auto [item, rest] = cantor_unpair(tau - 1);
    auto [dpos, zval] = cantor_unpair(item);
    std::uint64_t pos = first ? dpos : pos_base + 1 + dpos;
    out.emplace_back(pos, unzig(zval));
    pos_base = pos;
    first = false;
    tau = rest;
  }
  return out;
}

std::uint64_t encode(std::vector<std::pair<std::uint64_t, std::int64_t>> support) {
  std::sort(support.begin(), support.end());
  for (const auto& [p, v] : support)
    if (v == 0) throw std::invalid_argument("phi::encode: zero value in support");
  // build back-to-front
  std::uint64_t tau = 0;
  for (std::size_t idx = support.size(); idx-- > 0;) {
    std::uint64_t dpos = idx == 0 ? support[idx].first
                                  : support[idx].first - support[idx - 1].first - 1;
    std::uint64_t item = cantor_pair(dpos, zig(support[idx].second));
    tau = 1 + cantor_pair(item, tau);
  }
  return tau;
}

std::int64_t d_at(std::uint64_t tau, std::uint64_t pos) {
  for (const auto& [p, v] : decode(tau))
    if (p == pos) return v;
  return 0;
}

std::int64_t eval(const std::vector<std::uint64_t>& sigma) {
  std::int64_t acc = 0;
  std::uint64_t prefix_max = 0;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    acc += d_at(sigma[j], j == 0 ? 0 : prefix_max);
    prefix_max = std::max(prefix_max, sigma[j]);
  }
  return acc;
}

}  // namespace phi

// ------------------------------------------------- stabilisation scenarios

namespace {

std::vector<std::uint64_t> h_string(const std::function<std::uint64_t(const Ordinal&)>& h,
                                    const std::vector<Ordinal>& seq) {
  std::vector<std::uint64_t> out;
  for (const auto& v : seq) out.push_back(h(v));
  return out;
}

std::uint64_t h_sup(const std::vector<std::uint64_t>& hs) {
  std::uint64_t m = 0;
  for (auto v : hs) m = std::max(m, v);
  return m;
}

}  // namespace

StabiliserResult stabiliser_scenario(const StabiliserInstance& inst) {
  const std::size_t m = inst.upsilon.size();
  if (inst.beta.size() != m || m == 0)
    throw std::invalid_argument("stabiliser: matrix and upsilon sizes differ");
  const std::size_t n = inst.beta[0].size();
  WalkEngine eng(inst.provider);

  // hypothesis (i): every upsilon_i sits on all of its walks
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      WalkReport rep = eng.walk(inst.delta, inst.beta[i][k]);
      bool found = false;
      for (const auto& t : rep.trace) found = found || t == inst.upsilon[i];
      if (!found)
        throw std::invalid_argument(
            "stabiliser hypothesis (i): upsilon_i not on tr(delta, beta_i^k)");
    }

  // hypothesis (ii): the h-strings from upsilon_i up agree with row 0
  std::vector<std::vector<std::uint64_t>> eta(n);
  for (std::size_t k = 0; k < n; ++k)
    eta[k] = h_string(inst.h, eng.walk(inst.upsilon[0], inst.beta[0][k]).rho0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (h_string(inst.h, eng.walk(inst.upsilon[i], inst.beta[i][k]).rho0) != eta[k])
        throw std::invalid_argument(
            "stabiliser hypothesis (ii): h∘rho0(upsilon_i, beta_i^k) differs from row 0");

  // hypothesis (iii): the suffix sups all match
  std::uint64_t hfrak = h_sup(eta[0]);
  for (std::size_t k = 0; k < n; ++k)
    if (h_sup(eta[k]) != hfrak)
      throw std::invalid_argument(
          "stabiliser hypothesis (iii): (rho0(upsilon_i, beta_i^k))_h differs");

  // hypothesis (iv): hfrak < h_0 < h_1 < ...
  std::vector<std::uint64_t> hs;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::uint64_t> s =
        h_string(inst.h, eng.walk(inst.delta, inst.upsilon[i]).rho0);
    hs.push_back(h_sup(s));
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!(hfrak < hs[i]) || (i + 1 < m && !(hs[i] < hs[i + 1])))
      throw std::invalid_argument(
          "stabiliser hypothesis (iv): need (rho0(upsilon_0,beta_0^0))_h < "
          "(rho0(delta,upsilon_i))_h < (rho0(delta,upsilon_j))_h");
  }

  // the g-sums of the walks from delta to upsilon_i
  std::vector<std::int64_t> gsum(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::uint64_t> s =
        h_string(inst.h, eng.walk(inst.delta, inst.upsilon[i]).rho0);
    std::uint64_t run = hfrak;
    for (std::size_t j = 0; j < s.size(); ++j) {
      gsum[i] += phi::d_at(s[j], run);
      run = std::max(run, s[j]);
    }
  }

  // pick tau above max(H) with f ⊆ d_tau
  std::vector<std::pair<std::uint64_t, std::int64_t>> f;
  for (std::size_t i = 0; i < m; ++i) {
    std::int64_t v = -gsum[i] + static_cast<std::int64_t>(i) + gsum[0];
    if (v != 0) f.emplace_back(hs[i], v);
  }
  std::uint64_t maxH = hs.back();
  std::uint64_t tau = phi::encode(f);
  for (std::uint64_t bump = 0; tau <= maxH; ++bump) {
    auto fplus = f;
    fplus.emplace_back(maxH + 1 + bump, 1);
    tau = phi::encode(fplus);
  }

  StabiliserResult out;
  out.tau = tau;

  // eps := max lambda(delta, beta_i^k), strictly below delta
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      Ordinal lam = eng.walk(inst.delta, inst.beta[i][k]).lambda;
      if (out.eps < lam) out.eps = lam;
    }
  if (!(out.eps < inst.delta)) {
    out.ok = false;
    out.failure = "eps reached delta";
    return out;
  }

  // verify both displayed equations for every qualifying xi
  ClosedSet cd = inst.provider->c_at(inst.delta);
  for (const Ordinal& xi : inst.probe_xis) {
    if (!(out.eps < xi) || !(xi < inst.delta)) continue;
    if (inst.h(cd.otp_below(xi)) != tau) continue;
    ++out.qualifying;
    std::vector<std::vector<std::int64_t>> val(m, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < n; ++k)
        val[i][k] = phi::eval(h_string(inst.h, eng.walk(xi, inst.beta[i][k]).rho0));
    for (std::size_t i = 0; i < m && out.ok; ++i)
      for (std::size_t k = 0; k < n && out.ok; ++k) {
        if (val[i][k] != val[0][k] + static_cast<std::int64_t>(i)) {
          out.ok = false;
          out.failure = "first equation fails at xi=" + xi.render();
        }
        for (std::size_t k2 = 0; k2 < n; ++k2) {
          std::int64_t lhs = val[i][k] - val[i][k2];
          std::int64_t rhs = phi::eval(eta[k]) - phi::eval(eta[k2]);
          if (lhs != rhs) {
            out.ok = false;
            out.failure = "second equation fails at xi=" + xi.render();
          }
        }
      }
    if (!out.ok) break;
  }
  return out;
}

StabiliserInstance stabiliser_instance(std::uint64_t b, std::uint64_t c, std::uint64_t m,
                                 std::uint64_t n) {
  if (b < 1 || c < 2 || m < 1 || m > 3 || n < 1 || n > 3 || b + 1 == c)
    throw std::invalid_argument("stabiliser_instance: need b>=1, c>=2, c != b+1, m,n in 1..3");

  StabiliserInstance inst;
  Ordinal w3 = Ordinal::omega_pow(Ordinal::from_uint(3));
  Ordinal w2 = Ordinal::omega_pow(Ordinal::from_uint(2));
  inst.provider = canonical_provider(Ordinal::omega_pow(Ordinal::from_uint(6)));
  inst.delta = Ordinal::omega_pow(Ordinal::from_uint(3), b) +
               Ordinal::omega_pow(Ordinal::from_uint(2), c);

  std::vector<Ordinal> pool = {
      Ordinal::omega_pow(Ordinal::from_uint(3), b + 1),
      Ordinal::omega_pow(Ordinal::from_uint(4)),
      Ordinal::omega_pow(Ordinal::from_uint(5)),
  };
  for (std::uint64_t i = 0; i < m; ++i) {
    inst.upsilon.push_back(pool[i]);
    std::vector<Ordinal> row;
    for (std::uint64_t k = 0; k < n; ++k)
      row.push_back(pool[i] + Ordinal::from_uint(k + 1));
    inst.beta.push_back(std::move(row));
  }

  // h table: walks from delta upward only mention the otp values
  // 0, 1, c and b+1; grade them so hypothesis (iv) holds
  auto table = std::make_shared<std::map<std::uint64_t, std::uint64_t>>();
  (*table)[c] = 1;
  (*table)[b + 1] = 2;
  (*table)[1] = 3;
  // the qualifying rung indices get their value patched in below
  auto h = [table](const Ordinal& o) -> std::uint64_t {
    auto v = o.as_uint();
    if (!v) return 0;
    auto it = table->find(*v);
    return it == table->end() ? 0 : it->second;
  };
  inst.h = h;

  // run the construction once to learn tau, then make two ladder rungs of
  // delta qualify and add probe points
  StabiliserInstance probeless = inst;
  probeless.probe_xis = {};
  StabiliserResult dry = stabiliser_scenario(probeless);

  std::uint64_t j0 = std::max({c, b + 1, std::uint64_t{5}}) + 1;
  if (j0 == c || j0 == b + 1) ++j0;
  std::uint64_t j1 = j0 + 3;
  (*table)[j0] = dry.tau;
  (*table)[j1] = dry.tau;

  for (std::uint64_t j : {j0, j1}) {
    Ordinal rung = fund_seq(inst.delta, j);
    inst.probe_xis.push_back(rung);  // otp(C_delta ∩ rung) = j
  }
  // a few non-qualifying points too
  inst.probe_xis.push_back(fund_seq(inst.delta, j0 + 1));
  inst.probe_xis.push_back(fund_seq(inst.delta, j0 + 1) + Ordinal::from_uint(4));
  return inst;
}

// ------------------------------------------- tuple enumeration and colourings

namespace {

// finite nat-sequences coded bijectively; 0 is the empty sequence
std::vector<std::uint64_t> seq_decode(std::uint64_t code) {
  std::vector<std::uint64_t> out;
  while (code != 0) {
    auto [head, rest] = phi::cantor_unpair(code - 1);
    out.push_back(head);
    code = rest;
  }
  return out;
}

std::uint64_t seq_encode(const std::vector<std::uint64_t>& s) {
  std::uint64_t code = 0;
  for (std::size_t i = s.size(); i-- > 0;) code = 1 + phi::cantor_pair(s[i], code);
  return code;
}

}  // namespace

std::vector<std::vector<std::uint64_t>> SigmaEnum::tuple(std::uint64_t l) const {
  std::vector<std::uint64_t> codes(n_);
  for (std::size_t k = n_; k-- > 1;) {
    auto [rest, last] = phi::cantor_unpair(l);
    codes[k] = last;
    l = rest;
  }
  codes[0] = l;
  std::vector<std::vector<std::uint64_t>> out;
  for (auto c : codes) out.push_back(seq_decode(allow_empty_ ? c : c + 1));
  return out;
}

std::uint64_t SigmaEnum::index_of(
    const std::vector<std::vector<std::uint64_t>>& t) const {
  if (t.size() != n_) throw std::invalid_argument("SigmaEnum: arity mismatch");
  std::vector<std::uint64_t> codes;
  for (const auto& s : t) {
    std::uint64_t c = seq_encode(s);
    if (!allow_empty_) {
      if (c == 0) throw std::invalid_argument("SigmaEnum: empty component");
      c -= 1;
    }
    codes.push_back(c);
  }
  std::uint64_t l = codes[0];
  for (std::size_t k = 1; k < n_; ++k) l = phi::cantor_pair(l, codes[k]);
  return l;
}

OrdSeq star_projection(const TreeNode& t, const OrdSet& E) {
  if (t.cut.is_zero()) return {};
  Ordinal s = E.sup_below(t.cut);
  if (s.is_zero() && !E.contains(s)) return {};  // nothing of E below the cut
  if (s == t.cut) return {};                     // the cut is accumulated by E
  auto it = t.values.find(s);
  if (it == t.values.end()) return {};           // not a probe point
  return std::get<OrdSeq>(it->second);
}

std::map<std::size_t, std::uint64_t> colouring_thm82(const TreeWindow& w0,
                                                     const Thm82Params& par) {
  if (w0.family != TreeFamily::rho0)
    throw std::invalid_argument("thm82 colouring: window family must be rho0");
  ProjectionFamily fam = build_family(par.n);
  SigmaEnum sig(par.n, /*allow_empty=*/false);
  std::map<std::size_t, std::uint64_t> out;
  for (std::size_t idx = 0; idx < w0.nodes.size(); ++idx) {
    OrdSeq star = star_projection(w0.nodes[idx], *par.E);
    std::vector<std::uint64_t> hs;
    for (const auto& v : star) hs.push_back(par.h(v));
    std::uint64_t l = fam.f(phi::eval(hs));
    auto sigma = sig.tuple(l);
    std::uint64_t colour = 0;
    for (std::uint64_t k = 0; k < par.n; ++k) {
      const auto& sk = sigma[k];
      if (sk.empty() || sk.size() > hs.size()) continue;
      if (!std::equal(sk.begin(), sk.end(), hs.begin())) continue;
      colour = par.g(star[sk.size() - 1])[k];
      break;
    }
    out[idx] = colour;
  }
  return out;
}

std::map<std::size_t, Ordinal> colouring_thm84(const TreeWindow& w0,
                                               const Thm84Params& par) {
  if (w0.family != TreeFamily::rho0)
    throw std::invalid_argument("thm84 colouring: window family must be rho0");
  ProjectionFamily fam = build_family(par.n);
  SigmaEnum sig(par.n, /*allow_empty=*/true);
  std::map<std::size_t, Ordinal> out;
  for (std::size_t idx = 0; idx < w0.nodes.size(); ++idx) {
    const TreeNode& t = w0.nodes[idx];
    OrdSeq star = star_projection(t, *par.E);
    std::vector<std::uint64_t> hs;
    for (const auto& v : star) hs.push_back(par.h(v));
    auto [l, ell] = phi::cantor_unpair(fam.f(phi::eval(hs)));
    auto sigma = sig.tuple(l);
    Ordinal colour;
    for (std::uint64_t k = 0; k < par.n; ++k) {
      const auto& sk = sigma[k];
      if (sk.size() > hs.size()) continue;
      if (!std::equal(sk.begin(), sk.end(), hs.begin())) continue;
      if (star.size() <= sk.size() + ell) continue;
      // the unique probed chi with t(chi) = (star restricted) ⌢ g(star(|sk|+ell))
      OrdSeq want(star.begin(), star.begin() + static_cast<std::ptrdiff_t>(sk.size()));
      OrdSeq gpart = par.g(star[sk.size() + ell]);
      want.insert(want.end(), gpart.begin(), gpart.end());
      std::optional<Ordinal> chi;
      bool unique = true;
      for (const auto& [p, v] : t.values)
        if (std::get<OrdSeq>(v) == want) {
          if (chi) unique = false;
          chi = p;
        }
      if (!chi || !unique) continue;
      colour = par.psi(*chi)[k];
      break;
    }
    out[idx] = colour;
  }
  return out;
}

}  // namespace ordwalk
