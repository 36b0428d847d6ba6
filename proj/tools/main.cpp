#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ordwalk/json_io.hpp"

using namespace ordwalk;

namespace {

// exit codes: 0 ok, 1 invariant/verification failure, 2 bad input or schema,
// 3 unknown operation, 4 unreadable or unwritable file
struct CliFailure {
  int code;
  std::string msg;
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliFailure{4, "cannot read " + path};
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CliFailure{2, std::string("bad JSON in ") + path + ": " + e.what()};
  }
  return j;
}

void deliver(json rep, const std::string& out, int& exit_code, bool failed) {
  rep["tool"] = tool_stamp();
  std::string text = rep.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw CliFailure{4, "cannot write " + out};
    f << text;
  }
  if (failed) exit_code = 1;
}

Ordinal ord_param(const json& p, const char* key) {
  if (!p.contains(key)) throw CliFailure{2, std::string("missing parameter: ") + key};
  return parse_ordinal(p.at(key).get<std::string>());
}

std::vector<Ordinal> ordlist_param(const json& p, const char* key) {
  if (!p.contains(key)) throw CliFailure{2, std::string("missing parameter: ") + key};
  std::vector<Ordinal> v;
  for (const auto& x : p.at(key)) v.push_back(parse_ordinal(x.get<std::string>()));
  return v;
}

ProviderSpec provider_param(const json& p) {
  if (!p.contains("provider")) {
    ProviderSpec s;
    s.bound = parse_ordinal("w^4");
    return s;
  }
  return ProviderSpec::from_json(p.at("provider"));
}

std::function<std::uint64_t(const Ordinal&)> mod_map(std::uint64_t m) {
  return [m](const Ordinal& o) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < o.term_count(); ++i) acc += o.coeff_at(i);
    return acc % m;
  };
}

// ---- handlers: params json in, (report, failed) out ----

std::pair<json, bool> op_walk(const json& p) {
  ProviderSpec spec = provider_param(p);
  WalkEngine eng(spec.build());
  json rep;
  rep["provider"] = spec.to_json();
  rep["provider_hash"] = eng.provider().hash();
  if (p.contains("rect_as")) {
    // rectangle-minimum diagnostic over two finite sets
    std::vector<Ordinal> as, bs;
    for (const auto& x : p.at("rect_as")) as.push_back(parse_ordinal(x.get<std::string>()));
    for (const auto& x : p.at("rect_bs")) bs.push_back(parse_ordinal(x.get<std::string>()));
    auto mn = rect_min_rho2(eng, as, bs);
    if (mn) rep["rect_min_rho2"] = *mn;
    rep["rect_pairs"] = as.size() * bs.size();
    return {rep, false};
  }
  if (p.contains("pairs")) {
    json arr = json::array();
    for (const auto& pr : p.at("pairs")) {
      Ordinal b = parse_ordinal(pr.at(0).get<std::string>());
      Ordinal g = parse_ordinal(pr.at(1).get<std::string>());
      arr.push_back(walk_report_to_json(eng.walk(b, g)));
    }
    rep["walks"] = arr;
    return {rep, false};
  }
  WalkReport w = eng.walk(ord_param(p, "beta"), ord_param(p, "gamma"));
  rep.update(walk_report_to_json(w));
  if (p.contains("sigma_h_mod")) {
    auto h = mod_map(p.at("sigma_h_mod").get<std::uint64_t>());
    rep["rho0_h"] = sigma_h(w.rho0, h);
  }
  return {rep, false};
}

std::pair<json, bool> op_cseq_report(const json& p) {
  ProviderSpec spec = provider_param(p);
  auto prov = spec.build();
  auto rep = characteristics_window(*prov, ord_param(p, "delta"), ord_param(p, "hi"));
  json j = characteristic_report_to_json(rep);
  j["provider"] = spec.to_json();
  j["provider_hash"] = prov->hash();
  return {j, false};
}

std::pair<json, bool> op_cseq_query(const json& p) {
  ProviderSpec spec = provider_param(p);
  auto prov = spec.build();
  std::string qs = p.value("q", "min_above");
  CQuery q;
  if (qs == "min_above")
    q = CQuery::min_above;
  else if (qs == "otp_below")
    q = CQuery::otp_below;
  else if (qs == "kth")
    q = CQuery::kth;
  else if (qs == "enumerate_below")
    q = CQuery::enumerate_below;
  else
    throw CliFailure{2, "unknown query: " + qs};
  auto res = cseq_query(*prov, ord_param(p, "delta"), q, ord_param(p, "arg"));
  json j;
  j["provider_hash"] = prov->hash();
  if (res.ord) j["value"] = res.ord->render();
  if (q == CQuery::enumerate_below) {
    json lst = json::array();
    for (const auto& x : res.list) lst.push_back(x.render());
    j["values"] = lst;
  }
  return {j, false};
}

std::pair<json, bool> op_cseq_theta(const json& p) {
  ProviderSpec spec = provider_param(p);
  auto prov = spec.build();
  ThetaCheckInput in;
  in.S = ordlist_param(p, "deltas");
  in.D = ordlist_param(p, "d");
  in.T = p.contains("t") ? ordlist_param(p, "t") : in.D;
  in.theta = p.value("theta", 1u);
  in.h = mod_map(p.value("hmod", in.theta));
  if (p.contains("gmod")) {
    in.use_g = true;
    in.g = mod_map(p.at("gmod").get<std::uint64_t>());
    in.nu = p.value("nu", 0u);
  }
  if (p.contains("above")) in.above = ord_param(p, "above");
  auto rows = theta_window_check(*prov, in);
  json arr = json::array();
  bool all = true;
  for (const auto& r : rows) {
    json e{{"delta", r.delta.render()}, {"ok", r.ok}};
    if (r.failing_tau) e["failing_tau"] = *r.failing_tau;
    all = all && r.ok;
    arr.push_back(e);
  }
  return {json{{"provider_hash", prov->hash()}, {"rows", arr}, {"all_ok", all}}, false};
}

TreeFamily family_param(const json& p) {
  std::string f = p.value("family", "rho0");
  if (f == "rho0") return TreeFamily::rho0;
  if (f == "rho1") return TreeFamily::rho1;
  if (f == "rho2") return TreeFamily::rho2;
  throw CliFailure{2, "family must be rho0|rho1|rho2"};
}

std::pair<json, bool> op_tree_build(const json& p) {
  ProviderSpec spec = provider_param(p);
  WalkEngine eng(spec.build());
  std::shared_ptr<OrdSet> club;
  if (p.contains("club_pow"))
    club = multiples_of_omega_pow(p.at("club_pow").get<std::uint64_t>(), spec.bound);
  TreeWindow w = build_window(eng, family_param(p), ordlist_param(p, "witnesses"),
                              ordlist_param(p, "cuts"),
                              p.contains("probe") ? ordlist_param(p, "probe")
                                                  : std::vector<Ordinal>{},
                              club.get());
  if (p.value("meet_closure", false)) w = meet_closure(w);
  return {window_to_json(w, spec), false};
}

std::pair<json, bool> op_tree_check(const json& p) {
  auto [w, spec] = window_from_json(p.contains("window_file")
                                        ? load_json_file(p.at("window_file"))
                                        : p.at("window"));
  json arr = json::array();
  bool all = true;
  std::vector<Ordinal> at = p.contains("at") ? ordlist_param(p, "at") : w.cuts();
  for (const auto& c : at) {
    auto res = coherence_check(w, c);
    json e{{"cut", c.render()}, {"coherent", res.ok}};
    if (res.witness)
      e["witness"] = {res.witness->first, res.witness->second};
    all = all && res.ok;
    arr.push_back(e);
  }
  return {json{{"levels", arr}, {"all_coherent", all}, {"probe_hash", w.probe_hash()}},
          false};
}

std::pair<json, bool> op_tree_flatten(const json& p) {
  auto [w, spec] = window_from_json(p.contains("window_file")
                                        ? load_json_file(p.at("window_file"))
                                        : p.at("window"));
  auto club = multiples_of_omega_pow(p.value("club_pow", 1u), spec.bound);
  TreeWindow flat = flatten_psi(w, *club);
  return {window_to_json(flat, spec), false};
}

std::map<std::size_t, Ordinal> colours_param(const json& j) {
  std::map<std::size_t, Ordinal> out;
  for (const auto& [key, val] : j.items()) {
    if (key.empty() || key[0] != 'n') throw CliFailure{2, "bad node id " + key};
    out[std::stoull(key.substr(1))] = parse_ordinal(val.get<std::string>());
  }
  return out;
}

std::pair<json, bool> op_colour_make(const json& p) {
  auto [w, spec] = window_from_json(p.contains("window_file")
                                        ? load_json_file(p.at("window_file"))
                                        : p.at("window"));
  WalkEngine eng(spec.build());
  std::string kind = p.value("kind", "rho2good");
  GoodColouring c;
  if (kind == "rho2good") {
    c = rho2_good_colouring(eng, w,
                            p.contains("pool") ? ordlist_param(p, "pool")
                                               : std::vector<Ordinal>{});
  } else if (kind == "coherent") {
    std::map<Ordinal, std::size_t> designated;
    std::map<std::size_t, Ordinal> d;
    for (const auto& lv : ordlist_param(p, "levels")) {
      auto idx = w.node_of(lv, lv);
      if (!idx) throw CliFailure{2, "no maximal node at level " + lv.render()};
      designated[lv] = *idx;
      auto mn = eng.provider().c_at(lv).min_at_least(Ordinal());
      if (!mn) throw CliFailure{2, "empty ladder at " + lv.render()};
      d[*idx] = *mn;
    }
    c = specialize_via_coherence(w, designated, d);
  } else {
    throw CliFailure{2, "colour make kind must be rho2good|coherent"};
  }
  GoodCheck chk = check_good(w, c);
  json j = colouring_to_json(c);
  j["check"] = {{"regressive", chk.regressive}, {"chain_injective", chk.chain_injective}};
  j["window_probe_hash"] = w.probe_hash();
  return {j, !chk.ok()};
}

std::pair<json, bool> op_colour_check(const json& p) {
  auto [w, spec] = window_from_json(p.contains("window_file")
                                        ? load_json_file(p.at("window_file"))
                                        : p.at("window"));
  GoodColouring c = colouring_from_json(p.contains("colouring_file")
                                            ? load_json_file(p.at("colouring_file"))
                                            : p.at("colouring"));
  GoodCheck chk = check_good(w, c);
  json j{{"regressive", chk.regressive}, {"chain_injective", chk.chain_injective}};
  if (chk.bad_node) j["bad_node"] = *chk.bad_node;
  if (chk.bad_chain) j["bad_chain"] = {chk.bad_chain->first, chk.bad_chain->second};
  return {j, !chk.ok()};
}

std::pair<json, bool> op_colour_transfer(const json& p) {
  auto [w0, spec0] = window_from_json(p.contains("w0_file")
                                          ? load_json_file(p.at("w0_file"))
                                          : p.at("w0"));
  auto [w2, spec2] = window_from_json(p.contains("w2_file")
                                          ? load_json_file(p.at("w2_file"))
                                          : p.at("w2"));
  GoodColouring d2 = colouring_from_json(p.contains("colouring_file")
                                             ? load_json_file(p.at("colouring_file"))
                                             : p.at("colouring"));
  GoodColouring c0 = transfer_rho2_to_rho0(w0, w2, d2);
  GoodCheck chk = check_good(w0, c0);
  json j = colouring_to_json(c0);
  j["check"] = {{"regressive", chk.regressive}, {"chain_injective", chk.chain_injective}};
  return {j, !chk.ok()};
}

std::pair<json, bool> op_colour_flip(const json& p) {
  auto [w, spec] = window_from_json(p.contains("window_file")
                                        ? load_json_file(p.at("window_file"))
                                        : p.at("window"));
  auto colour = colours_param(p.at("colours"));
  std::vector<Ordinal> A =
      p.contains("palette") ? ordlist_param(p, "palette") : std::vector<Ordinal>{};
  std::sort(A.begin(), A.end());
  FlipCheck chk = flipped_order_check(w, colour, A);
  json j{{"total_order", chk.total_order}};
  if (!chk.total_order) j["violation"] = chk.violation;
  return {j, !chk.total_order};
}

std::pair<json, bool> op_colour_rainbow(const json& p) {
  auto [w, spec] = window_from_json(p.contains("window_file")
                                        ? load_json_file(p.at("window_file"))
                                        : p.at("window"));
  auto colour = colours_param(p.at("colours"));
  auto rep = induced_pair_colouring(w, colour, ordlist_param(p, "witnesses"));
  json pc = json::object();
  for (const auto& [pr, c] : rep.pair_colours)
    pc[pr.first.render() + "," + pr.second.render()] = c.render();
  json j{{"rainbow_free", rep.rainbow_free}, {"pair_colours", pc}};
  if (rep.witness)
    j["witness"] = {(*rep.witness)[0].render(), (*rep.witness)[1].render(),
                    (*rep.witness)[2].render()};
  return {j, !rep.rainbow_free};
}

std::pair<json, bool> op_proj_verify(const json& p) {
  std::uint64_t n = p.value("n", 1u);
  std::string lemma = p.value("lemma", "hn");
  std::uint64_t seed = p.value("seed", 0ull);
  ProjectionFamily fam = build_family(n);
  VerifyReport rep;
  if (lemma == "hn") {
    rep = verify_hn(fam);
  } else if (lemma == "gn") {
    if (p.value("mode", "exhaustive") == "random")
      rep = verify_gn_random(fam, p.value("lmax", 1u), p.value("count", 1000u),
                             p.value("range", 1000000000ull), seed);
    else
      rep = verify_gn_exhaustive(fam, p.value("lmax", 1u), p.value("bound", 225u));
  } else if (lemma == "fn") {
    rep = verify_fn(fam, p.value("lmax", 2u), p.value("dmax", 8u),
                    p.value("lo", -10000), p.value("hi", 10000),
                    p.value("samples", 50u), seed);
  } else {
    throw CliFailure{2, "lemma must be hn|gn|fn"};
  }
  json j = verify_report_to_json(rep);
  j["n"] = n;
  j["lemma"] = lemma;
  j["primes"] = fam.primes;
  j["b"] = fam.b;
  return {j, !rep.ok};
}

std::pair<json, bool> op_proj_phi(const json& p) {
  std::vector<std::uint64_t> sigma;
  for (const auto& x : p.at("sigma")) sigma.push_back(x.get<std::uint64_t>());
  json j;
  j["phi"] = phi::eval(sigma);
  return {j, false};
}

std::pair<json, bool> op_stabiliser(const json& p) {
  auto inst = stabiliser_instance(p.value("b", 1u), p.value("c", 2u), p.value("m", 2u),
                               p.value("n", 2u));
  auto res = stabiliser_scenario(inst);
  json j;
  j["delta"] = inst.delta.render();
  j["eps"] = res.eps.render();
  j["tau"] = res.tau;
  j["qualifying"] = res.qualifying;
  j["ok"] = res.ok;
  if (!res.ok) j["failure"] = res.failure;
  return {j, !res.ok};
}

std::pair<json, bool> op_lab_meet(const json& p) {
  json inst_j = p.contains("instance_file") ? load_json_file(p.at("instance_file"))
                                            : p.at("instance");
  auto [w, spec] = window_from_json(inst_j.at("window"));
  MeetInstance inst;
  inst.window = std::move(w);
  inst.colour = colours_param(inst_j.at("colours"));
  inst.n = inst_j.value("n", 1u);
  inst.m = inst_j.value("m", 1u);
  for (const auto& t : inst_j.at("tuples"))
    inst.tuples.push_back(t.get<std::vector<std::size_t>>());
  Ordinal tau = parse_ordinal(inst_j.at("tau").get<std::string>());
  MeetVerdict v = check_meet_clause1(inst, tau);
  json j{{"witness_found", v.witness_found},
         {"label", v.label},
         {"pairs_scanned", v.pairs_scanned}};
  if (v.witness_found) j["pair"] = {v.first, v.second};
  return {j, false};
}

std::pair<json, bool> op_lab_entangled(const json& p) {
  json inst_j = p.contains("instance_file") ? load_json_file(p.at("instance_file"))
                                            : p.at("instance");
  EntangledInstance inst;
  for (const auto& row : inst_j.at("matrix"))
    inst.matrix.push_back(row.get<std::vector<std::uint64_t>>());
  inst.pattern = inst_j.at("pattern").get<std::vector<std::uint64_t>>();
  EntangledVerdict v = check_entangled(inst);
  json j{{"witness_found", v.witness_found}};
  if (v.witness_found) j["rows"] = {v.alpha, v.beta};
  return {j, false};
}

std::pair<json, bool> op_ord(const json& p) {
  std::string what = p.value("do", "eval");
  json j;
  if (what == "eval") {
    j["value"] = ord_param(p, "expr").render();
  } else if (what == "add") {
    j["value"] = (ord_param(p, "a") + ord_param(p, "b")).render();
  } else if (what == "mul") {
    j["value"] = (ord_param(p, "a") * ord_param(p, "b")).render();
  } else if (what == "cmp") {
    auto c = Ordinal::cmp(ord_param(p, "a"), ord_param(p, "b"));
    j["value"] = c < 0 ? "<" : (c > 0 ? ">" : "=");
  } else if (what == "fundseq") {
    j["value"] = fund_seq(ord_param(p, "delta"), p.value("k", 0ull)).render();
  } else if (what == "kind") {
    switch (cof_kind(ord_param(p, "x"))) {
      case CofKind::zero: j["value"] = "zero"; break;
      case CofKind::successor: j["value"] = "successor"; break;
      case CofKind::limit: j["value"] = "limit"; break;
    }
  } else {
    throw CliFailure{2, "ord: unknown action " + what};
  }
  return {j, false};
}

using Handler = std::pair<json, bool> (*)(const json&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"ord", op_ord},
      {"walk", op_walk},
      {"cseq_report", op_cseq_report},
      {"cseq_query", op_cseq_query},
      {"cseq_theta", op_cseq_theta},
      {"tree_build", op_tree_build},
      {"tree_check", op_tree_check},
      {"tree_flatten", op_tree_flatten},
      {"colour_make", op_colour_make},
      {"colour_check", op_colour_check},
      {"colour_transfer", op_colour_transfer},
      {"colour_flip", op_colour_flip},
      {"colour_rainbow", op_colour_rainbow},
      {"proj_verify", op_proj_verify},
      {"proj_phi", op_proj_phi},
      {"stabiliser", op_stabiliser},
      {"lab_meet", op_lab_meet},
      {"lab_entangled", op_lab_entangled},
  };
  return h;
}

int run_config(const json& config) {
  if (!config.is_object() || !config.contains("op"))
    throw CliFailure{2, "config must be an object with an \"op\" field"};
  std::string op = config.at("op").get<std::string>();
  auto it = handlers().find(op);
  if (it == handlers().end()) throw CliFailure{3, "unknown operation: " + op};
  json params = config.value("params", json::object());
  if (config.contains("seed")) params["seed"] = config["seed"];
  auto [rep, failed] = it->second(params);
  rep["op"] = op;
  if (config.contains("seed")) rep["seed"] = config["seed"];
  int code = 0;
  deliver(std::move(rep), config.value("out", ""), code, failed);
  return code;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

json ordlist_json(const std::string& csv) {
  json a = json::array();
  for (const auto& s : split_list(csv)) a.push_back(s);
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"walks on ordinals at desk scale"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  std::string out, provider_kind = "canonical", bound = "w^4", padding, entries_file;
  auto add_provider_flags = [&](CLI::App* c) {
    c->add_option("--out", out, "write the JSON report here instead of stdout");
    c->add_option("--provider", provider_kind, "canonical|file|transformed");
    c->add_option("--bound", bound, "working bound (ordinal notation)");
    c->add_option("--padding", padding, "successor padding F, e.g. 0,3");
    c->add_option("--entries", entries_file, "JSON file with ladder entries");
  };
  auto provider_json = [&]() {
    json p{{"kind", provider_kind}, {"bound", bound}};
    if (!padding.empty()) {
      json a = json::array();
      for (const auto& s : split_list(padding)) a.push_back(std::stoull(s));
      p["padding"] = a;
    }
    if (!entries_file.empty()) {
      // ladder files carry {"bound": ..., "entries": {...}}
      json f = load_json_file(entries_file);
      p["entries"] = f.at("entries");
      if (f.contains("bound")) p["bound"] = f["bound"];
      p["kind"] = "file";
    }
    return p;
  };

  json cfg;  // built by whichever subcommand runs

  // ord
  auto* ord = app.add_subcommand("ord", "ordinal arithmetic");
  std::string ord_do = "eval", ord_expr, ord_a, ord_b, ord_delta, ord_x;
  std::uint64_t ord_k = 0;
  ord->add_option("action", ord_do, "eval|add|mul|cmp|fundseq|kind");
  ord->add_option("--expr", ord_expr);
  ord->add_option("--a", ord_a);
  ord->add_option("--b", ord_b);
  ord->add_option("--delta", ord_delta);
  ord->add_option("--k", ord_k);
  ord->add_option("--x", ord_x);
  ord->add_option("--out", out);
  ord->callback([&] {
    json p{{"do", ord_do}};
    if (!ord_expr.empty()) p["expr"] = ord_expr;
    if (!ord_a.empty()) p["a"] = ord_a;
    if (!ord_b.empty()) p["b"] = ord_b;
    if (!ord_delta.empty()) p["delta"] = ord_delta;
    if (!ord_x.empty()) p["x"] = ord_x;
    p["k"] = ord_k;
    cfg = json{{"op", "ord"}, {"params", p}};
  });

  // walk
  auto* walk = app.add_subcommand("walk", "walk characteristics");
  std::string wbeta, wgamma, wpairs, wrect_as, wrect_bs;
  walk->add_option("--beta", wbeta);
  walk->add_option("--gamma", wgamma);
  walk->add_option("--pairs", wpairs, "JSON file with a list of [beta, gamma] pairs");
  walk->add_option("--rect-as", wrect_as, "rectangle diagnostic: comma list of lower ordinals");
  walk->add_option("--rect-bs", wrect_bs, "rectangle diagnostic: comma list of upper ordinals");
  add_provider_flags(walk);
  walk->callback([&] {
    json p{{"provider", provider_json()}};
    if (!wrect_as.empty()) {
      p["rect_as"] = ordlist_json(wrect_as);
      p["rect_bs"] = ordlist_json(wrect_bs);
    } else if (!wpairs.empty())
      p["pairs"] = load_json_file(wpairs).at("pairs");
    else {
      p["beta"] = wbeta;
      p["gamma"] = wgamma;
    }
    cfg = json{{"op", "walk"}, {"params", p}};
  });

  // cseq
  auto* cseq = app.add_subcommand("cseq", "C-sequence reports and queries");
  std::string cs_action = "report", cs_delta, cs_hi, cs_q = "min_above", cs_arg;
  cseq->add_option("action", cs_action, "report|query");
  cseq->add_option("--delta", cs_delta);
  cseq->add_option("--hi", cs_hi);
  cseq->add_option("--q", cs_q);
  cseq->add_option("--arg", cs_arg);
  add_provider_flags(cseq);
  cseq->callback([&] {
    json p{{"provider", provider_json()}, {"delta", cs_delta}};
    if (cs_action == "report") {
      p["hi"] = cs_hi;
      cfg = json{{"op", "cseq_report"}, {"params", p}};
    } else {
      p["q"] = cs_q;
      p["arg"] = cs_arg;
      cfg = json{{"op", "cseq_query"}, {"params", p}};
    }
  });

  // tree
  auto* tree = app.add_subcommand("tree", "tree windows");
  std::string tr_action = "build", tr_family = "rho0", tr_witness, tr_cuts, tr_probe,
              tr_window, tr_dot, tr_at;
  std::uint64_t tr_club = 0;
  bool tr_meets = false;
  tree->add_option("action", tr_action, "build|export|check|flatten");
  tree->add_option("--family", tr_family);
  tree->add_option("--witnesses", tr_witness);
  tree->add_option("--cuts", tr_cuts);
  tree->add_option("--probe", tr_probe);
  tree->add_option("--club-pow", tr_club, "close the probe under multiples of w^R");
  tree->add_flag("--meets", tr_meets, "close the window under meets");
  tree->add_option("--window", tr_window, "window JSON file (export/check/flatten)");
  tree->add_option("--dot", tr_dot, "DOT output path (export)");
  tree->add_option("--at", tr_at, "cuts for the coherence check");
  add_provider_flags(tree);
  tree->callback([&] {
    if (tr_action == "build") {
      json p{{"provider", provider_json()},
             {"family", tr_family},
             {"witnesses", ordlist_json(tr_witness)},
             {"cuts", ordlist_json(tr_cuts)},
             {"meet_closure", tr_meets}};
      if (!tr_probe.empty()) p["probe"] = ordlist_json(tr_probe);
      if (tr_club) p["club_pow"] = tr_club;
      cfg = json{{"op", "tree_build"}, {"params", p}};
    } else if (tr_action == "export") {
      auto [w, spec] = window_from_json(load_json_file(tr_window));
      std::ofstream f(tr_dot.empty() ? "window.dot" : tr_dot);
      if (!f) throw CliFailure{4, "cannot write DOT file"};
      f << window_to_dot(w);
      cfg = json();  // handled fully here
    } else if (tr_action == "check") {
      json p{{"window_file", tr_window}};
      if (!tr_at.empty()) p["at"] = ordlist_json(tr_at);
      cfg = json{{"op", "tree_check"}, {"params", p}};
    } else if (tr_action == "flatten") {
      json p{{"window_file", tr_window}};
      if (tr_club) p["club_pow"] = tr_club;
      cfg = json{{"op", "tree_flatten"}, {"params", p}};
    } else {
      throw CliFailure{3, "tree: unknown action " + tr_action};
    }
  });

  // colour
  auto* colour = app.add_subcommand("colour", "node colourings");
  std::string co_action = "make", co_kind = "rho2good", co_window, co_w2, co_colouring,
              co_pool, co_levels, co_palette, co_witnesses, co_colours_file;
  colour->add_option("action", co_action, "make|check|transfer|flip|rainbow");
  colour->add_option("--kind", co_kind);
  colour->add_option("--window", co_window);
  colour->add_option("--w2", co_w2, "rho2 window (transfer)");
  colour->add_option("--colouring", co_colouring);
  colour->add_option("--colours", co_colours_file, "plain node colour map (flip/rainbow)");
  colour->add_option("--pool", co_pool);
  colour->add_option("--levels", co_levels);
  colour->add_option("--palette", co_palette);
  colour->add_option("--witnesses", co_witnesses);
  colour->add_option("--out", out);
  colour->callback([&] {
    if (co_action == "make") {
      json p{{"window_file", co_window}, {"kind", co_kind}};
      if (!co_pool.empty()) p["pool"] = ordlist_json(co_pool);
      if (!co_levels.empty()) p["levels"] = ordlist_json(co_levels);
      cfg = json{{"op", "colour_make"}, {"params", p}};
    } else if (co_action == "check") {
      cfg = json{{"op", "colour_check"},
                 {"params", json{{"window_file", co_window},
                                 {"colouring_file", co_colouring}}}};
    } else if (co_action == "transfer") {
      cfg = json{{"op", "colour_transfer"},
                 {"params", json{{"w0_file", co_window},
                                 {"w2_file", co_w2},
                                 {"colouring_file", co_colouring}}}};
    } else if (co_action == "flip") {
      json p{{"window_file", co_window},
             {"colours", load_json_file(co_colours_file).at("colours")}};
      if (!co_palette.empty()) p["palette"] = ordlist_json(co_palette);
      cfg = json{{"op", "colour_flip"}, {"params", p}};
    } else if (co_action == "rainbow") {
      json p{{"window_file", co_window},
             {"colours", load_json_file(co_colours_file).at("colours")},
             {"witnesses", ordlist_json(co_witnesses)}};
      cfg = json{{"op", "colour_rainbow"}, {"params", p}};
    } else {
      throw CliFailure{3, "colour: unknown action " + co_action};
    }
  });

  // proj
  auto* proj = app.add_subcommand("proj", "projection-map verification");
  std::string pj_action = "verify", pj_lemma = "hn", pj_mode = "exhaustive", pj_sigma;
  std::uint64_t pj_n = 1, pj_lmax = 1, pj_dmax = 8, pj_count = 10000, pj_seed = 0,
                pj_samples = 50, pj_bound = 225;
  std::uint64_t pj_range = 1000000000ull;
  std::int64_t pj_lo = -10000, pj_hi = 10000;
  std::uint64_t pj_b = 1, pj_c = 2, pj_m = 2, pj_nn = 2;
  proj->add_option("action", pj_action, "build|verify|phi|stabiliser");
  proj->add_option("--n", pj_n);
  proj->add_option("--lemma", pj_lemma);
  proj->add_option("--mode", pj_mode);
  proj->add_option("--lmax", pj_lmax);
  proj->add_option("--dmax", pj_dmax);
  proj->add_option("--count", pj_count);
  proj->add_option("--range", pj_range);
  proj->add_option("--entry-bound", pj_bound);
  proj->add_option("--lo", pj_lo);
  proj->add_option("--hi", pj_hi);
  proj->add_option("--samples", pj_samples);
  proj->add_option("--seed", pj_seed);
  proj->add_option("--sigma", pj_sigma, "comma list of naturals");
  proj->add_option("--b", pj_b);
  proj->add_option("--c", pj_c);
  proj->add_option("--m", pj_m);
  proj->add_option("--nn", pj_nn, "matrix arity for the stabiliser scenario");
  proj->add_option("--out", out);
  proj->callback([&] {
    if (pj_action == "build") {
      ProjectionFamily fam = build_family(pj_n);
      cfg = json();
      json rep{{"n", pj_n}, {"primes", fam.primes}, {"b", fam.b}, {"tool", tool_stamp()}};
      std::cout << rep.dump(2) << "\n";
    } else if (pj_action == "verify") {
      json p{{"n", pj_n},       {"lemma", pj_lemma},   {"mode", pj_mode},
             {"lmax", pj_lmax}, {"dmax", pj_dmax},     {"count", pj_count},
             {"range", pj_range}, {"bound", pj_bound}, {"lo", pj_lo},
             {"hi", pj_hi},     {"samples", pj_samples}, {"seed", pj_seed}};
      cfg = json{{"op", "proj_verify"}, {"params", p}};
    } else if (pj_action == "phi") {
      json a = json::array();
      for (const auto& s : split_list(pj_sigma)) a.push_back(std::stoull(s));
      cfg = json{{"op", "proj_phi"}, {"params", json{{"sigma", a}}}};
    } else if (pj_action == "stabiliser") {
      cfg = json{{"op", "stabiliser"},
                 {"params", json{{"b", pj_b}, {"c", pj_c}, {"m", pj_m}, {"n", pj_nn}}}};
    } else {
      throw CliFailure{3, "proj: unknown action " + pj_action};
    }
  });

  // lab
  auto* lab = app.add_subcommand("lab", "finite-instance partition checks");
  std::string lab_action = "meet", lab_instance;
  lab->add_option("action", lab_action, "meet|entangled");
  lab->add_option("--instance", lab_instance, "instance JSON file");
  lab->add_option("--out", out);
  lab->callback([&] {
    json p{{"instance_file", lab_instance}};
    cfg = json{{"op", lab_action == "meet" ? "lab_meet" : "lab_entangled"},
               {"params", p}};
  });

  // run
  auto* run = app.add_subcommand("run", "execute an experiment config");
  std::string cfg_path;
  run->add_option("--config", cfg_path, "config JSON file")->required();
  run->callback([&] { cfg = load_json_file(cfg_path); });

  try {
    CLI11_PARSE(app, argc, argv);
    if (app.get_subcommands().empty()) {
      std::cout << app.help();
      return 0;
    }
    if (cfg.is_null()) return 0;  // handled inline (export, build info)
    if (!cfg.contains("out") && !out.empty()) cfg["out"] = out;
    return run_config(cfg);
  } catch (const CliFailure& f) {
    std::cerr << "error: " << f.msg << "\n";
    return f.code;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const QueryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
