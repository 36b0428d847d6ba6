#include "ordwalk/json_io.hpp"

namespace ordwalk {

json tool_stamp() { return json{{"name", kToolName}, {"version", kToolVersion}}; }

ProviderPtr ProviderSpec::build() const {
  if (kind == "canonical") return canonical_provider(bound, padding);
  if (kind == "file") return file_provider(bound, entries);
  if (kind == "transformed") {
    std::vector<std::shared_ptr<OrdSet>> zs;
    for (std::uint64_t i = 0; i < parts; ++i)
      zs.push_back(omega_coeff_residues(i + 1, modulus, bound));
    return transform_ladders(canonical_provider(bound, padding), zs,
                             multiples_of_omega_pow(2, bound));
  }
  throw std::invalid_argument("unknown provider kind: " + kind);
}

json ProviderSpec::to_json() const {
  json j;
  j["kind"] = kind;
  j["bound"] = bound.render();
  if (!padding.empty()) j["padding"] = padding;
  if (kind == "file") {
    json e = json::object();
    for (const auto& [idx, pts] : entries) {
      json lst = json::array();
      for (const auto& p : pts) lst.push_back(p.render());
      e[idx.render()] = lst;
    }
    j["entries"] = e;
  }
  if (kind == "transformed") {
    j["parts"] = parts;
    j["modulus"] = modulus;
  }
  return j;
}

ProviderSpec ProviderSpec::from_json(const json& j) {
  ProviderSpec s;
  s.kind = j.value("kind", "canonical");
  s.bound = parse_ordinal(j.at("bound").get<std::string>());
  if (j.contains("padding")) s.padding = j["padding"].get<std::vector<std::uint64_t>>();
  if (j.contains("entries"))
    for (const auto& [key, lst] : j["entries"].items()) {
      std::vector<Ordinal> pts;
      for (const auto& p : lst) pts.push_back(parse_ordinal(p.get<std::string>()));
      s.entries[parse_ordinal(key)] = pts;
    }
  s.parts = j.value("parts", 12u);
  s.modulus = j.value("modulus", 16u);
  return s;
}

namespace {

json ordvec(const std::vector<Ordinal>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.render());
  return a;
}

std::vector<Ordinal> ordvec_from(const json& a) {
  std::vector<Ordinal> v;
  for (const auto& x : a) v.push_back(parse_ordinal(x.get<std::string>()));
  return v;
}

std::string family_key(TreeFamily f) { return family_name(f); }

TreeFamily family_from(const std::string& s) {
  if (s == "rho0") return TreeFamily::rho0;
  if (s == "rho1") return TreeFamily::rho1;
  if (s == "rho2") return TreeFamily::rho2;
  if (s == "rho0*") return TreeFamily::rho0_flat;
  if (s == "rho2*") return TreeFamily::rho2_flat;
  throw std::invalid_argument("unknown tree family: " + s);
}

json value_to_json(const FiberValue& v) {
  if (std::holds_alternative<OrdSeq>(v)) return ordvec(std::get<OrdSeq>(v));
  if (std::holds_alternative<Ordinal>(v)) return std::get<Ordinal>(v).render();
  return std::get<std::int64_t>(v);
}

FiberValue value_from_json(TreeFamily fam, const json& j) {
  switch (fam) {
    case TreeFamily::rho0:
    case TreeFamily::rho0_flat:
      return ordvec_from(j);
    case TreeFamily::rho1:
      return parse_ordinal(j.get<std::string>());
    default:
      return j.get<std::int64_t>();
  }
}

}  // namespace

json walk_report_to_json(const WalkReport& r) {
  json j;
  j["beta"] = r.beta.render();
  j["gamma"] = r.gamma.render();
  j["trace"] = ordvec(r.trace);
  j["rho0"] = ordvec(r.rho0);
  j["rho1"] = r.rho1.render();
  j["rho2"] = r.rho2;
  j["lambda"] = r.lambda.render();
  j["lambda2"] = r.lambda2.render();
  j["last"] = r.last.render();
  return j;
}

json characteristic_report_to_json(const CharacteristicReport& r) {
  json j;
  j["delta"] = r.delta.render();
  j["hi"] = r.hi.render();
  j["flags"] = {{"A", r.A},   {"A'", r.A1}, {"R", r.R},
                {"R'", r.R1}, {"V", r.V},   {"V'", r.V1}};
  json ws = json::array();
  for (const auto& w : r.witnesses) {
    json e{{"flag", w.flag}, {"alpha", w.alpha.render()}};
    if (w.eps) e["eps"] = w.eps->render();
    ws.push_back(e);
  }
  j["witnesses"] = ws;
  j["probed_alphas"] = ordvec(r.probed_alphas);
  return j;
}

json window_to_json(const TreeWindow& w, const ProviderSpec& spec) {
  json j;
  j["family"] = family_key(w.family);
  j["provider"] = spec.to_json();
  j["provider_hash"] = w.provider_hash;
  j["probe"] = ordvec(w.probe);
  j["probe_hash"] = w.probe_hash();
  json nodes = json::array();
  for (std::size_t i = 0; i < w.nodes.size(); ++i) {
    json n;
    n["id"] = "n" + std::to_string(i);
    n["witness"] = w.nodes[i].witness.render();
    n["cut"] = w.nodes[i].cut.render();
    json vals = json::object();
    for (const auto& [k, v] : w.nodes[i].values) vals[k.render()] = value_to_json(v);
    n["values"] = vals;
    nodes.push_back(n);
  }
  j["nodes"] = nodes;
  json pi = json::array();
  for (const auto& [key, idx] : w.pair_index)
    pi.push_back(json::array({key.first.render(), key.second.render(), idx}));
  j["pair_index"] = pi;
  return j;
}

std::pair<TreeWindow, ProviderSpec> window_from_json(const json& j) {
  TreeWindow w;
  ProviderSpec spec = ProviderSpec::from_json(j.at("provider"));
  w.family = family_from(j.at("family").get<std::string>());
  w.provider_hash = j.value("provider_hash", 0ull);
  w.probe = ordvec_from(j.at("probe"));
  for (const auto& n : j.at("nodes")) {
    TreeNode t;
    t.witness = parse_ordinal(n.at("witness").get<std::string>());
    t.cut = parse_ordinal(n.at("cut").get<std::string>());
    for (const auto& [k, v] : n.at("values").items())
      t.values.emplace(parse_ordinal(k), value_from_json(w.family, v));
    w.nodes.push_back(std::move(t));
  }
  if (j.contains("pair_index"))
    for (const auto& e : j["pair_index"])
      w.pair_index[{parse_ordinal(e[0].get<std::string>()),
                    parse_ordinal(e[1].get<std::string>())}] = e[2].get<std::size_t>();
  return {std::move(w), std::move(spec)};
}

json colouring_to_json(const GoodColouring& c) {
  json j;
  j["provenance"] = c.provenance;
  j["levels"] = ordvec(c.levels);
  json m = json::object();
  for (const auto& [i, col] : c.colours) m["n" + std::to_string(i)] = col.render();
  j["colours"] = m;
  return j;
}

GoodColouring colouring_from_json(const json& j) {
  GoodColouring c;
  c.provenance = j.value("provenance", "");
  c.levels = ordvec_from(j.at("levels"));
  for (const auto& [key, val] : j.at("colours").items()) {
    if (key.empty() || key[0] != 'n')
      throw std::invalid_argument("colouring: bad node id " + key);
    c.colours[std::stoull(key.substr(1))] = parse_ordinal(val.get<std::string>());
  }
  return c;
}

std::string window_to_dot(const TreeWindow& w) {
  // parent of a node: its restriction to the previous cut present
  std::vector<Ordinal> cuts = w.cuts();
  std::string out = "digraph window {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < w.nodes.size(); ++i)
    out += "  n" + std::to_string(i) + " [label=\"n" + std::to_string(i) + "@" +
           w.nodes[i].cut.render() + "\"];\n";
  for (std::size_t i = 0; i < w.nodes.size(); ++i) {
    const TreeNode& t = w.nodes[i];
    Ordinal prev;
    bool has_prev = false;
    for (const auto& c : cuts)
      if (c < t.cut) {
        prev = c;
        has_prev = true;
      }
    if (!has_prev) continue;
    auto p = w.find(restrict_node(t, prev));
    if (p) out += "  n" + std::to_string(i) + " -> n" + std::to_string(*p) + ";\n";
  }
  // lex-sorted siblings per level
  for (const auto& c : cuts) {
    auto lvl = w.level(c);
    std::sort(lvl.begin(), lvl.end(), [&](std::size_t a, std::size_t b) {
      return lex_compare(w.nodes[a], w.nodes[b]) == std::strong_ordering::less;
    });
    out += "  { rank=same;";
    for (auto i : lvl) out += " n" + std::to_string(i) + ";";
    out += " }\n";
  }
  out += "}\n";
  return out;
}

json verify_report_to_json(const VerifyReport& r) {
  json j;
  j["ok"] = r.ok;
  j["cases"] = r.cases;
  j["branch_nonneg"] = r.branch_nonneg;
  j["branch_reflect"] = r.branch_reflect;
  if (r.failure) {
    json f;
    f["p"] = r.failure->p;
    f["l"] = r.failure->l;
    f["d"] = r.failure->d;
    f["what"] = r.failure->what;
    j["failure"] = f;
  }
  return j;
}

}  // namespace ordwalk
