#include "etalerep/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "etalerep/errors.hpp"

namespace etalerep {

Json report_envelope(const std::string& command, std::uint64_t seed) {
  Json j;
  j["schema_version"] = 1;
  j["command"] = command;
  j["seed"] = seed;
  const char* threads = std::getenv("ETALEREP_THREADS");
  j["threads"] = threads ? std::atoi(threads) : 1;
  j["convention"] = convention_note;
  return j;
}

std::string serialize_report(const Json& report) { return report.dump(2) + "\n"; }

void write_report_file(const Json& report, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot open output file: " + tmp);
    out << serialize_report(report);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw input_error("cannot move report into place: " + path);
}

Json graph_to_json(const DirectedGraph& g) {
  Json j;
  j["vertices"] = Json::array();
  for (int v = 0; v < g.vertex_count(); ++v) j["vertices"].push_back(g.vertex_id(v));
  j["edges"] = Json::array();
  for (int e = 0; e < g.edge_count(); ++e) {
    Json je;
    je["id"] = g.edge_id(e);
    je["src"] = g.vertex_id(g.edge(e).src);
    je["dst"] = g.vertex_id(g.edge(e).dst);
    j["edges"].push_back(je);
  }
  return j;
}

DirectedGraph graph_from_json(const Json& j) {
  if (!j.contains("vertices") || !j.contains("edges"))
    throw input_error("graph JSON needs 'vertices' and 'edges'");
  std::vector<std::string> vertices;
  for (const auto& v : j.at("vertices")) vertices.push_back(v.get<std::string>());
  std::vector<std::tuple<std::string, std::string, std::string>> edges;
  for (const auto& e : j.at("edges"))
    edges.emplace_back(e.at("id").get<std::string>(), e.at("src").get<std::string>(),
                       e.at("dst").get<std::string>());
  return DirectedGraph(std::move(vertices), std::move(edges));
}

Json weights_to_json(const DirectedGraph& g, const MarkovWeights& w) {
  Json mu0 = Json::object();
  for (int v = 0; v < g.vertex_count(); ++v) mu0[g.vertex_id(v)] = format_rational(w.mu0[v]);
  Json p = Json::object();
  for (int e = 0; e < g.edge_count(); ++e) p[g.edge_id(e)] = format_rational(w.p[e]);
  return Json{{"mu0", mu0}, {"p", p}};
}

MarkovWeights weights_from_json(const DirectedGraph& g, const Json& j) {
  MarkovWeights w;
  w.mu0.assign(g.vertex_count(), 0);
  w.p.assign(g.edge_count(), 0);
  for (const auto& [key, value] : j.at("mu0").items()) {
    int v = g.vertex_index(key);
    if (v < 0) throw input_error("mu0 references unknown vertex " + key);
    w.mu0[v] = parse_rational(value.get<std::string>());
  }
  for (const auto& [key, value] : j.at("p").items()) {
    int e = g.edge_index(key);
    if (e < 0) throw input_error("p references unknown edge " + key);
    w.p[e] = parse_rational(value.get<std::string>());
  }
  return w;
}

Json path_to_json(const DirectedGraph& g, const Path& p) {
  if (p.is_empty()) return Json{{"vertex", g.vertex_id(p.range())}};
  Json j = Json::array();
  for (int e : p.edges()) j.push_back(g.edge_id(e));
  return j;
}

Path path_from_json(const DirectedGraph& g, const Json& j) {
  if (j.is_object()) {
    int v = g.vertex_index(j.at("vertex").get<std::string>());
    if (v < 0) throw input_error("path references unknown vertex");
    return Path::empty_at(g, v);
  }
  std::vector<std::string> ids;
  for (const auto& e : j) ids.push_back(e.get<std::string>());
  return Path::from_edge_ids(g, ids);
}

Json element_to_json(const DirectedGraph& g, const AlgebraElement& f) {
  Json j = Json::array();
  for (const auto& [s, c] : f.terms()) {
    Json term;
    term["alpha"] = s.alpha.is_empty() ? Json::array() : path_to_json(g, s.alpha);
    term["beta"] = s.beta.is_empty() ? Json::array() : path_to_json(g, s.beta);
    if (s.alpha.is_empty() && s.beta.is_empty()) term["vertex"] = g.vertex_id(s.source());
    term["coeff"] = format_rational(c);
    j.push_back(term);
  }
  return j;
}

namespace {

Path element_leg(const DirectedGraph& g, const Json& leg, const Json& term,
                 const Path* other) {
  if (leg.is_array() && leg.empty()) {
    if (other && !other->is_empty()) return Path::empty_at(g, other->source());
    if (term.contains("vertex")) {
      int v = g.vertex_index(term.at("vertex").get<std::string>());
      if (v < 0) throw input_error("element term references unknown vertex");
      return Path::empty_at(g, v);
    }
    throw input_error("term with two empty legs needs a 'vertex' field");
  }
  return path_from_json(g, leg);
}

}  // namespace

AlgebraElement element_from_json(const DirectedGraph& g, const Json& j) {
  AlgebraElement f;
  for (const auto& term : j) {
    // resolve the nonempty leg first so an empty one can infer its vertex
    const Json& alpha_json = term.at("alpha");
    const Json& beta_json = term.at("beta");
    bool alpha_empty = alpha_json.is_array() && alpha_json.empty();
    Path first = alpha_empty ? element_leg(g, beta_json, term, nullptr)
                             : element_leg(g, alpha_json, term, nullptr);
    Path second = alpha_empty ? element_leg(g, alpha_json, term, &first)
                              : element_leg(g, beta_json, term, &first);
    Path alpha = alpha_empty ? second : first;
    Path beta = alpha_empty ? first : second;
    f.add(make_symbol(g, alpha, beta), parse_rational(term.at("coeff").get<std::string>()));
  }
  return f;
}

Json ifs_to_json(const IFSSpec& spec) {
  Json j;
  j["N"] = spec.branches;
  Json weights = Json::array();
  for (const auto& w : spec.weights) weights.push_back(format_rational(w));
  j["weights"] = weights;
  j["totally_disconnected"] = spec.totally_disconnected;
  return j;
}

IFSSpec ifs_from_json(const Json& j) {
  IFSSpec spec;
  spec.branches = j.at("N").get<int>();
  if (j.contains("weights")) {
    for (const auto& w : j.at("weights")) spec.weights.push_back(parse_rational(w.get<std::string>()));
  } else {
    spec.weights.assign(spec.branches, Rational(1, spec.branches));
  }
  spec.totally_disconnected = j.value("totally_disconnected", true);
  spec.validate();
  return spec;
}

Json cell_to_json(const FractafoldCell& cell) {
  return Json{{"base", cell.base}, {"level", cell.level}, {"fractal", cell.fractal}};
}

FractafoldCell cell_from_json(const Json& j) {
  FractafoldCell c;
  for (const auto& b : j.at("base")) c.base.push_back(b.get<int>());
  c.level = j.at("level").get<int>();
  for (const auto& u : j.at("fractal")) c.fractal.push_back(u.get<int>());
  return c;
}

namespace {

Json sparse_to_json(const SparseMat& m, int domain_depth, int codomain_depth) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["domain_depth"] = domain_depth;
  j["codomain_depth"] = codomain_depth;
  Json entries = Json::array();
  for (const auto& [ij, v] : m.entries())
    entries.push_back(Json::array({ij.first, ij.second, format_rational(v)}));
  j["entries"] = entries;
  return j;
}

}  // namespace

Json koopman_to_json(const DirectedGraph& g, const MarkovWeights& w, const KoopmanOp& op) {
  (void)g;
  (void)w;
  Json blocks = Json::array();
  for (const auto& [k, m] : op.blocks)
    blocks.push_back(sparse_to_json(m, op.domain_depth, op.domain_depth + k));
  if (blocks.size() == 1) return blocks.front();
  return Json{{"blocks", blocks}};
}

Json ck_report_to_json(const CkReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json jc;
    jc["identity"] = c.name;
    jc["status"] = c.pass ? "pass" : "fail";
    if (!c.pass) jc["witness"] = c.witness;
    checks.push_back(jc);
  }
  return Json{{"status", r.pass ? "pass" : "fail"}, {"identities", checks}};
}

Json kernel_report_to_json(const DirectedGraph& g, const KernelReport& r) {
  Json j;
  j["status"] = r.pass ? "pass" : "fail";
  j["symbols_checked"] = r.symbols_checked;
  Json mismatches = Json::array();
  for (const auto& m : r.mismatches) {
    Json jm;
    jm["alpha"] = path_to_json(g, m.symbol.alpha);
    jm["beta"] = path_to_json(g, m.symbol.beta);
    jm["matrix_zero"] = m.matrix_zero;
    jm["source_in_H"] = m.source_in_h;
    mismatches.push_back(jm);
  }
  j["mismatches"] = mismatches;
  return j;
}

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

Json norm_report_to_json(const NormReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json jr;
    jr["depth"] = row.depth;
    jr["n_kappa"] = format_double(row.n_kappa);
    jr["n_rho"] = format_double(row.n_rho);
    jr["n_ind"] = format_double(row.n_ind);
    rows.push_back(jr);
  }
  Json j;
  j["schedule"] = rows;
  j["kappa_stabilized"] = r.kappa_stabilized;
  j["rho_stabilized"] = r.rho_stabilized;
  j["ind_stabilized"] = r.ind_stabilized;
  if (r.chain_holds) j["chain_n_ind<=n_kappa<=n_rho"] = *r.chain_holds;
  if (r.equality_holds) j["equality_|n_kappa-n_rho|<=1e-6"] = *r.equality_holds;
  switch (r.status) {
    case NormStatus::pass: j["status"] = "pass"; break;
    case NormStatus::fail: j["status"] = "fail"; break;
    case NormStatus::inconclusive: j["status"] = "inconclusive"; break;
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json validation_to_json(const ValidationReport& r) {
  Json issues = Json::array();
  for (const auto& issue : r.issues)
    issues.push_back(Json{{"kind", issue.kind}, {"subject", issue.subject}, {"detail", issue.detail}});
  return Json{{"status", r.pass ? "pass" : "fail"}, {"violations", issues}};
}

}  // namespace etalerep
