#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "etalerep/errors.hpp"
#include "etalerep/report.hpp"

using namespace etalerep;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// File path or inline JSON (inline input starts with '{' or '[').
Json load_json(const std::string& spec) {
  std::string text = (!spec.empty() && (spec.front() == '{' || spec.front() == '[')) ? spec
                                                                                     : slurp(spec);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw input_error("malformed JSON in " + spec);
  return j;
}

DirectedGraph load_graph(const std::string& spec) { return graph_from_json(load_json(spec)); }

MarkovWeights load_weights(const DirectedGraph& g, const std::string& spec) {
  if (spec == "uniform") return MarkovWeights::uniform(g);
  return weights_from_json(g, load_json(spec));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

int emit(const Json& report, const std::string& out_path, int exit_code) {
  Json j = report;
  j["exit_code"] = exit_code;
  if (out_path.empty())
    std::cout << serialize_report(j);
  else
    write_report_file(j, out_path);
  return exit_code;
}

struct CommonOpts {
  std::string out;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--out", opts.out, "write the JSON report here (atomic)");
  cmd->add_option("--seed", opts.seed, "seed echoed into the report");
}

TransferSpec psi_from_option(const DirectedGraph& g, const MarkovWeights& w,
                             const std::string& spec) {
  if (spec == "markov") return TransferSpec::markov_density(g, w);
  if (spec == "p") return TransferSpec::per_edge(g, w.p);
  if (spec.rfind("const:", 0) == 0) return TransferSpec::constant(g, parse_rational(spec.substr(6)));
  // JSON object {edge id: value}
  Json j = load_json(spec);
  std::vector<Rational> values(g.edge_count(), 0);
  for (const auto& [key, value] : j.items()) {
    int e = g.edge_index(key);
    if (e < 0) throw input_error("psi references unknown edge " + key);
    values[e] = parse_rational(value.get<std::string>());
  }
  return TransferSpec::per_edge(g, values);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact matrix models of graph-groupoid representations"};
  app.require_subcommand(1);

  // ---- graph ----------------------------------------------------------
  auto* graph_cmd = app.add_subcommand("graph", "directed-graph combinatorics");
  graph_cmd->require_subcommand(1);

  std::string g_graph, g_group = "Z2", g_cocycle;
  int g_bound = 20;
  bool g_edge_reversed = false;
  CommonOpts g_opts;

  auto* validate_cmd = graph_cmd->add_subcommand("validate", "check the standing hypotheses");
  validate_cmd->add_option("--graph", g_graph)->required();
  add_common(validate_cmd, g_opts);

  auto* lattice_cmd = graph_cmd->add_subcommand("lattice", "saturated hereditary subsets");
  lattice_cmd->add_option("--graph", g_graph)->required();
  lattice_cmd->add_option("--bound", g_bound, "max vertex count for enumeration");
  lattice_cmd->add_flag("--edge-reversed", g_edge_reversed,
                        "enumerate on the edge-reversed graph (the ideal-regime closures)");
  add_common(lattice_cmd, g_opts);

  auto* ck_cmd = graph_cmd->add_subcommand("condition-k", "per-vertex return-path classes");
  ck_cmd->add_option("--graph", g_graph)->required();
  add_common(ck_cmd, g_opts);

  auto* skew_cmd = graph_cmd->add_subcommand("skew", "skew-product graph for a finite group");
  skew_cmd->add_option("--graph", g_graph)->required();
  skew_cmd->add_option("--group", g_group, "Zn or a group-table JSON file");
  skew_cmd->add_option("--cocycle", g_cocycle, "comma list edge=element-index")->required();
  add_common(skew_cmd, g_opts);

  // ---- measure --------------------------------------------------------
  auto* measure_cmd = app.add_subcommand("measure", "quasi-invariant measures");
  measure_cmd->require_subcommand(1);

  std::string m_graph, m_weights = "uniform", m_ratios, m_psi = "markov", m_element;
  double m_tol = 1e-12;
  int m_depth = 4;
  CommonOpts m_opts;

  auto* markov_cmd = measure_cmd->add_subcommand("markov", "validate weights, report diagnostics");
  markov_cmd->add_option("--graph", m_graph)->required();
  markov_cmd->add_option("--weights", m_weights);
  add_common(markov_cmd, m_opts);

  auto* hausdorff_cmd = measure_cmd->add_subcommand("hausdorff", "Moran equation solver");
  hausdorff_cmd->add_option("--ratios", m_ratios, "comma list of contraction ratios")->required();
  hausdorff_cmd->add_option("--tol", m_tol, "residual tolerance");
  add_common(hausdorff_cmd, m_opts);

  auto* transfer_cmd = measure_cmd->add_subcommand("transfer-check", "dual fixed point of L_psi");
  transfer_cmd->add_option("--graph", m_graph)->required();
  transfer_cmd->add_option("--weights", m_weights);
  transfer_cmd->add_option("--psi", m_psi, "markov | p | const:VALUE | JSON {edge: value}");
  transfer_cmd->add_option("--depth", m_depth);
  add_common(transfer_cmd, m_opts);

  auto* kms_cmd = measure_cmd->add_subcommand("kms", "KMS state and inverse temperature");
  kms_cmd->add_option("--graph", m_graph)->required();
  kms_cmd->add_option("--weights", m_weights);
  kms_cmd->add_option("--element", m_element, "algebra element JSON to evaluate");
  add_common(kms_cmd, m_opts);

  // ---- koopman --------------------------------------------------------
  auto* koopman_cmd = app.add_subcommand("koopman", "exact Koopman-matrix computations");
  koopman_cmd->require_subcommand(1);

  std::string k_graph, k_weights = "uniform", k_element, k_h, k_schedule = "2,3,4,5", k_csv;
  int k_depth = 4, k_headroom = 0, k_samples = 6;
  CommonOpts k_opts;

  auto* matrix_cmd = koopman_cmd->add_subcommand("matrix", "realize kappa(f) at a depth");
  matrix_cmd->add_option("--graph", k_graph)->required();
  matrix_cmd->add_option("--weights", k_weights);
  matrix_cmd->add_option("--element", k_element)->required();
  matrix_cmd->add_option("--depth", k_depth);
  matrix_cmd->add_option("--headroom", k_headroom);
  matrix_cmd->add_option("--csv", k_csv, "also write entries as CSV triplets");
  add_common(matrix_cmd, k_opts);

  auto* verify_cmd = koopman_cmd->add_subcommand("verify-ck", "Cuntz-Krieger relations");
  verify_cmd->add_option("--graph", k_graph)->required();
  verify_cmd->add_option("--weights", k_weights);
  verify_cmd->add_option("--depth", k_depth);
  add_common(verify_cmd, k_opts);

  auto* kernel_cmd = koopman_cmd->add_subcommand("kernel", "kernel/ideal correspondence");
  kernel_cmd->add_option("--graph", k_graph)->required();
  kernel_cmd->add_option("--H", k_h, "comma list of vertices")->required();
  kernel_cmd->add_option("--depth", k_depth);
  add_common(kernel_cmd, k_opts);

  auto* norms_cmd = koopman_cmd->add_subcommand("norms", "compression-norm comparison");
  norms_cmd->add_option("--graph", k_graph)->required();
  norms_cmd->add_option("--weights", k_weights);
  norms_cmd->add_option("--element", k_element)->required();
  norms_cmd->add_option("--schedule", k_schedule, "comma list of depths");
  norms_cmd->add_option("--samples", k_samples, "sampled base points per depth");
  add_common(norms_cmd, k_opts);

  // ---- fractafold -----------------------------------------------------
  auto* fract_cmd = app.add_subcommand("fractafold", "IFS fractafold bundle");
  fract_cmd->require_subcommand(1);

  int f_n = 2, f_level = 4, f_fractal = 0;
  std::string f_weights, f_cell;
  CommonOpts f_opts;

  auto* fverify_cmd = fract_cmd->add_subcommand("verify", "O_N relations on cell bases");
  fverify_cmd->add_option("--N", f_n)->required();
  fverify_cmd->add_option("--weights", f_weights, "comma list, default uniform");
  fverify_cmd->add_option("--level", f_level);
  fverify_cmd->add_option("--fractal-depth", f_fractal);
  add_common(fverify_cmd, f_opts);

  auto* fmeasure_cmd = fract_cmd->add_subcommand("measure", "mu_infinity of a cell");
  fmeasure_cmd->add_option("--N", f_n)->required();
  fmeasure_cmd->add_option("--weights", f_weights);
  fmeasure_cmd->add_option("--cell", f_cell, "cell JSON {base, level, fractal}")->required();
  add_common(fmeasure_cmd, f_opts);

  // ---- cayley ---------------------------------------------------------
  auto* cayley_cmd = app.add_subcommand("cayley", "Cayley-graph balls");
  cayley_cmd->require_subcommand(1);

  std::string c_graph, c_base;
  int c_radius = 2;
  CommonOpts c_opts;

  auto* ball_cmd = cayley_cmd->add_subcommand("ball", "ball over a truncated base point");
  ball_cmd->add_option("--graph", c_graph)->required();
  ball_cmd->add_option("--base", c_base, "comma list of edge ids")->required();
  ball_cmd->add_option("--radius", c_radius);
  add_common(ball_cmd, c_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : exit_input_error;
  }

  try {
    // graph -------------------------------------------------------------
    if (*validate_cmd) {
      Json report = report_envelope("graph validate", g_opts.seed);
      auto j = load_json(g_graph);
      std::vector<std::string> vertices;
      for (const auto& v : j.at("vertices")) vertices.push_back(v.get<std::string>());
      std::vector<std::tuple<std::string, std::string, std::string>> edges;
      for (const auto& e : j.at("edges"))
        edges.emplace_back(e.at("id").get<std::string>(), e.at("src").get<std::string>(),
                           e.at("dst").get<std::string>());
      auto result = validate_graph(vertices, edges);
      report["result"] = validation_to_json(result);
      return emit(report, g_opts.out, result.pass ? exit_pass : exit_check_failed);
    }
    if (*lattice_cmd) {
      Json report = report_envelope("graph lattice", g_opts.seed);
      DirectedGraph g = load_graph(g_graph);
      DirectedGraph target = g_edge_reversed ? g.reversed() : g;
      auto lattice = saturated_hereditary_lattice(target, g_bound);
      Json sets = Json::array();
      for (const auto& H : lattice) {
        Json ids = Json::array();
        for (int v : H) ids.push_back(target.vertex_id(v));
        sets.push_back(ids);
      }
      report["edge_reversed"] = g_edge_reversed;
      report["lattice"] = sets;
      return emit(report, g_opts.out, exit_pass);
    }
    if (*ck_cmd) {
      Json report = report_envelope("graph condition-k", g_opts.seed);
      DirectedGraph g = load_graph(g_graph);
      auto result = satisfies_condition_k(g);
      report["satisfied"] = result.satisfied;
      report["note"] = result.note;
      Json classes = Json::object();
      for (int v = 0; v < g.vertex_count(); ++v)
        classes[g.vertex_id(v)] = result.loop_class[v] >= 2 ? ">=2"
                                                            : std::to_string(result.loop_class[v]);
      report["loop_classes"] = classes;
      Json offenders = Json::array();
      for (int v : result.offending_vertices) offenders.push_back(g.vertex_id(v));
      report["offending_vertices"] = offenders;
      return emit(report, g_opts.out, result.satisfied ? exit_pass : exit_check_failed);
    }
    if (*skew_cmd) {
      Json report = report_envelope("graph skew", g_opts.seed);
      DirectedGraph g = load_graph(g_graph);
      FiniteGroup group;
      if (g_group.size() > 1 && (g_group[0] == 'Z' || g_group[0] == 'z')) {
        group = cyclic_group(std::stoi(g_group.substr(1)));
      } else {
        Json jg = load_json(g_group);
        for (const auto& id : jg.at("elements")) group.element_ids.push_back(id.get<std::string>());
        for (const auto& row : jg.at("table")) {
          group.table.emplace_back();
          for (const auto& x : row) group.table.back().push_back(x.get<int>());
        }
        group.identity = 0;
      }
      std::vector<int> cocycle(g.edge_count(), -1);
      for (const auto& part : split(g_cocycle, ',')) {
        auto kv = split(part, '=');
        if (kv.size() != 2) throw input_error("cocycle entries look like edge=index");
        int e = g.edge_index(kv[0]);
        if (e < 0) throw input_error("cocycle references unknown edge " + kv[0]);
        cocycle[e] = std::stoi(kv[1]);
      }
      for (int e = 0; e < g.edge_count(); ++e)
        if (cocycle[e] < 0) throw input_error("cocycle must cover every edge");
      DirectedGraph sp = skew_product(g, group, cocycle);
      report["skew_product"] = graph_to_json(sp);
      report["quotient_isomorphic_to_base"] =
          graphs_isomorphic(skew_product_quotient(g, group, cocycle), g);
      return emit(report, g_opts.out, exit_pass);
    }

    // measure -----------------------------------------------------------
    if (*markov_cmd) {
      Json report = report_envelope("measure markov", m_opts.seed);
      DirectedGraph g = load_graph(m_graph);
      MarkovWeights w = load_weights(g, m_weights);
      WeightRegime regime = w.validate(g);
      report["weights"] = weights_to_json(g, w);
      report["regime"] = regime == WeightRegime::full_support ? "full_support"
                         : regime == WeightRegime::ideal      ? "ideal"
                                                              : "totally_degenerate";
      if (regime == WeightRegime::full_support) {
        Json cocycle = Json::object();
        for (int e = 0; e < g.edge_count(); ++e)
          cocycle[g.edge_id(e)] = format_rational(radon_nikodym(g, w, edge_symbol(g, e)));
        report["edge_cocycle"] = cocycle;
        auto beta = kms_inverse_temperature(g, w);
        if (beta)
          report["kms_inverse_temperature"] = *beta;
        else
          report["kms_inverse_temperature"] = nullptr;
      }
      return emit(report, m_opts.out, exit_pass);
    }
    if (*hausdorff_cmd) {
      Json report = report_envelope("measure hausdorff", m_opts.seed);
      std::vector<double> ratios;
      for (const auto& r : split(m_ratios, ',')) ratios.push_back(to_double(parse_rational(r)));
      double s = hausdorff_dimension(ratios, m_tol);
      double residual = -1.0;
      for (double r : ratios) residual += std::pow(r, s);
      report["hdim"] = s;
      report["residual"] = residual;
      report["tol"] = m_tol;
      return emit(report, m_opts.out, exit_pass);
    }
    if (*transfer_cmd) {
      Json report = report_envelope("measure transfer-check", m_opts.seed);
      DirectedGraph g = load_graph(m_graph);
      MarkovWeights w = load_weights(g, m_weights);
      TransferSpec psi = psi_from_option(g, w, m_psi);
      auto result = is_transfer_fixed(g, w, psi, m_depth);
      report["depth"] = m_depth;
      report["fixed"] = result.fixed;
      if (!result.fixed) {
        report["first_violation"] = path_to_json(g, *result.first_violation);
        report["lhs"] = format_rational(result.lhs);
        report["rhs"] = format_rational(result.rhs);
      }
      return emit(report, m_opts.out, result.fixed ? exit_pass : exit_check_failed);
    }
    if (*kms_cmd) {
      Json report = report_envelope("measure kms", m_opts.seed);
      DirectedGraph g = load_graph(m_graph);
      MarkovWeights w = load_weights(g, m_weights);
      auto beta = kms_inverse_temperature(g, w);
      if (beta)
        report["inverse_temperature"] = *beta;
      else
        report["inverse_temperature"] = nullptr;
      if (!m_element.empty()) {
        AlgebraElement f = element_from_json(g, load_json(m_element));
        report["state_value"] = format_rational(kms_state_eval(g, w, f));
      }
      return emit(report, m_opts.out, exit_pass);
    }

    // koopman -------------------------------------------------------------
    if (*matrix_cmd) {
      Json report = report_envelope("koopman matrix", k_opts.seed);
      DirectedGraph g = load_graph(k_graph);
      MarkovWeights w = load_weights(g, k_weights);
      AlgebraElement f = element_from_json(g, load_json(k_element));
      KoopmanOp op = koopman_matrix(g, w, f, k_depth, k_headroom);
      report["matrix"] = koopman_to_json(g, w, op);
      if (!k_csv.empty()) {
        std::ofstream csv(k_csv, std::ios::trunc);
        if (!csv) throw input_error("cannot open CSV output: " + k_csv);
        csv << "degree,row,col,value\n";
        for (const auto& [deg, m] : op.blocks)
          for (const auto& [ij, v] : m.entries())
            csv << deg << "," << ij.first << "," << ij.second << "," << format_rational(v) << "\n";
      }
      return emit(report, k_opts.out, exit_pass);
    }
    if (*verify_cmd) {
      Json report = report_envelope("koopman verify-ck", k_opts.seed);
      DirectedGraph g = load_graph(k_graph);
      MarkovWeights w = load_weights(g, k_weights);
      auto result = verify_cuntz_krieger(g, w, k_depth);
      report["depth"] = k_depth;
      report["result"] = ck_report_to_json(result);
      return emit(report, k_opts.out, result.pass ? exit_pass : exit_check_failed);
    }
    if (*kernel_cmd) {
      Json report = report_envelope("koopman kernel", k_opts.seed);
      DirectedGraph g = load_graph(k_graph);
      VertexSet H = vertex_set_from_ids(g, split(k_h, ','));
      auto result = kernel_ideal(g, H, k_depth);
      report["depth"] = k_depth;
      report["result"] = kernel_report_to_json(g, result);
      return emit(report, k_opts.out, result.pass ? exit_pass : exit_check_failed);
    }
    if (*norms_cmd) {
      Json report = report_envelope("koopman norms", k_opts.seed);
      DirectedGraph g = load_graph(k_graph);
      MarkovWeights w = load_weights(g, k_weights);
      AlgebraElement f = element_from_json(g, load_json(k_element));
      std::vector<int> schedule;
      for (const auto& part : split(k_schedule, ',')) schedule.push_back(std::stoi(part));
      NormReport result = compare_norms(g, w, f, schedule, k_opts.seed, k_samples);
      report["result"] = norm_report_to_json(result);
      int code = result.status == NormStatus::pass           ? exit_pass
                 : result.status == NormStatus::inconclusive ? exit_inconclusive
                                                             : exit_check_failed;
      return emit(report, k_opts.out, code);
    }

    // fractafold ----------------------------------------------------------
    if (*fverify_cmd || *fmeasure_cmd) {
      IFSSpec spec;
      spec.branches = f_n;
      if (f_weights.empty()) {
        spec.weights.assign(f_n, Rational(1, f_n));
      } else {
        for (const auto& part : split(f_weights, ',')) spec.weights.push_back(parse_rational(part));
      }
      spec.totally_disconnected = true;
      spec.validate();
      if (*fverify_cmd) {
        Json report = report_envelope("fractafold verify", f_opts.seed);
        auto result = verify_on_fractafold(spec, f_level, f_fractal);
        report["level"] = f_level;
        report["fractal_depth"] = f_fractal;
        report["ifs"] = ifs_to_json(spec);
        report["status"] = result.pass ? "pass" : "fail";
        report["failures"] = result.failures;
        return emit(report, f_opts.out, result.pass ? exit_pass : exit_check_failed);
      }
      Json report = report_envelope("fractafold measure", f_opts.seed);
      FractafoldCell cell = cell_from_json(load_json(f_cell));
      report["cell"] = cell_to_json(cell);
      report["normal_form"] = cell_to_json(normal_form(cell));
      report["mu_infinity"] = format_rational(mu_infinity(spec, cell));
      return emit(report, f_opts.out, exit_pass);
    }

    // cayley ---------------------------------------------------------------
    if (*ball_cmd) {
      Json report = report_envelope("cayley ball", c_opts.seed);
      DirectedGraph g = load_graph(c_graph);
      Path base = Path::from_edge_ids(g, split(c_base, ','));
      auto ball = cayley_ball(g, standard_generators(g), base, c_radius);
      report["radius"] = c_radius;
      report["ball"] = graph_to_json(ball.graph);
      Json distances = Json::object();
      std::vector<int> degree(ball.graph.vertex_count(), 0);
      for (int e = 0; e < ball.graph.edge_count(); ++e) {
        degree[ball.graph.edge(e).src] += 1;
        degree[ball.graph.edge(e).dst] += 1;
      }
      Json interior = Json::array();
      for (int v = 0; v < ball.graph.vertex_count(); ++v) {
        distances[ball.graph.vertex_id(v)] = ball.distance[v];
        if (ball.distance[v] < c_radius)
          interior.push_back(Json{{"vertex", ball.graph.vertex_id(v)}, {"degree", degree[v]}});
      }
      report["distance"] = distances;
      report["interior_degrees"] = interior;
      return emit(report, c_opts.out, exit_pass);
    }
  } catch (const resource_error& e) {
    std::cerr << "resource error: " << e.what() << " (required: " << e.required << ")\n";
    return exit_input_error;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const degenerate_input_error& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return exit_input_error;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const action_spec_error& e) {
    std::cerr << "action specification error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input_error;
  }
  return exit_input_error;
}
