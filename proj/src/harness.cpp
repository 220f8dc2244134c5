#include "oneperc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "oneperc/oracle.hpp"

namespace oneperc {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

namespace {

const std::set<std::string> kBenchmarkNames = {"qaoa", "qft", "vqe", "rca"};
const std::set<std::string> kSweepParameters = {"node_size", "module_count", "mi_ratio",
                                                "p_fusion", "rsl_size"};

void reject_unknown(const json& j, const std::set<std::string>& keys, const std::string& ctx) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!keys.count(it.key())) {
      throw std::invalid_argument("unknown config key \"" + it.key() + "\" in " + ctx);
    }
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

void parse_into(const json& j, RunConfig& rc) {
  if (!j.is_object()) throw std::invalid_argument("config document must be a JSON object");
  reject_unknown(j,
                 {"benchmark", "circuit_file", "hardware", "renorm", "mapper", "trials", "rsl_cap",
                  "out_dir", "sweep"},
                 "config root");
  if (j.contains("benchmark")) {
    const json& b = j.at("benchmark");
    reject_unknown(b, {"name", "qubits", "seed"}, "benchmark");
    BenchmarkSpec spec;
    read_field(b, "name", spec.name);
    read_field(b, "qubits", spec.n_qubits);
    read_field(b, "seed", spec.seed);
    rc.benchmark = spec;
  }
  read_field(j, "circuit_file", rc.circuit_file);
  if (j.contains("hardware")) {
    const json& h = j.at("hardware");
    reject_unknown(h,
                   {"rsl_width", "rsl_height", "resource_state_size", "p_fusion", "p_loss",
                    "retry_batches", "photon_lifetime_cycles", "seed"},
                   "hardware");
    read_field(h, "rsl_width", rc.hardware.rsl_width);
    read_field(h, "rsl_height", rc.hardware.rsl_height);
    read_field(h, "resource_state_size", rc.hardware.resource_state_size);
    read_field(h, "p_fusion", rc.hardware.p_fusion);
    read_field(h, "p_loss", rc.hardware.p_loss);
    read_field(h, "retry_batches", rc.hardware.retry_batches);
    read_field(h, "photon_lifetime_cycles", rc.hardware.photon_lifetime_cycles);
    read_field(h, "seed", rc.hardware.seed);
  }
  if (j.contains("renorm")) {
    const json& r = j.at("renorm");
    reject_unknown(r, {"node_size", "module_count", "mi_ratio"}, "renorm");
    read_field(r, "node_size", rc.renorm.node_size);
    read_field(r, "module_count", rc.renorm.module_count);
    read_field(r, "mi_ratio", rc.renorm.mi_ratio);
  }
  if (j.contains("mapper")) {
    const json& m = j.at("mapper");
    reject_unknown(m,
                   {"virtual_width", "virtual_height", "occupancy_cap", "refresh_interval_layers",
                    "routing_budget"},
                   "mapper");
    read_field(m, "virtual_width", rc.mapper.vh.width);
    read_field(m, "virtual_height", rc.mapper.vh.height);
    read_field(m, "occupancy_cap", rc.mapper.occupancy_cap);
    if (m.contains("refresh_interval_layers")) {
      if (m.at("refresh_interval_layers").is_null()) {
        rc.mapper.refresh_interval_layers.reset();
      } else {
        rc.mapper.refresh_interval_layers = m.at("refresh_interval_layers").get<int>();
      }
    }
    read_field(m, "routing_budget", rc.mapper.routing_budget);
  }
  read_field(j, "trials", rc.trials);
  read_field(j, "rsl_cap", rc.rsl_cap);
  read_field(j, "out_dir", rc.out_dir);
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
}

// Runs fn(0..count-1) on a pool; results must be written to per-index slots.
void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors;
  errors.resize(std::size_t(workers));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i; (i = next.fetch_add(1)) < count;) fn(i);
      } catch (...) {
        errors[std::size_t(w)] = std::current_exception();
        next.store(count);
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write to output directory " + dir);
  out << content;
}

std::string basis_text(const MeasurementBasis& b) {
  std::string s;
  s += pauli_char(b.plane_first());
  s += pauli_char(b.plane_second());
  return s + " " + format_double(b.angle());
}

json pattern_to_json(const MeasurementPattern& p) {
  json nodes = json::array();
  for (NodeId v : p.graph.nodes()) {
    json n;
    n["id"] = v;
    auto it = p.node_basis.find(v);
    n["basis"] = it == p.node_basis.end() ? json(nullptr) : json(basis_text(it->second));
    nodes.push_back(n);
  }
  json edges = json::array();
  for (auto [u, v] : p.graph.edges()) edges.push_back(json::array({u, v}));
  json doc;
  doc["schema"] = "oneperc-pattern/1";
  doc["nodes"] = nodes;
  doc["edges"] = edges;
  doc["inputs"] = p.inputs;
  doc["outputs"] = p.outputs;
  doc["wires"] = p.wires;
  return doc;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Stats {
  double mean = 0.0, stddev = 0.0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= double(xs.size());
  for (double x : xs) s.stddev += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(s.stddev / double(xs.size()));
  return s;
}

json config_echo(const RunConfig& rc) {
  json j;
  if (rc.benchmark) {
    j["benchmark"] = {{"name", rc.benchmark->name},
                      {"qubits", rc.benchmark->n_qubits},
                      {"seed", rc.benchmark->seed}};
  } else {
    j["circuit_file"] = rc.circuit_file;
  }
  j["rng_algorithm"] = kRngAlgorithm;
  j["seed"] = rc.hardware.seed;
  j["trials"] = rc.trials;
  return j;
}

}  // namespace

void RunConfig::validate() const {
  if (!benchmark && circuit_file.empty()) {
    throw std::invalid_argument("config needs either a benchmark or a circuit_file");
  }
  if (benchmark && !circuit_file.empty()) {
    throw std::invalid_argument("benchmark and circuit_file are mutually exclusive");
  }
  if (benchmark) {
    if (!kBenchmarkNames.count(benchmark->name)) {
      throw std::invalid_argument("unknown benchmark \"" + benchmark->name + "\"");
    }
    if (benchmark->n_qubits < 1) throw std::invalid_argument("benchmark qubits must be >= 1");
  }
  hardware.validate();
  renorm.validate();
  mapper.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (rsl_cap < 1) throw std::invalid_argument("rsl_cap must be >= 1");
}

void SweepSpec::validate() const {
  if (!kSweepParameters.count(parameter)) {
    throw std::invalid_argument("unknown sweep parameter \"" + parameter + "\"");
  }
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  if (trials < 1) throw std::invalid_argument("sweep trials must be >= 1");
  base.hardware.validate();
  base.renorm.validate();
}

RunConfig run_config_from_json(const std::string& text) {
  RunConfig rc;
  parse_into(parse_document(text), rc);
  return rc;
}

SweepSpec sweep_spec_from_json(const std::string& text) {
  json j = parse_document(text);
  SweepSpec spec;
  parse_into(j, spec.base);
  if (!j.contains("sweep")) throw std::invalid_argument("sweep config needs a \"sweep\" object");
  const json& s = j.at("sweep");
  reject_unknown(s, {"parameter", "values", "trials"}, "sweep");
  read_field(s, "parameter", spec.parameter);
  if (s.contains("values")) s.at("values").get_to(spec.values);
  read_field(s, "trials", spec.trials);
  return spec;
}

CompileArtifacts compile_run(const RunConfig& rc) {
  rc.validate();
  CompileArtifacts art;
  if (rc.benchmark) {
    art.circuit = build_benchmark(rc.benchmark->name, rc.benchmark->n_qubits, rc.benchmark->seed);
  } else {
    std::ifstream in(rc.circuit_file, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read circuit file " + rc.circuit_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
      return art;  // empty circuit: all artifacts stay empty
    }
    art.circuit = parse_circuit(text);
  }
  art.pattern = translate_circuit(art.circuit);
  art.ir = map_program(art.pattern, rc.mapper);
  art.program = emit_instructions(art.ir);
  art.metrics = ir_metrics(art.ir);
  return art;
}

std::string cmd_compile(const RunConfig& rc) {
  CompileArtifacts art = compile_run(rc);
  json doc;
  doc["schema"] = "oneperc-compile/1";
  doc["config"] = config_echo(rc);
  doc["qubits"] = art.circuit.qubit_count;
  doc["gates"] = art.circuit.gates.size();
  doc["pattern_nodes"] = art.pattern.graph.node_count();
  doc["pattern_edges"] = art.pattern.graph.edge_count();
  doc["logical_layers"] = art.metrics.logical_layers;
  doc["spatial_edges"] = art.metrics.spatial_edges;
  doc["temporal_edges"] = art.metrics.temporal_edges;
  doc["stored_node_layer_spans"] = art.metrics.stored_node_layer_spans;
  const std::string text = dump(doc);
  if (!rc.out_dir.empty()) {
    write_file(rc.out_dir, "circuit.txt", serialize_circuit(art.circuit));
    write_file(rc.out_dir, "pattern.json", dump(pattern_to_json(art.pattern)));
    write_file(rc.out_dir, "ir.json", ir_to_json(art.ir));
    write_file(rc.out_dir, "program.txt", serialize_program(art.program));
    write_file(rc.out_dir, "metrics.json", text);
  }
  return text;
}

std::string cmd_run(const RunConfig& rc, int workers) {
  CompileArtifacts art = compile_run(rc);
  bool semantics_preserved = true;
  {
    std::set<std::pair<std::uint64_t, std::uint64_t>> want;
    for (auto [u, v] : art.pattern.graph.edges()) want.insert({u, v});
    semantics_preserved = contract_ir(art.ir) == want;
  }

  struct Trial {
    std::string status;
    long long rsl = 0;
    std::uint64_t fusions = 0;
    std::size_t logical_layers = 0;
    long long routing_layers = 0;
    long long delay_peak_cycles = 0;
    bool recount_ok = true;
  };
  std::vector<Trial> trials(std::size_t(rc.trials));
  parallel_for(rc.trials, workers, [&](int t) {
    HardwareConfig h = rc.hardware;
    h.seed = rc.hardware.seed + std::uint64_t(t);
    ExecuteOptions opt;
    opt.rsl_cap = rc.rsl_cap;
    opt.pattern = &art.pattern;
    Trial& out = trials[std::size_t(t)];
    try {
      ExecutionReport r = execute(art.program, h, rc.renorm, opt);
      out.status = r.success ? "ok" : r.failure_reason;
      out.rsl = r.rsl_consumed;
      out.fusions = r.fusions_attempted;
      out.logical_layers = r.logical_layer_indices.size();
      out.routing_layers = r.routing_layer_count;
      out.delay_peak_cycles = r.delay_peak_cycles;
      out.recount_ok = recount_fusions(r.event_log) == r.fusions_attempted;
    } catch (const OnlineError& e) {
      out.status = e.code();
    }
  });

  std::vector<double> rsl, fus;
  int completed = 0;
  for (const Trial& t : trials) {
    if (t.status == "ok") {
      ++completed;
      rsl.push_back(double(t.rsl));
      fus.push_back(double(t.fusions));
    }
  }
  Stats rsl_stats = stats_of(rsl), fus_stats = stats_of(fus);

  json per_trial = json::array();
  for (int t = 0; t < rc.trials; ++t) {
    const Trial& tr = trials[std::size_t(t)];
    per_trial.push_back({{"trial", t},
                         {"seed", rc.hardware.seed + std::uint64_t(t)},
                         {"status", tr.status},
                         {"rsl", tr.rsl},
                         {"fusions", tr.fusions},
                         {"logical_layers", tr.logical_layers},
                         {"routing_layers", tr.routing_layers},
                         {"delay_peak_cycles", tr.delay_peak_cycles},
                         {"recount_ok", tr.recount_ok}});
  }
  json doc;
  doc["schema"] = kRunSchema;
  doc["config"] = config_echo(rc);
  doc["semantics_preserved"] = semantics_preserved;
  doc["aggregate"] = {{"completed", completed},
                      {"aborted", rc.trials - completed},
                      {"mean_rsl", format_double(rsl_stats.mean)},
                      {"stddev_rsl", format_double(rsl_stats.stddev)},
                      {"mean_fusions", format_double(fus_stats.mean)},
                      {"stddev_fusions", format_double(fus_stats.stddev)}};
  doc["per_trial"] = per_trial;
  const std::string text = dump(doc);
  write_file(rc.out_dir, "run.json", text);
  return text;
}

std::string cmd_baseline(const RunConfig& rc, int workers) {
  CompileArtifacts art = compile_run(rc);
  BaselineModel model = baseline_model_from_ir(art.ir);

  struct Trial {
    std::string status;
    long long rsl = 0;
    std::uint64_t fusions = 0;
    bool recount_ok = true;
  };
  std::vector<Trial> trials(std::size_t(rc.trials));
  parallel_for(rc.trials, workers, [&](int t) {
    HardwareConfig h = rc.hardware;
    h.seed = rc.hardware.seed + std::uint64_t(t);
    ExecutionReport r = baseline_retry_execute(model, h, rc.rsl_cap);
    Trial& out = trials[std::size_t(t)];
    out.status = r.success ? "ok" : r.failure_reason;
    out.rsl = r.rsl_consumed;
    out.fusions = r.fusions_attempted;
    out.recount_ok = recount_fusions(r.event_log) == r.fusions_attempted;
  });

  std::vector<double> rsl, fus;
  int completed = 0;
  for (const Trial& t : trials) {
    if (t.status == "ok") {
      ++completed;
      rsl.push_back(double(t.rsl));
      fus.push_back(double(t.fusions));
    }
  }
  Stats rsl_stats = stats_of(rsl), fus_stats = stats_of(fus);
  json per_trial = json::array();
  for (int t = 0; t < rc.trials; ++t) {
    const Trial& tr = trials[std::size_t(t)];
    per_trial.push_back({{"trial", t},
                         {"seed", rc.hardware.seed + std::uint64_t(t)},
                         {"status", tr.status},
                         {"rsl", tr.rsl},
                         {"fusions", tr.fusions},
                         {"recount_ok", tr.recount_ok}});
  }
  json doc;
  doc["schema"] = kBaselineSchema;
  doc["config"] = config_echo(rc);
  doc["model_layers"] = model.layers.size();
  doc["aggregate"] = {{"completed", completed},
                      {"aborted", rc.trials - completed},
                      {"mean_rsl", format_double(rsl_stats.mean)},
                      {"stddev_rsl", format_double(rsl_stats.stddev)},
                      {"mean_fusions", format_double(fus_stats.mean)},
                      {"stddev_fusions", format_double(fus_stats.stddev)}};
  doc["per_trial"] = per_trial;
  const std::string text = dump(doc);
  write_file(rc.out_dir, "baseline.json", text);
  return text;
}

std::string cmd_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  struct Row {
    std::string status = "ok";
    double success_rate = 0, mean_cols = 0, mean_rows = 0, mean_size = 0;
    int target_cols = 0, target_rows = 0;
  };
  std::vector<Row> rows(spec.values.size());
  parallel_for(int(spec.values.size()), workers, [&](int i) {
    const double value = spec.values[std::size_t(i)];
    HardwareConfig h = spec.base.hardware;
    RenormConfig rn = spec.base.renorm;
    if (spec.parameter == "node_size") rn.node_size = int(std::lround(value));
    else if (spec.parameter == "module_count") rn.module_count = int(std::lround(value));
    else if (spec.parameter == "mi_ratio") rn.mi_ratio = value;
    else if (spec.parameter == "p_fusion") h.p_fusion = value;
    else h.rsl_width = h.rsl_height = int(std::lround(value));
    Row& row = rows[std::size_t(i)];
    try {
      h.validate();
      rn.validate();
      for (int t = 0; t < spec.trials; ++t) {
        Rng rng{spec.base.hardware.seed + std::uint64_t(i) * std::uint64_t(spec.trials) +
                std::uint64_t(t)};
        MergedLayer layer = build_merged_layer(h, rng).layer;
        RenormalizedLattice lat = carve_lattice(layer, rn);
        row.target_cols = lat.target_cols;
        row.target_rows = lat.target_rows;
        if (lat.full()) row.success_rate += 1.0;
        row.mean_cols += lat.cols;
        row.mean_rows += lat.rows;
        row.mean_size += double(lat.cols) * lat.rows;
      }
      row.success_rate /= spec.trials;
      row.mean_cols /= spec.trials;
      row.mean_rows /= spec.trials;
      row.mean_size /= spec.trials;
    } catch (const OnlineError& e) {
      row = Row{};
      row.status = e.code();
    } catch (const std::invalid_argument&) {
      row = Row{};
      row.status = "invalid-value";
    }
  });

  std::ostringstream csv;
  csv << "# schema: " << kSweepSchema << "\n";
  csv << "parameter,value,trials,status,success_rate,mean_cols,mean_rows,mean_size,"
         "target_cols,target_rows\n";
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const Row& r = rows[i];
    csv << spec.parameter << ',' << format_double(spec.values[i]) << ',' << spec.trials << ','
        << r.status << ',' << format_double(r.success_rate) << ',' << format_double(r.mean_cols)
        << ',' << format_double(r.mean_rows) << ',' << format_double(r.mean_size) << ','
        << r.target_cols << ',' << r.target_rows << "\n";
  }
  const std::string text = csv.str();
  write_file(spec.base.out_dir, "sweep.csv", text);
  return text;
}

namespace {

using oracle::PauliProduct;
using oracle::Tableau;

GraphState graph_from_mask(int n, std::uint32_t mask) {
  GraphState g;
  std::vector<NodeId> ids;
  for (int i = 0; i < n; ++i) ids.push_back(g.add_node());
  int bit = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++bit) {
      if (mask & (1u << bit)) g.add_edge(ids[std::size_t(i)], ids[std::size_t(j)]);
    }
  }
  return g;
}

PauliProduct graph_stabilizer(const GraphState& g, NodeId v, const std::map<NodeId, int>& idx) {
  PauliProduct s = PauliProduct::single(idx.at(v), Pauli::X);
  for (NodeId u : g.neighbors(v)) s.mul(PauliProduct::single(idx.at(u), Pauli::Z));
  return s;
}

ByproductWord inverse_word(const ByproductWord& w) {
  ByproductWord inv;
  for (auto it = w.gens.rbegin(); it != w.gens.rend(); ++it) {
    switch (*it) {
      case ByproductGen::Zp: inv.append(ByproductGen::Zm); break;
      case ByproductGen::Zm: inv.append(ByproductGen::Zp); break;
      case ByproductGen::Xp: inv.append(ByproductGen::Xm); break;
      case ByproductGen::Xm: inv.append(ByproductGen::Xp); break;
    }
  }
  return inv;
}

struct Verifier {
  VerifyOptions opt;
  VerifyResult result;
  std::mt19937_64 rng;

  explicit Verifier(const VerifyOptions& o) : opt(o), rng(o.seed) {}

  void expect(bool ok) {
    ++result.checks;
    if (!ok) ++result.failures;
  }

  // all stabilizers of `g` must already be pinned to outcome 0 in `t`
  void expect_stabilized(const Tableau& t, const GraphState& g,
                         const std::map<NodeId, int>& idx) {
    for (NodeId v : g.nodes()) {
      Tableau copy = t;
      auto r = copy.measure(graph_stabilizer(g, v, idx));
      expect(r.deterministic && r.outcome == 0);
    }
  }

  void check_lc(const GraphState& g, NodeId v) {
    auto idx = oracle::qubit_indices(g);
    Tableau t = oracle::tableau_from_graph(g);
    const ByproductGen on_v = opt.corrupt_lc_rule ? ByproductGen::Xp : ByproductGen::Xm;
    t.apply_local_clifford(ByproductWord{{on_v}}, idx.at(v));
    for (NodeId u : g.neighbors(v)) {
      t.apply_local_clifford(ByproductWord{{ByproductGen::Zp}}, idx.at(u));
    }
    expect(t.states_equal(oracle::tableau_from_graph(local_complement(g, v))));
  }

  void check_z(const GraphState& g, NodeId v) {
    auto idx = oracle::qubit_indices(g);
    Tableau t = oracle::tableau_from_graph(g);
    auto r = t.measure(PauliProduct::single(idx.at(v), Pauli::Z), 0, &rng);
    expect(!r.deterministic);
    expect_stabilized(t, measure_z(g, v), idx);
  }

  void check_fuse_success(const GraphState& g, NodeId a, NodeId b) {
    for (NodeId u : g.neighbors(a)) {
      if (g.neighbors(b).count(u)) return;  // shared cluster: rule out of scope
    }
    auto idx = oracle::qubit_indices(g);
    Tableau t = oracle::tableau_from_graph(g);
    PauliProduct xz = PauliProduct::single(idx.at(a), Pauli::X);
    xz.mul(PauliProduct::single(idx.at(b), Pauli::Z));
    PauliProduct zx = PauliProduct::single(idx.at(a), Pauli::Z);
    zx.mul(PauliProduct::single(idx.at(b), Pauli::X));
    try {
      t.measure(xz, 0, &rng);
      t.measure(zx, 0, &rng);
    } catch (const std::invalid_argument&) {
      return;  // the 0,0 branch is unreachable for this pair
    }
    expect_stabilized(t, fuse_success(g, a, b), idx);
  }

  void check_fuse_fail(const GraphState& g, NodeId a, NodeId b, int o1, int o2) {
    auto idx = oracle::qubit_indices(g);
    const bool ya = g.degree(a) >= 2, yb = g.degree(b) >= 2;
    if ((!ya && o1 != 0) || (!yb && o2 != 0)) return;
    Tableau t = oracle::tableau_from_graph(g);
    // outcome bit t labels the (I + (-1)^(t+1) Y)/2 projector branch
    auto r1 = t.measure(PauliProduct::single(idx.at(a), ya ? Pauli::Y : Pauli::Z),
                        ya ? 1 - o1 : 0, &rng);
    auto r2 = t.measure(PauliProduct::single(idx.at(b), yb ? Pauli::Y : Pauli::Z),
                        yb ? 1 - o2 : 0, &rng);
    expect(!r1.deterministic);
    expect(!r2.deterministic);
    GraphState out = fuse_fail(g, a, b, o1, o2);
    for (NodeId v : out.nodes()) {
      t.apply_local_clifford(inverse_word(out.byproducts(v)), idx.at(v));
    }
    expect_stabilized(t, out, idx);
  }

  void check_graph(const GraphState& g) {
    std::vector<NodeId> ids(g.nodes().begin(), g.nodes().end());
    for (NodeId v : ids) {
      check_lc(g, v);
      check_z(g, v);
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        if (g.has_edge(ids[i], ids[j])) continue;
        check_fuse_success(g, ids[i], ids[j]);
        for (int o1 = 0; o1 < 2; ++o1) {
          for (int o2 = 0; o2 < 2; ++o2) check_fuse_fail(g, ids[i], ids[j], o1, o2);
        }
      }
    }
  }

  std::string section_line(const std::string& name, long long before) {
    std::ostringstream os;
    os << name << ": " << result.checks - before << " checks, failures so far "
       << result.failures;
    return os.str();
  }
};

}  // namespace

std::string VerifyResult::summary() const {
  std::ostringstream os;
  for (const std::string& s : sections) os << s << "\n";
  os << (failures == 0 ? "verify: PASS" : "verify: FAIL") << " (checks=" << checks
     << ", failures=" << failures << ")\n";
  return os.str();
}

VerifyResult cmd_verify(const VerifyOptions& opt) {
  Verifier v(opt);

  long long mark = 0;
  for (int n = 1; n <= 5; ++n) {
    const int bits = n * (n - 1) / 2;
    for (std::uint32_t mask = 0; mask < (1u << bits); ++mask) {
      v.check_graph(graph_from_mask(n, mask));
    }
  }
  v.result.sections.push_back(v.section_line("exhaustive <=5-node rewrites", mark));

  mark = v.result.checks;
  for (int c = 0; c < opt.random_cases; ++c) {
    const int n = 6 + int(v.rng() % 3);
    GraphState g;
    std::vector<NodeId> ids;
    for (int i = 0; i < n; ++i) ids.push_back(g.add_node());
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if ((v.rng() % 1000) < 400) g.add_edge(ids[std::size_t(i)], ids[std::size_t(j)]);
      }
    }
    NodeId pick = ids[v.rng() % ids.size()];
    v.check_lc(g, pick);
    v.check_z(g, ids[v.rng() % ids.size()]);
    for (int attempt = 0; attempt < 20; ++attempt) {
      NodeId a = ids[v.rng() % ids.size()], b = ids[v.rng() % ids.size()];
      if (a == b || g.has_edge(a, b)) continue;
      v.check_fuse_success(g, a, b);
      v.check_fuse_fail(g, a, b, int(v.rng() & 1), int(v.rng() & 1));
      break;
    }
  }
  v.result.sections.push_back(v.section_line("random 6-8 node rewrites", mark));

  // single-photon removal identities on every 3-node state, both outcome bits
  mark = v.result.checks;
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    GraphState base = graph_from_mask(3, mask);
    for (NodeId node : std::vector<NodeId>(base.nodes().begin(), base.nodes().end())) {
      for (int t = 0; t < 2; ++t) {
        GraphState g = base;
        NodeId partner = g.add_node();  // isolated: its removal is a no-op
        if (g.degree(node) < 2 && t != 0) continue;
        v.check_fuse_fail(g, node, partner, t, 0);
      }
    }
  }
  v.result.sections.push_back(v.section_line("removal identities, both signs", mark));

  mark = v.result.checks;
  {
    RunConfig rc;
    rc.benchmark = BenchmarkSpec{"qaoa", 4, 3};
    rc.mapper.vh = {3, 3};
    rc.mapper.occupancy_cap = 0.5;
    rc.hardware = HardwareConfig{};
    rc.hardware.rsl_width = rc.hardware.rsl_height = 24;
    rc.hardware.p_fusion = 0.8;
    rc.hardware.seed = opt.seed;
    rc.renorm.node_size = 8;
    CompileArtifacts art = compile_run(rc);
    ExecuteOptions eo;
    eo.pattern = &art.pattern;
    ExecutionReport run = execute(art.program, rc.hardware, rc.renorm, eo);
    v.expect(run.success);
    v.expect(recount_fusions(run.event_log) == run.fusions_attempted);
    HardwareConfig bh = rc.hardware;
    bh.p_fusion = 0.9;
    ExecutionReport base = baseline_retry_execute(baseline_model_from_ir(art.ir), bh, 200000);
    v.expect(recount_fusions(base.event_log) == base.fusions_attempted);
  }
  v.result.sections.push_back(v.section_line("event-log fusion recount", mark));

  return v.result;
}

}  // namespace oneperc
