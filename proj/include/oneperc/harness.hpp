#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oneperc/frontend.hpp"
#include "oneperc/ir.hpp"
#include "oneperc/mapper.hpp"
#include "oneperc/online.hpp"

namespace oneperc {

struct BenchmarkSpec {
  std::string name = "qaoa";  // qaoa | qft | vqe | rca
  int n_qubits = 4;
  std::uint64_t seed = 1;
};

// One experiment: a circuit source plus the full compile/execute parameter set.
struct RunConfig {
  std::optional<BenchmarkSpec> benchmark;
  std::string circuit_file;  // alternative input: gate-per-line circuit text
  HardwareConfig hardware;
  RenormConfig renorm;
  MapperConfig mapper;
  int trials = 5;
  long long rsl_cap = 1'000'000;
  std::string out_dir;  // empty = do not persist files

  void validate() const;  // throws std::invalid_argument
};

// JSON config document; unknown keys rejected, missing keys keep defaults.
RunConfig run_config_from_json(const std::string& text);

struct SweepSpec {
  std::string parameter;  // node_size | module_count | mi_ratio | p_fusion | rsl_size
  std::vector<double> values;
  int trials = 20;
  RunConfig base;

  void validate() const;
};

// Same document as RunConfig plus a "sweep" object.
SweepSpec sweep_spec_from_json(const std::string& text);

inline constexpr const char* kRunSchema = "oneperc-run/1";
inline constexpr const char* kBaselineSchema = "oneperc-baseline/1";
inline constexpr const char* kSweepSchema = "oneperc-sweep/1";

// Fixed "%.6f" rendering so emitted CSV/JSON is byte-stable.
std::string format_double(double v);

struct CompileArtifacts {
  Circuit circuit;
  MeasurementPattern pattern;
  FlexLatticeIR ir;
  InstructionProgram program;
  IrMetrics metrics;
};

// Offline pipeline: circuit -> pattern -> placed/routed IR -> instructions.
CompileArtifacts compile_run(const RunConfig& rc);

// Each command returns the report text it produced and, when rc.out_dir is
// set, also writes it (plus artifact files for compile) under that directory.
std::string cmd_compile(const RunConfig& rc);
std::string cmd_run(const RunConfig& rc, int workers = 1);
std::string cmd_baseline(const RunConfig& rc, int workers = 1);
std::string cmd_sweep(const SweepSpec& spec, int workers = 1);

struct VerifyOptions {
  int random_cases = 500;
  std::uint64_t seed = 97;
  // self-test hook: use a deliberately wrong local-complementation unitary so
  // callers can confirm the suite is able to fail
  bool corrupt_lc_rule = false;
};

struct VerifyResult {
  long long checks = 0;
  long long failures = 0;
  std::vector<std::string> sections;  // one human-readable line per section

  bool ok() const { return failures == 0; }
  std::string summary() const;
};

// Ground-truth sweep: exhaustive rewrite-vs-tableau agreement on all graphs of
// up to 5 nodes, seeded random 6-8 node cases, measurement-identity checks on
// 3-qubit states for both outcome signs, and an event-log fusion recount.
VerifyResult cmd_verify(const VerifyOptions& opt = {});

}  // namespace oneperc
