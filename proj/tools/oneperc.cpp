#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "oneperc/harness.hpp"
#include "oneperc/mapper.hpp"
#include "oneperc/online.hpp"

namespace {

// exit codes: 0 ok, 2 config error, 3 mapper failure, 4 runtime abort,
// 5 verification failure

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Overrides {
  CLI::Option* seed = nullptr;
  CLI::Option* trials = nullptr;
  CLI::Option* out_dir = nullptr;
  CLI::Option* cap = nullptr;
  std::uint64_t seed_value = 0;
  int trials_value = 0;
  std::string out_dir_value;
  long long cap_value = 0;

  void attach(CLI::App* cmd) {
    seed = cmd->add_option("--seed", seed_value, "Override the hardware RNG seed");
    trials = cmd->add_option("--trials", trials_value, "Override the trial count");
    out_dir = cmd->add_option("--out-dir", out_dir_value, "Override the output directory");
    cap = cmd->add_option("--cap", cap_value, "Override the resource-layer cap");
  }

  void apply(oneperc::RunConfig& rc) const {
    if (*seed) rc.hardware.seed = seed_value;
    if (*trials) rc.trials = trials_value;
    if (*out_dir) rc.out_dir = out_dir_value;
    if (*cap) rc.rsl_cap = cap_value;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OnePerc: MBQC compiler and percolation-based runtime simulator"};
  app.require_subcommand(1);

  std::string config_path;
  int workers = 1;

  CLI::App* compile = app.add_subcommand("compile", "Lower a circuit to pattern, IR, and program");
  CLI::App* run = app.add_subcommand("run", "Compile and simulate the online execution");
  CLI::App* baseline = app.add_subcommand("baseline", "Repeat-until-success baseline simulation");
  CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep over renormalization builds");
  CLI::App* verify = app.add_subcommand("verify", "Rewrite-vs-oracle and accounting self checks");

  Overrides compile_ov, run_ov, baseline_ov, sweep_ov;
  for (auto [cmd, ov] : {std::pair{compile, &compile_ov}, {run, &run_ov},
                         {baseline, &baseline_ov}, {sweep, &sweep_ov}}) {
    cmd->add_option("--config", config_path, "JSON config file")->required();
    ov->attach(cmd);
  }
  run->add_option("--workers", workers, "Worker threads (output is worker-count independent)");
  baseline->add_option("--workers", workers, "Worker threads");
  sweep->add_option("--workers", workers, "Worker threads");

  int verify_cases = 500;
  std::uint64_t verify_seed = 97;
  verify->add_option("--cases", verify_cases, "Random 6-8 node case count");
  verify->add_option("--seed", verify_seed, "RNG seed for the random cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*compile) {
      oneperc::RunConfig rc = oneperc::run_config_from_json(slurp(config_path));
      compile_ov.apply(rc);
      std::cout << oneperc::cmd_compile(rc);
    } else if (*run) {
      oneperc::RunConfig rc = oneperc::run_config_from_json(slurp(config_path));
      run_ov.apply(rc);
      std::cout << oneperc::cmd_run(rc, workers);
    } else if (*baseline) {
      oneperc::RunConfig rc = oneperc::run_config_from_json(slurp(config_path));
      baseline_ov.apply(rc);
      std::cout << oneperc::cmd_baseline(rc, workers);
    } else if (*sweep) {
      oneperc::SweepSpec spec = oneperc::sweep_spec_from_json(slurp(config_path));
      sweep_ov.apply(spec.base);
      if (*sweep_ov.trials) spec.trials = sweep_ov.trials_value;
      std::cout << oneperc::cmd_sweep(spec, workers);
    } else if (*verify) {
      oneperc::VerifyOptions opt;
      opt.random_cases = verify_cases;
      opt.seed = verify_seed;
      oneperc::VerifyResult result = oneperc::cmd_verify(opt);
      std::cout << result.summary();
      return result.ok() ? 0 : 5;
    }
  } catch (const oneperc::MapperError& e) {
    std::cerr << "mapper failure: " << e.what() << "\n";
    return 3;
  } catch (const oneperc::OnlineError& e) {
    std::cerr << "runtime abort: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
