#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "sces/harness.hpp"
#include "sces/problems.hpp"

namespace sces {

namespace {

bool log_info() {
  const char* level = std::getenv("SCES_LOG");
  return level != nullptr && (std::string(level) == "info" || std::string(level) == "debug");
}

void print_run_summary(const std::string& label, const RunResult& result) {
  std::printf("%s iterations=%zu final_f_est=%.6g", label.c_str(), result.trace.size(),
              result.final_state.f_incumbent);
  if (!result.trace.empty() && result.trace.back().f_exact.has_value())
    std::printf(" final_f_exact=%.6g", *result.trace.back().f_exact);
  if (!result.trace.empty() && result.trace.back().violation.has_value())
    std::printf(" final_violation=%.6g", *result.trace.back().violation);
  std::printf(" sigma=%.6g\n", result.final_state.sigma);
}

int do_run(const std::string& config_path, std::uint64_t seed, const std::string& out_path) {
  const RunConfig cfg = read_config(config_path);
  const RunResult result = run_config(cfg, seed);
  write_trace(result.trace, out_path);
  print_run_summary("run " + cfg.problem + " seed=" + std::to_string(seed), result);
  return 0;
}

int do_bench(const std::string& suite, int seeds, const std::string& out_dir) {
  if (seeds < 1) throw ConfigError("bench: seeds must be positive");
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = preset_names();
  } else {
    suites.push_back(suite);
  }
  for (const std::string& name : suites) {
    const RunConfig cfg = preset(name);
    std::vector<Real> finals;
    int sigma_pass = 0;
    for (int seed = 0; seed < seeds; ++seed) {
      if (log_info()) std::cerr << "bench " << name << " seed " << seed << "\n";
      const RunResult result = run_config(cfg, static_cast<std::uint64_t>(seed));
      const std::string path =
          out_dir + "/trace_" + name + "_seed" + std::to_string(seed) + ".csv";
      write_trace(result.trace, path);
      if (!result.trace.empty() && result.trace.back().f_exact.has_value())
        finals.push_back(*result.trace.back().f_exact);
      if (sigma_convergence_check(result.trace)) ++sigma_pass;
      print_run_summary("  " + name + " seed=" + std::to_string(seed), result);
    }
    std::printf("bench %s seeds=%d sigma_convergence=%d/%d", name.c_str(), seeds, sigma_pass,
                seeds);
    if (!finals.empty()) {
      std::sort(finals.begin(), finals.end());
      const std::size_t n = finals.size();
      const Real median =
          n % 2 == 1 ? finals[n / 2] : 0.5 * (finals[n / 2 - 1] + finals[n / 2]);
      std::printf(" median_final_f_exact=%.6g", median);
    }
    std::printf("\n");
  }
  return 0;
}

int do_check_accuracy(const std::string& config_path, long long iters) {
  const RunConfig cfg = read_config(config_path);
  const AccuracyAudit audit = check_accuracy(cfg, iters, 0xACC0);
  std::printf("check-accuracy problem=%s iters=%lld\n", cfg.problem.c_str(), audit.iterations);
  std::printf("  objective: frequency=%.4f lower_bound_99=%.4f target_p=%.4f %s\n",
              audit.f_frequency, audit.f_lower_bound, audit.target_p,
              audit.pass ? "PASS" : "FAIL");
  if (audit.has_constraints) {
    std::printf("  constraints: frequency=%.4f lower_bound_99=%.4f\n", audit.c_frequency,
                audit.c_lower_bound);
  }
  return audit.pass ? 0 : 2;
}

int do_audit_lyapunov(const std::string& traces_dir, double nu) {
  std::vector<std::filesystem::path> paths;
  if (!std::filesystem::is_directory(traces_dir))
    throw IOError("audit-lyapunov: '" + traces_dir + "' is not a directory");
  for (const auto& entry : std::filesystem::directory_iterator(traces_dir)) {
    if (entry.path().extension() == ".csv") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<std::vector<TraceRecord>> traces;
  traces.reserve(paths.size());
  for (const auto& p : paths) traces.push_back(read_trace(p.string()));
  const DecreaseAudit audit = expected_decrease_audit(traces, nu);
  std::printf("audit-lyapunov traces=%zu buckets=%lld nonpositive=%lld fraction=%.4f\n",
              traces.size(), audit.buckets, audit.nonpositive, audit.fraction());
  std::size_t shown = 0;
  for (long long bucket : audit.violations) {
    if (shown++ >= 10) {
      std::printf("  ... %zu more\n", audit.violations.size() - 10);
      break;
    }
    std::printf("  positive increment at iteration %lld\n", bucket);
  }
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Stochastic constrained derivative-free optimization toolkit"};
  app.require_subcommand(1);

  std::string run_config_path, run_out;
  std::uint64_t run_seed = 0;
  CLI::App* cmd_run = app.add_subcommand("run", "Optimize a configured problem, write the trace");
  cmd_run->add_option("--config", run_config_path, "JSON run configuration")->required();
  cmd_run->add_option("--seed", run_seed, "Random seed")->required();
  cmd_run->add_option("--out", run_out, "Output trace CSV path")->required();

  std::string bench_suite = "all", bench_dir;
  int bench_seeds = 10;
  CLI::App* cmd_bench = app.add_subcommand("bench", "Run a benchmark suite across seeds");
  cmd_bench->add_option("--suite", bench_suite, "Suite name or 'all'")->required();
  cmd_bench->add_option("--seeds", bench_seeds, "Number of seeds");
  cmd_bench->add_option("--out-dir", bench_dir, "Directory for trace files")->required();

  std::string acc_config_path;
  long long acc_iters = 1000;
  CLI::App* cmd_acc =
      app.add_subcommand("check-accuracy", "Estimate-accuracy frequency audit");
  cmd_acc->add_option("--config", acc_config_path, "JSON run configuration")->required();
  cmd_acc->add_option("--iters", acc_iters, "Audited iterations");

  std::string audit_dir;
  double audit_nu = 0.95;
  CLI::App* cmd_audit =
      app.add_subcommand("audit-lyapunov", "Seed-averaged Lyapunov decrease audit");
  cmd_audit->add_option("--traces", audit_dir, "Directory of trace CSV files")->required();
  cmd_audit->add_option("--nu", audit_nu, "Lyapunov weight nu")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cmd_run->parsed()) return do_run(run_config_path, run_seed, run_out);
    if (cmd_bench->parsed()) return do_bench(bench_suite, bench_seeds, bench_dir);
    if (cmd_acc->parsed()) return do_check_accuracy(acc_config_path, acc_iters);
    if (cmd_audit->parsed()) return do_audit_lyapunov(audit_dir, audit_nu);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace sces
