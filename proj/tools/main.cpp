#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbai/config.hpp"
#include "cbai/confidence.hpp"
#include "cbai/errors.hpp"
#include "cbai/harness.hpp"

namespace {

using namespace cbai;

struct Overrides {
  std::optional<double> delta;
  std::optional<double> epsilon;
  std::optional<int> trials;
  std::optional<unsigned long long> seed;
  std::optional<std::string> policy;
  std::optional<std::string> radius_mode;
  std::string out;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--delta", ov.delta, "Confidence level override");
  cmd->add_option("--epsilon", ov.epsilon, "Contamination level override");
  cmd->add_option("--trials", ov.trials, "Trial count override");
  cmd->add_option("--seed", ov.seed, "Master seed override");
  cmd->add_option("--policy", ov.policy,
                  "Policy override: gcbai | secbai | median_se | random_gap");
  cmd->add_option("--radius-mode", ov.radius_mode,
                  "Radius mode override: theorem | empirical");
  cmd->add_option("--out", ov.out, "Output file path");
}

PolicyKind policy_from_name(const std::string& name) {
  if (name == "gcbai") return PolicyKind::gcbai;
  if (name == "secbai") return PolicyKind::secbai;
  if (name == "median_se") return PolicyKind::median_se;
  if (name == "random_gap") return PolicyKind::random_gap;
  throw ConfigValueError("unknown policy '" + name + "'");
}

RadiusMode mode_from_name(const std::string& name) {
  if (name == "theorem") return RadiusMode::theorem;
  if (name == "empirical") return RadiusMode::empirical;
  throw ConfigValueError("unknown radius mode '" + name + "'");
}

void apply_overrides(ExperimentConfig& config, const Overrides& ov) {
  if (ov.delta) {
    if (!(*ov.delta > 0.0 && *ov.delta < 1.0)) {
      throw ConfigValueError("delta must lie in (0, 1)");
    }
    config.delta = *ov.delta;
  }
  if (ov.epsilon) {
    const auto& c = config.contamination;
    const double parameter = c.adversary == AdversaryKind::uniform_random_mean
                                 ? c.half_width
                                 : c.shift;
    try {
      config.contamination = ContaminationModel(*ov.epsilon, c.adversary, parameter);
    } catch (const InfeasibleGapError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigValueError(e.what());
    }
  }
  if (ov.trials) {
    if (*ov.trials < 1) throw ConfigValueError("trials must be >= 1");
    config.n_trials = *ov.trials;
  }
  if (ov.seed) config.master_seed = *ov.seed;
  if (ov.policy) config.policy = policy_from_name(*ov.policy);
  if (ov.radius_mode) config.radius_mode = mode_from_name(*ov.radius_mode);
}

std::vector<std::string> header_lines(const std::string& command,
                                      const ExperimentConfig& config) {
  std::vector<std::string> lines;
  lines.push_back("command = " + command);
  for (auto& line : render_resolved(config)) lines.push_back(std::move(line));
  return lines;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigFileError("cannot open output file '" + path + "'");
  return out;
}

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void print_summary(const ExperimentConfig& config, const ExperimentSummary& s) {
  std::cout << "policy = " << to_string(config.policy) << "\n"
            << "radius_mode = " << to_string(config.radius_mode) << "\n"
            << "trials = " << s.n_trials << "\n"
            << "mean_tau = " << format_sig6(s.mean_tau) << "\n"
            << "std_tau = " << format_sig6(s.std_tau) << "\n"
            << "stderr_tau = "
            << (s.stderr_defined ? format_sig6(s.stderr_tau) : std::string("undefined"))
            << "\n"
            << "error_rate = " << format_sig6(s.error_rate) << "\n"
            << "error_ci95 = [" << format_sig6(s.error_ci_low) << ", "
            << format_sig6(s.error_ci_high) << "]\n"
            << "truncated = " << s.truncated << "\n";
  if (s.truncated > 0) {
    std::cout << "warning: " << s.truncated
              << " trial(s) hit max_rounds before the stopping rule fired\n";
  }
}

int cmd_run(const std::string& config_path, const Overrides& ov,
            const std::string& trace_path) {
  LoadedConfig loaded = load_config_file(config_path);
  apply_overrides(loaded.experiment, ov);
  std::vector<TrialResult> results;
  const ExperimentSummary summary =
      run_experiment(loaded.experiment, loaded.threads, &results);
  print_summary(loaded.experiment, summary);
  if (!ov.out.empty()) {
    SweepRow row;
    row.param = loaded.experiment.delta;
    row.policy = loaded.experiment.policy;
    row.summary = summary;
    auto out = open_out(ov.out);
    const std::vector<SweepRow> rows = {row};
    write_sweep_csv(out, rows, header_lines("run", loaded.experiment));
    std::cout << "wrote " << ov.out << "\n";
  }
  if (!trace_path.empty()) {
    auto out = open_out(trace_path);
    for (const auto& line : header_lines("run", loaded.experiment)) {
      out << "# " << line << "\n";
    }
    write_trial_jsonl(out, results);
    std::cout << "wrote " << trace_path << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const Overrides& ov) {
  LoadedConfig loaded = load_config_file(config_path);
  apply_overrides(loaded.experiment, ov);
  if (!loaded.sweep) {
    throw ConfigValueError(config_path + ": sweep needs a [sweep] section");
  }
  const auto rows =
      sweep(loaded.experiment, loaded.sweep->axis, loaded.sweep->grid, loaded.threads);
  auto headers = header_lines("sweep", loaded.experiment);
  headers.push_back("sweep.axis = " + to_string(loaded.sweep->axis));
  {
    std::string grid = "sweep.grid =";
    for (double v : loaded.sweep->grid) grid += " " + format_sig6(v);
    headers.push_back(std::move(grid));
  }
  int truncated = 0;
  for (const auto& row : rows) truncated += row.summary.truncated;
  if (ov.out.empty()) {
    write_sweep_csv(std::cout, rows, headers);
  } else {
    auto out = open_out(ov.out);
    write_sweep_csv(out, rows, headers);
    for (const auto& row : rows) {
      std::cout << to_string(loaded.sweep->axis) << " = " << format_sig6(row.param)
                << ": mean_tau = " << format_sig6(row.summary.mean_tau)
                << ", error_rate = " << format_sig6(row.summary.error_rate) << "\n";
    }
    std::cout << "wrote " << ov.out << "\n";
  }
  if (truncated > 0) {
    std::cout << "warning: " << truncated
              << " trial(s) hit max_rounds before the stopping rule fired\n";
  }
  return 0;
}

int cmd_ingest(const std::string& csv_path, const std::string& format, double sigma,
               const std::string& out_path) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigFileError("cannot open dataset file '" + csv_path + "'");
  InstanceSpec spec;
  if (format == "ratings") {
    spec = ingest_ratings(in, sigma);
  } else if (format == "pkis2") {
    spec = ingest_pkis2(in, sigma);
  } else {
    throw ConfigValueError("unknown ingest format '" + format + "'");
  }
  std::ostringstream snippet;
  snippet << "[instance]\n"
          << "kind = gaussian\n"
          << "means = ";
  for (std::size_t i = 0; i < spec.means.size(); ++i) {
    if (i) snippet << ", ";
    snippet << fmt(spec.means[i]);
  }
  snippet << "\nsigma = " << fmt(sigma) << "\n";
  std::cout << snippet.str();
  if (!out_path.empty()) {
    auto out = open_out(out_path);
    out << snippet.str();
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_complexity(const std::string& config_path, const Overrides& ov) {
  LoadedConfig loaded = load_config_file(config_path);
  apply_overrides(loaded.experiment, ov);
  const auto& config = loaded.experiment;
  const BanditInstance instance = build_instance(config.instance);
  const auto& means = instance.true_means();
  const double sigma = instance.sigma_proxy();
  const double epsilon = config.contamination.epsilon;
  const double delta = config.delta;
  const int K = instance.size();

  std::ostringstream report;
  report << "instance: " << to_string(config.instance.kind) << ", K = " << K
         << ", sigma_proxy = " << fmt(sigma) << "\n";
  report << "true means:";
  for (double m : means) report << " " << fmt(m);
  report << "\nbest arm: " << instance.best_arm() << " (mean "
         << fmt(means[static_cast<std::size_t>(instance.best_arm())]) << ")\n\n";

  const std::vector<double> zeros(means.size(), 0.0);
  const auto gaps = true_gaps(instance, zeros);
  report << "gap table (zero per-arm uncertainty):\n";
  report << "  arm  mean                   Delta\n";
  for (int i = 0; i < K; ++i) {
    report << "  " << i << "    " << fmt(means[static_cast<std::size_t>(i)]) << "  \t"
           << fmt(gaps[static_cast<std::size_t>(i)])
           << (i == instance.best_arm() ? "  (best; complexity uses the runner-up gap)"
                                        : "")
           << "\n";
  }

  const double H = problem_complexity(means, zeros, sigma);
  report << "\nproblem complexity H = sum_i (sqrt(2)*sigma / max{Delta_i, "
            "Delta_runner_up})^2 = "
         << fmt(H) << "\n";

  const auto lower = lower_bound_report(means, delta, epsilon, sigma, config.c1);
  report << "\nlower-bound slopes (E[tau] >= slope * ln(1/(2.4 delta)) as delta -> 0):\n";
  report << "  attack-free slope = " << fmt(lower.pibai_slope)
         << "; at delta = " << fmt(delta) << ": " << fmt(lower.pibai_at_delta) << "\n";
  if (epsilon > 0.0) {
    report << "  per-arm uncertainty c1*sigma*eps*sqrt(ln(1/eps)) = "
           << fmt(lower.uncertainty_term) << "\n";
    if (lower.cbai_feasible) {
      report << "  contamination-adjusted slope = " << fmt(lower.cbai_slope)
             << "; at delta = " << fmt(delta) << ": " << fmt(lower.cbai_at_delta)
             << "\n";
    } else {
      report << "  contamination-adjusted slope: infeasible (uncertainty closes "
                "every gap)\n";
    }
  } else {
    report << "  contamination-adjusted slope: equals the attack-free slope at "
              "eps = 0\n";
  }

  const auto bound = sample_bound_report(means, sigma, epsilon, delta, config.beta_exp);
  report << "\nsample-complexity bound boxes (constant factors unspecified):\n";
  report << "  gap policy: max{8K/eps^2, 64*beta*H} = max{" << fmt(bound.gap_floor_term)
         << ", " << fmt(bound.gap_h_term) << "} = " << fmt(bound.gap_bound) << "\n";
  report << "    proof-form coefficient 16*beta*H/(1-eps)^2 = "
         << fmt(bound.gap_proof_form) << "\n";
  report << "  elimination policy: max{(8K/eps^2)*ln(1/delta), sum_{i != best} "
            "(1/Delta_i^2)*ln(K/(delta*Delta_i))} = max{"
         << fmt(bound.elim_floor_term) << ", " << fmt(bound.elim_gap_term) << "} = "
         << fmt(bound.elim_bound) << "\n";
  if (bound.epsilon_zero) {
    report << "  note: the 8K/eps^2 floor terms diverge at eps = 0; these boxes are "
              "only valid for eps > 0\n";
  }

  std::cout << report.str();
  if (!ov.out.empty()) {
    auto out = open_out(ov.out);
    out << report.str();
    std::cout << "wrote " << ov.out << "\n";
  }
  return 0;
}

int cmd_trial_trace(const std::string& config_path, const Overrides& ov, int trial) {
  LoadedConfig loaded = load_config_file(config_path);
  apply_overrides(loaded.experiment, ov);
  if (trial < 0) throw ConfigValueError("trial index must be >= 0");

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!ov.out.empty()) {
    file = open_out(ov.out);
    out = &file;
  }
  for (const auto& line : header_lines("trial-trace", loaded.experiment)) {
    *out << "# " << line << "\n";
  }
  TraceSink sink = [out](const RoundRecord& r) {
    const bool finite_overlap = r.overlap && std::isfinite(*r.overlap);
    *out << "{\"t\":" << r.t << ",\"arm\":" << r.arm << ",\"reward\":" << fmt(r.reward)
         << ",\"corrupted\":" << (r.corrupted ? "true" : "false") << ",\"overlap\":"
         << (finite_overlap ? fmt(*r.overlap) : std::string("null"))
         << ",\"active\":" << r.active << "}\n";
  };
  const TrialResult result = run_trial(loaded.experiment, trial, sink);
  *out << "{\"trial\":" << result.trial << ",\"tau\":" << result.tau
       << ",\"recommended\":" << result.recommended
       << ",\"correct\":" << (result.correct ? "true" : "false")
       << ",\"truncated\":" << (result.truncated ? "true" : "false") << "}\n";
  if (!ov.out.empty()) std::cout << "wrote " << ov.out << "\n";
  if (result.truncated) {
    std::cout << "warning: trial hit max_rounds before the stopping rule fired\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-arm identification under adversarial reward contamination"};
  app.require_subcommand(1);

  std::string run_config, sweep_config, complexity_config, trace_config;
  std::string ingest_csv, ingest_format, ingest_out;
  std::string run_trace_path;
  double ingest_sigma = 1.0;
  int trace_trial = 0;
  Overrides run_ov, sweep_ov, complexity_ov, trace_ov;

  auto* run = app.add_subcommand("run", "Run one experiment and aggregate trials");
  run->add_option("config", run_config, "Config file")->required();
  add_override_flags(run, run_ov);
  run->add_option("--trace", run_trace_path, "Write per-trial JSON lines here");

  auto* sw = app.add_subcommand("sweep", "Run the [sweep] grid from the config");
  sw->add_option("config", sweep_config, "Config file")->required();
  add_override_flags(sw, sweep_ov);

  auto* ingest = app.add_subcommand("ingest", "Convert a dataset CSV to an [instance]");
  ingest->add_option("csv", ingest_csv, "Dataset CSV file")->required();
  ingest->add_option("--format", ingest_format, "ratings | pkis2")->required();
  ingest->add_option("--sigma", ingest_sigma, "Gaussian arm sigma (default 1)");
  ingest->add_option("--out", ingest_out, "Output file path");

  auto* complexity =
      app.add_subcommand("complexity", "Print gap/complexity/bound report");
  complexity->add_option("config", complexity_config, "Config file")->required();
  add_override_flags(complexity, complexity_ov);

  auto* trace = app.add_subcommand("trial-trace", "Replay one trial round by round");
  trace->add_option("config", trace_config, "Config file")->required();
  add_override_flags(trace, trace_ov);
  trace->add_option("--trial", trace_trial, "Trial index (default 0)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_config, run_ov, run_trace_path);
    if (sw->parsed()) return cmd_sweep(sweep_config, sweep_ov);
    if (ingest->parsed()) {
      return cmd_ingest(ingest_csv, ingest_format, ingest_sigma, ingest_out);
    }
    if (complexity->parsed()) return cmd_complexity(complexity_config, complexity_ov);
    if (trace->parsed()) return cmd_trial_trace(trace_config, trace_ov, trace_trial);
  } catch (const ConfigFileError& e) {
    std::cerr << "error: config-file: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleGapError& e) {
    std::cerr << "error: infeasible: " << e.what() << "\n";
    return 4;
  } catch (const ConfigValueError& e) {
    std::cerr << "error: config-value: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: config-value: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
