#include "cbai/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "cbai/errors.hpp"
#include "fmt_compat.hpp"

namespace cbai {
namespace {

std::vector<ArmDistribution> build_arms(const InstanceSpec& spec) {
  std::vector<ArmDistribution> arms;
  switch (spec.kind) {
    case DistKind::gaussian: {
      if (spec.means.empty()) throw ConfigValueError("gaussian instance needs means");
      if (spec.sigmas.empty()) throw ConfigValueError("gaussian instance needs sigma");
      if (spec.sigmas.size() != 1 && spec.sigmas.size() != spec.means.size()) {
        throw ConfigValueError("sigma must be a scalar or one value per arm");
      }
      for (std::size_t i = 0; i < spec.means.size(); ++i) {
        const double s = spec.sigmas.size() == 1 ? spec.sigmas[0] : spec.sigmas[i];
        arms.push_back(ArmDistribution::gaussian(spec.means[i], s));
      }
      break;
    }
    case DistKind::exponential: {
      if (spec.means.empty()) throw ConfigValueError("exponential instance needs means");
      for (double m : spec.means) arms.push_back(ArmDistribution::exponential(m));
      break;
    }
    case DistKind::lognormal: {
      if (spec.mu_log.empty() || spec.mu_log.size() != spec.sigma_log.size()) {
        throw ConfigValueError("lognormal instance needs matching mu_log/sigma_log");
      }
      for (std::size_t i = 0; i < spec.mu_log.size(); ++i) {
        arms.push_back(ArmDistribution::lognormal(spec.mu_log[i], spec.sigma_log[i]));
      }
      break;
    }
    case DistKind::bernoulli: {
      if (spec.means.empty()) throw ConfigValueError("bernoulli instance needs p");
      for (double p : spec.means) arms.push_back(ArmDistribution::bernoulli(p));
      break;
    }
  }
  return arms;
}

double default_sigma_proxy(const InstanceSpec& spec) {
  switch (spec.kind) {
    case DistKind::gaussian:
      return *std::max_element(spec.sigmas.begin(), spec.sigmas.end());
    case DistKind::exponential:
      return *std::max_element(spec.means.begin(), spec.means.end());
    case DistKind::bernoulli:
      return 0.5;
    case DistKind::lognormal:
      throw ConfigValueError(
          "lognormal instances have no default sigma_proxy; set one explicitly");
  }
  return 1.0;
}

}  // namespace

BanditInstance build_instance(const InstanceSpec& spec) {
  auto arms = build_arms(spec);
  const double proxy = spec.sigma_proxy > 0.0 ? spec.sigma_proxy : default_sigma_proxy(spec);
  return BanditInstance(std::move(arms), proxy);
}

double resolved_alpha(const ExperimentConfig& config) {
  return config.alpha_override.value_or(config.contamination.epsilon_assumed / 2.0);
}

PolicyConfig build_policy_config(const ExperimentConfig& config, int num_arms) {
  PolicyConfig pc;
  const auto instance = build_instance(config.instance);
  // RadiusParams wants K >= 2; the K = 1 short-circuit never evaluates radii.
  pc.radius = RadiusParams(instance.sigma_proxy(), config.contamination.epsilon_assumed,
                           std::max(num_arms, 2), config.delta, config.beta_exp,
                           config.c1);
  pc.alpha = resolved_alpha(config);
  pc.mode = config.radius_mode;
  return pc;
}

TrialResult run_trial(const ExperimentConfig& config, int trial_index,
                      const TraceSink& trace) {
  const auto start = std::chrono::steady_clock::now();
  const BanditInstance instance = build_instance(config.instance);
  const SeedSpec seeds{config.master_seed, static_cast<std::uint64_t>(trial_index)};
  const RewardSource source(instance, config.contamination, seeds);
  auto policy = make_policy(config.policy, build_policy_config(config, instance.size()),
                            instance.size(), seeds);

  std::int64_t t = 0;
  while (!policy->finished() && t < config.max_rounds) {
    const int arm = policy->select_arm();
    t += 1;
    const double reward = source.draw(arm, static_cast<std::uint64_t>(t));
    policy->observe(arm, reward);
    if (trace) {
      trace(RoundRecord{t, arm, reward, source.corrupted(static_cast<std::uint64_t>(t)),
                        policy->overlap(), policy->active_count()});
    }
  }

  TrialResult result;
  result.trial = trial_index;
  result.tau = t;
  result.truncated = !policy->finished();
  result.recommended = policy->recommendation();
  result.correct = result.recommended == instance.best_arm();
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

ExperimentSummary summarize(std::span<const TrialResult> results) {
  ExperimentSummary s;
  s.n_trials = static_cast<int>(results.size());
  if (results.empty()) {
    s.stderr_defined = false;
    return s;
  }
  // Welford accumulation in trial order: identical regardless of how the
  // trials were scheduled across workers.
  double mean = 0.0, m2 = 0.0;
  std::int64_t n = 0;
  int errors = 0;
  for (const auto& r : results) {
    n += 1;
    const auto tau = static_cast<double>(r.tau);
    const double d1 = tau - mean;
    mean += d1 / static_cast<double>(n);
    m2 += d1 * (tau - mean);
    if (!r.correct) errors += 1;
    if (r.truncated) s.truncated += 1;
  }
  s.mean_tau = mean;
  s.std_tau = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
  s.stderr_tau = n > 1 ? s.std_tau / std::sqrt(static_cast<double>(n)) : 0.0;
  s.stderr_defined = n > 1;
  s.error_rate = static_cast<double>(errors) / static_cast<double>(n);
  const double half =
      1.96 * std::sqrt(std::max(s.error_rate * (1.0 - s.error_rate), 0.0) /
                       static_cast<double>(n));
  s.error_ci_low = std::max(0.0, s.error_rate - half);
  s.error_ci_high = std::min(1.0, s.error_rate + half);
  return s;
}

ExperimentSummary run_experiment(const ExperimentConfig& config, int threads,
                                 std::vector<TrialResult>* results_out) {
  if (config.n_trials < 1) throw ConfigValueError("trials must be >= 1");
  std::vector<TrialResult> results(static_cast<std::size_t>(config.n_trials));
  const int workers = std::clamp(threads, 1, config.n_trials);
  if (workers == 1) {
    for (int i = 0; i < config.n_trials; ++i) results[static_cast<std::size_t>(i)] = run_trial(config, i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < config.n_trials; i += workers) {
            results[static_cast<std::size_t>(i)] = run_trial(config, i);
          }
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }
  if (results_out) *results_out = results;
  return summarize(results);
}

std::string to_string(ParamAxis axis) {
  return axis == ParamAxis::delta ? "delta" : "epsilon";
}

std::vector<SweepRow> sweep(const ExperimentConfig& config, ParamAxis axis,
                            std::span<const double> grid, int threads) {
  if (grid.empty()) throw ConfigValueError("sweep grid must not be empty");
  std::vector<double> values(grid.begin(), grid.end());
  std::sort(values.begin(), values.end());
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    ExperimentConfig point = config;
    if (axis == ParamAxis::delta) {
      point.delta = v;
    } else {
      const auto& c = config.contamination;
      const double parameter = c.adversary == AdversaryKind::uniform_random_mean
                                   ? c.half_width
                                   : c.shift;
      point.contamination = ContaminationModel(v, c.adversary, parameter);
    }
    SweepRow row;
    row.param = v;
    row.policy = config.policy;
    row.summary = run_experiment(point, threads);
    rows.push_back(row);
  }
  return rows;
}

std::string format_sig6(double v) {
  return fmt_msg("%.6g", v);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows,
                     std::span<const std::string> header_comments) {
  for (const auto& line : header_comments) out << "# " << line << "\n";
  out << "param,policy,mean_tau,std_tau,stderr_tau,error_rate,n_trials,truncated\n";
  for (const auto& row : rows) {
    out << format_sig6(row.param) << ',' << to_string(row.policy) << ','
        << format_sig6(row.summary.mean_tau) << ',' << format_sig6(row.summary.std_tau)
        << ',' << format_sig6(row.summary.stderr_tau) << ','
        << format_sig6(row.summary.error_rate) << ',' << row.summary.n_trials << ','
        << row.summary.truncated << "\n";
  }
}

void write_trial_jsonl(std::ostream& out, std::span<const TrialResult> results) {
  for (const auto& r : results) {
    out << "{\"trial\":" << r.trial << ",\"tau\":" << r.tau
        << ",\"recommended\":" << r.recommended
        << ",\"correct\":" << (r.correct ? "true" : "false")
        << ",\"truncated\":" << (r.truncated ? "true" : "false") << "}\n";
  }
}

}  // namespace cbai
