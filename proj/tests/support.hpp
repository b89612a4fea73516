// Shared fixtures and reference implementations for the test suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <vector>

#include "cbai/bandit.hpp"
#include "cbai/harness.hpp"
#include "cbai/policies.hpp"

namespace testsupport {

// Sort-based reference estimators, deliberately independent of ArmStatistics.
inline double ref_trimmed_mean(std::vector<double> xs, double alpha) {
  std::sort(xs.begin(), xs.end());
  const auto n = xs.size();
  const auto k =
      static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n)));
  double sum = 0.0;
  for (std::size_t i = k; i < n - k; ++i) sum += xs[i];
  return sum / static_cast<double>(n - 2 * k);
}

inline double ref_median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const auto n = xs.size();
  if (n % 2 == 1) return xs[n / 2];
  return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// Comparison for two floating-point aggregates of the same samples. Summation
// error is relative to the magnitude of the summands (scale_hint), not of the
// possibly cancelling result, which no summation order could satisfy.
inline bool agree_rel(double a, double b, double scale_hint, double tol = 1e-9) {
  const double scale = std::max({std::abs(a), std::abs(b), scale_hint});
  return std::abs(a - b) <= tol * scale;
}

// The showcase four-arm gaussian instance.
inline cbai::InstanceSpec k4_spec() {
  cbai::InstanceSpec spec;
  spec.means = {2.5, 2.3, 2.0, 0.6};
  spec.sigmas = {1.0};
  return spec;
}

inline cbai::InstanceSpec two_arm_spec(double mu0, double mu1) {
  cbai::InstanceSpec spec;
  spec.means = {mu0, mu1};
  spec.sigmas = {1.0};
  return spec;
}

inline cbai::ExperimentConfig make_experiment(cbai::InstanceSpec instance,
                                              cbai::PolicyKind policy, double eps,
                                              double delta, double shift) {
  cbai::ExperimentConfig config;
  config.instance = std::move(instance);
  if (eps > 0.0) {
    config.contamination =
        cbai::ContaminationModel(eps, cbai::AdversaryKind::fixed_shift, shift);
  }
  config.policy = policy;
  config.delta = delta;
  return config;
}

struct PolicyRun {
  std::unique_ptr<cbai::Policy> policy;
  cbai::TrialResult result;
};

// Mirrors run_trial but keeps the policy alive so tests can inspect pull
// counts and elimination events after stopping.
inline PolicyRun run_policy_trial(const cbai::ExperimentConfig& config,
                                  int trial_index) {
  const cbai::BanditInstance instance = cbai::build_instance(config.instance);
  const cbai::SeedSpec seeds{config.master_seed,
                             static_cast<std::uint64_t>(trial_index)};
  const cbai::RewardSource source(instance, config.contamination, seeds);
  PolicyRun run;
  run.policy = cbai::make_policy(
      config.policy, cbai::build_policy_config(config, instance.size()),
      instance.size(), seeds);
  std::int64_t t = 0;
  while (!run.policy->finished() && t < config.max_rounds) {
    const int arm = run.policy->select_arm();
    t += 1;
    run.policy->observe(arm, source.draw(arm, static_cast<std::uint64_t>(t)));
  }
  run.result.trial = trial_index;
  run.result.tau = t;
  run.result.truncated = !run.policy->finished();
  run.result.recommended = run.policy->recommendation();
  run.result.correct = run.result.recommended == instance.best_arm();
  return run;
}

}  // namespace testsupport
