#include <benchmark/benchmark.h>

#include <cstdint>

#include "cbai/estimators.hpp"
#include "cbai/harness.hpp"
#include "cbai/policies.hpp"
#include "cbai/rng.hpp"

namespace {

using namespace cbai;

void BM_RngU01(benchmark::State& state) {
  const StreamRng rng(SeedSpec{1, 0}, Stream::natural_reward);
  std::uint64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.u01(0, ++t));
  }
}
BENCHMARK(BM_RngU01);

void BM_RngGaussian(benchmark::State& state) {
  const StreamRng rng(SeedSpec{1, 0}, Stream::natural_reward);
  std::uint64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.gaussian(0, ++t));
  }
}
BENCHMARK(BM_RngGaussian);

void BM_StatsInsert(benchmark::State& state) {
  const StreamRng rng(SeedSpec{7, 0}, Stream::natural_reward);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    ArmStatistics stats;
    for (std::uint64_t t = 1; t <= n; ++t) stats.insert(rng.gaussian(0, t));
    benchmark::DoNotOptimize(stats.count());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StatsInsert)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_TrimmedMeanRunning(benchmark::State& state) {
  const StreamRng rng(SeedSpec{7, 0}, Stream::natural_reward);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    ArmStatistics stats;
    double acc = 0.0;
    for (std::uint64_t t = 1; t <= n; ++t) {
      stats.insert(rng.gaussian(0, t));
      acc += trimmed_mean(stats, 0.05);
    }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrimmedMeanRunning)->Arg(1000)->Arg(10000);

ExperimentConfig showcase_config() {
  ExperimentConfig config;
  config.instance.kind = DistKind::gaussian;
  config.instance.means = {2.5, 2.3, 2.0, 0.6};
  config.instance.sigmas = {1.0};
  config.contamination = ContaminationModel(0.1, AdversaryKind::fixed_shift, 5.0);
  config.delta = 0.1;
  return config;
}

void BM_GapPolicyPulls(benchmark::State& state) {
  const auto config = showcase_config();
  const BanditInstance instance = build_instance(config.instance);
  const SeedSpec seeds{3, 0};
  const RewardSource source(instance, config.contamination, seeds);
  const auto pc = build_policy_config(config, instance.size());
  const auto n = static_cast<std::int64_t>(state.range(0));
  for (auto _ : state) {
    auto policy = make_policy(PolicyKind::gcbai, pc, instance.size(), seeds);
    for (std::int64_t t = 1; t <= n; ++t) {
      const int arm = policy->select_arm();
      policy->observe(arm, source.draw(arm, static_cast<std::uint64_t>(t)));
    }
    benchmark::DoNotOptimize(policy->total_pulls());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GapPolicyPulls)->Arg(10000)->Arg(100000);

void BM_EliminationPolicyPulls(benchmark::State& state) {
  auto config = showcase_config();
  config.policy = PolicyKind::secbai;
  const BanditInstance instance = build_instance(config.instance);
  const SeedSpec seeds{3, 0};
  const RewardSource source(instance, config.contamination, seeds);
  const auto pc = build_policy_config(config, instance.size());
  const auto n = static_cast<std::int64_t>(state.range(0));
  for (auto _ : state) {
    auto policy = make_policy(PolicyKind::secbai, pc, instance.size(), seeds);
    for (std::int64_t t = 1; t <= n; ++t) {
      const int arm = policy->select_arm();
      policy->observe(arm, source.draw(arm, static_cast<std::uint64_t>(t)));
    }
    benchmark::DoNotOptimize(policy->total_pulls());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EliminationPolicyPulls)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
