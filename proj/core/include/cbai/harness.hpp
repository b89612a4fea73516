#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbai/bandit.hpp"
#include "cbai/policies.hpp"

namespace cbai {

// Declarative instance description; build_instance validates and constructs.
struct InstanceSpec {
  DistKind kind = DistKind::gaussian;
  std::vector<double> means;      // gaussian / exponential means, bernoulli p
  std::vector<double> sigmas;     // gaussian: one shared value or one per arm
  std::vector<double> mu_log;     // lognormal
  std::vector<double> sigma_log;  // lognormal
  double sigma_proxy = 0.0;       // 0 selects the family default
};

BanditInstance build_instance(const InstanceSpec& spec);

struct ExperimentConfig {
  InstanceSpec instance;
  ContaminationModel contamination;
  PolicyKind policy = PolicyKind::gcbai;
  RadiusMode radius_mode = RadiusMode::theorem;
  double delta = 0.1;
  std::optional<double> alpha_override;  // default epsilon_assumed / 2
  double beta_exp = 2.0;
  double c1 = 1.0;
  int n_trials = 1000;
  std::uint64_t master_seed = 1;
  std::int64_t max_rounds = 10'000'000;
};

double resolved_alpha(const ExperimentConfig& config);
PolicyConfig build_policy_config(const ExperimentConfig& config, int num_arms);

struct TrialResult {
  int trial = 0;
  std::int64_t tau = 0;
  int recommended = 0;
  bool correct = false;
  bool truncated = false;
  double wall_time = 0.0;  // seconds, excluded from any serialized output
};

struct RoundRecord {
  std::int64_t t = 0;
  int arm = 0;
  double reward = 0.0;
  bool corrupted = false;               // diagnostics only, invisible to the policy
  std::optional<double> overlap;        // gap policies
  int active = 0;                       // elimination policies: |active set|
};

using TraceSink = std::function<void(const RoundRecord&)>;

TrialResult run_trial(const ExperimentConfig& config, int trial_index,
                      const TraceSink& trace = nullptr);

struct ExperimentSummary {
  double mean_tau = 0.0;
  double std_tau = 0.0;
  double stderr_tau = 0.0;
  double error_rate = 0.0;
  double error_ci_low = 0.0;   // normal-approximation binomial CI
  double error_ci_high = 0.0;
  int n_trials = 0;
  int truncated = 0;
  bool stderr_defined = true;  // false for n_trials = 1 (degenerate sample)
};

// Runs trials 0..n-1 (optionally across threads; results are merged in trial
// order so the aggregate never depends on the worker count).
ExperimentSummary run_experiment(const ExperimentConfig& config, int threads = 1,
                                 std::vector<TrialResult>* results = nullptr);

ExperimentSummary summarize(std::span<const TrialResult> results);

enum class ParamAxis { delta, epsilon };

std::string to_string(ParamAxis axis);

struct SweepRow {
  double param = 0.0;
  PolicyKind policy = PolicyKind::gcbai;
  ExperimentSummary summary;
};

// One experiment per grid value (ascending); empty grids are rejected.
std::vector<SweepRow> sweep(const ExperimentConfig& config, ParamAxis axis,
                            std::span<const double> grid, int threads = 1);

// CSV with the fixed header row; header_comments are emitted first as
// "# line" comments. 6 significant digits, LF endings.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows,
                     std::span<const std::string> header_comments);

void write_trial_jsonl(std::ostream& out, std::span<const TrialResult> results);

std::string format_sig6(double v);

// Dataset ingestion: (item_id, rating) rows -> per-item mean-rating arms.
InstanceSpec ingest_ratings(std::istream& in, double sigma);

// Dataset ingestion: (compound_id, percent_inhibition) rows -> min-max
// normalized, control = 1 - normalized, arm mean = ln(max(control, 1e-6)).
InstanceSpec ingest_pkis2(std::istream& in, double sigma);

}  // namespace cbai
