#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbai/confidence.hpp"
#include "cbai/estimators.hpp"
#include "cbai/rng.hpp"

namespace cbai {

enum class PolicyKind { gcbai, secbai, median_se, random_gap };
enum class RadiusMode { theorem, empirical };

std::string to_string(PolicyKind kind);
std::string to_string(RadiusMode mode);

struct PolicyConfig {
  RadiusParams radius;
  double alpha = 0.0;  // forced-exploration / trim parameter, epsilon/2 by default
  RadiusMode mode = RadiusMode::theorem;
};

// --- decision-rule kernels, shared by the policies and unit-testable alone ---

// Arms whose pull count is behind the forced-exploration schedule
// max(sqrt(t), floor_T); unpulled arms always qualify. Integer-exact tests.
std::vector<int> forced_set(std::span<const std::int64_t> counts, std::int64_t t,
                            double floor_T);

// Least-pulled candidate, lowest index on ties. Throws on empty candidates.
int least_pulled(std::span<const std::int64_t> counts, std::span<const int> candidates);

// Lowest index attaining the maximum estimate.
int best_estimate_arm(std::span<const double> estimates);

// Challenger: arm != best maximizing estimate + radius (lowest index on ties).
int most_ambiguous_arm(std::span<const double> estimates, std::span<const double> radii,
                       int best);

// Overlap between the challenger's upper bound and the leader's lower bound.
double gap_overlap(std::span<const double> estimates, std::span<const double> radii,
                   int best, int challenger);

// One elimination round: survivors of the active set given per-arm estimates,
// the current radius, the shared pull count and the floor guard. Throws if the
// active set is already a singleton.
struct SeRound {
  std::vector<int> survivors;
  std::vector<int> eliminated;
};
SeRound se_round_survivors(std::span<const int> active,
                           std::span<const double> estimates_active, double gamma,
                           std::int64_t n_pulls, double floor_T);

// Uniform arm choice from the dedicated policy stream at pull counter t.
int uniform_arm(const StreamRng& policy_stream, std::int64_t t, int num_arms);

// --- policy objects ---

struct EliminationEvent {
  int arm = 0;
  std::int64_t round = 0;  // pull count of the arm when it was dropped
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual int select_arm() = 0;
  virtual void observe(int arm, double reward) = 0;
  virtual bool finished() const = 0;
  virtual int recommendation() const = 0;
  virtual std::int64_t total_pulls() const = 0;
  // Gap policies: last computed overlap (+inf before the first exploit round).
  virtual std::optional<double> overlap() const { return std::nullopt; }
  virtual int active_count() const = 0;
  virtual std::span<const std::int64_t> counts() const = 0;
  virtual std::span<const EliminationEvent> eliminations() const { return {}; }
};

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyConfig& config,
                                    int num_arms, const SeedSpec& seeds);

}  // namespace cbai
