#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cbai/rng.hpp"

namespace cbai {

enum class DistKind { gaussian, exponential, lognormal, bernoulli };

std::string to_string(DistKind kind);

// One arm's natural reward distribution. Parameters are validated at
// construction; sampling is a pure function of (stream, arm, t).
class ArmDistribution {
 public:
  static ArmDistribution gaussian(double mean, double sigma);
  static ArmDistribution exponential(double mean);
  static ArmDistribution lognormal(double mu_log, double sigma_log);
  static ArmDistribution bernoulli(double p);

  DistKind kind() const { return kind_; }
  double true_mean() const;
  // First/second family parameter (mean/sigma, mean/-, mu_log/sigma_log, p/-).
  double param_a() const { return a_; }
  double param_b() const { return b_; }

  double sample(const StreamRng& rng, std::uint64_t arm, std::uint64_t t) const;

 private:
  ArmDistribution(DistKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  DistKind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
};

// A fixed set of arms plus the sub-gaussian scale the algorithms assume.
// Construction rejects instances without a unique best mean (K >= 2), since
// every guarantee downstream needs the top arm to be identifiable.
class BanditInstance {
 public:
  BanditInstance(std::vector<ArmDistribution> arms, double sigma_proxy);

  int size() const { return static_cast<int>(arms_.size()); }
  int best_arm() const { return best_arm_; }
  int second_best() const;  // K >= 2 only
  const std::vector<double>& true_means() const { return means_; }
  double sigma_proxy() const { return sigma_proxy_; }
  const ArmDistribution& arm(int i) const { return arms_[static_cast<std::size_t>(i)]; }

  // Throws unless (mu_best - U_best) > (mu_a + U_a) for every a != best.
  void check_separation(std::span<const double> uncertainty) const;

 private:
  std::vector<ArmDistribution> arms_;
  std::vector<double> means_;
  double sigma_proxy_;
  int best_arm_ = 0;
};

// Per-arm gaps Delta_i = (mu_best - U_best) - (mu_i + U_i). Throws if the
// uncertainty widths destroy separation.
std::vector<double> true_gaps(const BanditInstance& instance,
                              std::span<const double> uncertainty);

enum class AdversaryKind { none, fixed_shift, uniform_random_mean };

std::string to_string(AdversaryKind kind);

// Contamination level and adversary family. epsilon drives generation;
// epsilon_assumed is the (possibly looser) value handed to the algorithms.
struct ContaminationModel {
  double epsilon = 0.0;
  double epsilon_assumed = 0.0;
  AdversaryKind adversary = AdversaryKind::none;
  double shift = 0.0;       // fixed_shift: corrupted sample = arm mean + shift
  double half_width = 0.0;  // uniform_random_mean: support half-width

  ContaminationModel() = default;
  ContaminationModel(double epsilon, AdversaryKind adversary, double parameter = 0.0,
                     double epsilon_assumed = -1.0);
};

// Adversary parameters drawn once per trial (oblivious: fixed before any
// reward is revealed). For uniform_random_mean the per-arm centers are
// resampled up to 100 times until the contaminated mixture keeps the same
// best arm; exhaustion throws.
struct RealizedAdversary {
  AdversaryKind kind = AdversaryKind::none;
  std::vector<double> centers;
  double half_width = 0.0;
  int resamples = 0;
};

RealizedAdversary realize_adversary(const BanditInstance& instance,
                                    const ContaminationModel& model,
                                    const SeedSpec& seeds);

// Caches the three stream keys and the realized adversary for one trial.
class RewardSource {
 public:
  RewardSource(const BanditInstance& instance, const ContaminationModel& model,
               const SeedSpec& seeds);

  // Reward for pulling `arm` at round t (t >= 1): the natural draw, or the
  // adversarial draw when the round's corruption coin comes up.
  double draw(int arm, std::uint64_t t) const;
  bool corrupted(std::uint64_t t) const;
  const RealizedAdversary& adversary() const { return realized_; }

 private:
  const BanditInstance* instance_;
  ContaminationModel model_;
  RealizedAdversary realized_;
  StreamRng natural_, coin_, adversarial_;
};

// Convenience form: realizes the adversary on the fly.
double sample_reward(const BanditInstance& instance, const ContaminationModel& model,
                     int arm, std::uint64_t t, const SeedSpec& seeds);

}  // namespace cbai
