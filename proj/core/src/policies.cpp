#include "cbai/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cbai {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::gcbai: return "gcbai";
    case PolicyKind::secbai: return "secbai";
    case PolicyKind::median_se: return "median_se";
    case PolicyKind::random_gap: return "random_gap";
  }
  return "?";
}

std::string to_string(RadiusMode mode) {
  return mode == RadiusMode::theorem ? "theorem" : "empirical";
}

std::vector<int> forced_set(std::span<const std::int64_t> counts, std::int64_t t,
                            double floor_T) {
  std::vector<int> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::int64_t n = counts[i];
    if (n == 0 || n * n < t || static_cast<double>(n) < floor_T) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

int least_pulled(std::span<const std::int64_t> counts, std::span<const int> candidates) {
  if (candidates.empty()) throw std::invalid_argument("least_pulled: no candidates");
  int pick = candidates[0];
  for (int c : candidates) {
    const auto n = counts[static_cast<std::size_t>(c)];
    const auto best = counts[static_cast<std::size_t>(pick)];
    if (n < best || (n == best && c < pick)) pick = c;
  }
  return pick;
}

int best_estimate_arm(std::span<const double> estimates) {
  if (estimates.empty()) throw std::invalid_argument("best_estimate_arm: empty");
  int best = 0;
  for (std::size_t i = 1; i < estimates.size(); ++i) {
    if (estimates[i] > estimates[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

int most_ambiguous_arm(std::span<const double> estimates, std::span<const double> radii,
                       int best) {
  if (estimates.size() < 2) {
    throw std::invalid_argument("most_ambiguous_arm: needs K >= 2");
  }
  int pick = -1;
  double pick_value = -kInf;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (static_cast<int>(i) == best) continue;
    const double v = estimates[i] + radii[i];
    if (v > pick_value) {
      pick_value = v;
      pick = static_cast<int>(i);
    }
  }
  return pick;
}

double gap_overlap(std::span<const double> estimates, std::span<const double> radii,
                   int best, int challenger) {
  const auto b = static_cast<std::size_t>(best);
  const auto c = static_cast<std::size_t>(challenger);
  return estimates[c] + radii[c] - (estimates[b] - radii[b]);
}

SeRound se_round_survivors(std::span<const int> active,
                           std::span<const double> estimates_active, double gamma,
                           std::int64_t n_pulls, double floor_T) {
  if (active.size() <= 1) {
    throw std::invalid_argument(
        "se_round_survivors: active set already a singleton, round must not run");
  }
  if (active.size() != estimates_active.size()) {
    throw std::invalid_argument("se_round_survivors: estimate/active size mismatch");
  }
  double top = -kInf;
  for (double e : estimates_active) top = std::max(top, e);
  SeRound out;
  const bool guard = static_cast<double>(n_pulls) < floor_T;
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (estimates_active[i] >= top - 2.0 * gamma || guard) {
      out.survivors.push_back(active[i]);
    } else {
      out.eliminated.push_back(active[i]);
    }
  }
  return out;
}

int uniform_arm(const StreamRng& policy_stream, std::int64_t t, int num_arms) {
  const double u = policy_stream.u01(static_cast<std::uint64_t>(t));
  const int idx = static_cast<int>(u * static_cast<double>(num_arms));
  return std::min(idx, num_arms - 1);
}

namespace {

// gcbai and random_gap: same estimates, radii and stopping rule; they differ
// only in how the next arm is chosen.
class GapPolicy final : public Policy {
 public:
  GapPolicy(const PolicyConfig& config, int num_arms, const SeedSpec& seeds,
            bool random_selection)
      : config_(config),
        k_(num_arms),
        random_(random_selection),
        policy_stream_(seeds, Stream::policy),
        stats_(static_cast<std::size_t>(num_arms)),
        counts_(static_cast<std::size_t>(num_arms), 0),
        estimates_(static_cast<std::size_t>(num_arms), 0.0),
        trim_(policy_trim_fraction(config.alpha)),
        floor_t_(exploration_floor(config.alpha, config.radius.delta)) {
    if (k_ < 1) throw std::invalid_argument("policy needs at least one arm");
    stop_floor_ = std::ceil(static_cast<double>(k_) * floor_t_);
  }

  int select_arm() override {
    if (finished()) throw std::logic_error("select_arm called after stopping");
    if (k_ == 1) return 0;
    if (random_) return uniform_arm(policy_stream_, t_, k_);
    const auto forced = forced_set(counts_, t_, floor_t_);
    if (!forced.empty()) return least_pulled(counts_, forced);
    // Exploit round: refresh leader, challenger and overlap, then pull the
    // looser of the two.
    const auto radii = current_radii();
    best_ = best_estimate_arm(estimates_);
    challenger_ = most_ambiguous_arm(estimates_, radii, best_);
    overlap_ = gap_overlap(estimates_, radii, best_, challenger_);
    return radii[static_cast<std::size_t>(challenger_)] >
                   radii[static_cast<std::size_t>(best_)]
               ? challenger_
               : best_;
  }

  void observe(int arm, double reward) override {
    auto& s = stats_[static_cast<std::size_t>(arm)];
    s.insert(reward);
    counts_[static_cast<std::size_t>(arm)] += 1;
    estimates_[static_cast<std::size_t>(arm)] = trimmed_mean(s, trim_);
    t_ += 1;
  }

  bool finished() const override {
    if (k_ == 1) {
      return static_cast<double>(t_) >= std::max(std::ceil(floor_t_), 1.0);
    }
    if (static_cast<double>(t_) < stop_floor_ || !all_pulled()) return false;
    if (!random_) return overlap_ <= 0.0;
    // Random selection has no exploit rounds, so evaluate the overlap fresh.
    const auto radii = current_radii();
    best_ = best_estimate_arm(estimates_);
    challenger_ = most_ambiguous_arm(estimates_, radii, best_);
    overlap_ = gap_overlap(estimates_, radii, best_, challenger_);
    return overlap_ <= 0.0;
  }

  int recommendation() const override {
    int best = 0;
    double best_value = -kInf;
    for (int i = 0; i < k_; ++i) {
      if (counts_[static_cast<std::size_t>(i)] == 0) continue;
      if (estimates_[static_cast<std::size_t>(i)] > best_value) {
        best_value = estimates_[static_cast<std::size_t>(i)];
        best = i;
      }
    }
    return best;
  }

  std::int64_t total_pulls() const override { return t_; }
  std::optional<double> overlap() const override { return overlap_; }
  int active_count() const override { return k_; }
  std::span<const std::int64_t> counts() const override { return counts_; }

 private:
  bool all_pulled() const {
    return std::all_of(counts_.begin(), counts_.end(),
                       [](std::int64_t n) { return n > 0; });
  }

  std::vector<double> current_radii() const {
    std::vector<double> radii(static_cast<std::size_t>(k_));
    const std::int64_t t = std::max<std::int64_t>(t_, 1);
    for (int i = 0; i < k_; ++i) {
      const std::int64_t n = counts_[static_cast<std::size_t>(i)];
      radii[static_cast<std::size_t>(i)] =
          config_.mode == RadiusMode::theorem
              ? beta_gap_radius(config_.radius, n, t)
              : empirical_gap_radius(config_.radius.sigma, config_.radius.delta, n, t);
    }
    return radii;
  }

  PolicyConfig config_;
  int k_;
  bool random_;
  StreamRng policy_stream_;
  std::vector<ArmStatistics> stats_;
  std::vector<std::int64_t> counts_;
  std::vector<double> estimates_;
  double trim_;
  double floor_t_;
  double stop_floor_ = 0.0;
  std::int64_t t_ = 0;
  mutable int best_ = 0;
  mutable int challenger_ = 0;
  mutable double overlap_ = kInf;
};

// secbai and median_se: sample every active arm once per round, then drop the
// arms that fall 2*gamma behind, unless the floor guard still protects them.
class EliminationPolicy final : public Policy {
 public:
  EliminationPolicy(const PolicyConfig& config, int num_arms, bool use_median)
      : config_(config),
        k_(num_arms),
        median_(use_median),
        stats_(static_cast<std::size_t>(num_arms)),
        counts_(static_cast<std::size_t>(num_arms), 0),
        trim_(policy_trim_fraction(config.alpha)),
        floor_t_(exploration_floor(config.alpha, config.radius.delta)) {
    if (k_ < 1) throw std::invalid_argument("policy needs at least one arm");
    active_.resize(static_cast<std::size_t>(k_));
    for (int i = 0; i < k_; ++i) active_[static_cast<std::size_t>(i)] = i;
  }

  int select_arm() override {
    if (finished()) throw std::logic_error("select_arm called after stopping");
    return active_[pos_];
  }

  void observe(int arm, double reward) override {
    auto& s = stats_[static_cast<std::size_t>(arm)];
    s.insert(reward);
    counts_[static_cast<std::size_t>(arm)] += 1;
    t_ += 1;
    pos_ += 1;
    if (pos_ < active_.size()) return;
    pos_ = 0;
    round_ += 1;
    if (active_.size() <= 1) return;
    std::vector<double> estimates(active_.size());
    for (std::size_t i = 0; i < active_.size(); ++i) {
      const auto& as = stats_[static_cast<std::size_t>(active_[i])];
      estimates[i] = median_ ? empirical_median(as) : trimmed_mean(as, trim_);
    }
    const double gamma = gamma_se_radius(config_.radius, round_);
    const SeRound result =
        se_round_survivors(active_, estimates, gamma, round_, floor_t_);
    for (int dropped : result.eliminated) {
      events_.push_back({dropped, round_});
    }
    active_ = result.survivors;
  }

  bool finished() const override { return active_.size() == 1 && t_ >= 1; }

  int recommendation() const override {
    if (active_.size() == 1) return active_[0];
    // Truncated mid-run: best current estimate among active, pulled arms.
    int best = active_.empty() ? 0 : active_[0];
    double best_value = -kInf;
    for (int a : active_) {
      const auto& s = stats_[static_cast<std::size_t>(a)];
      if (s.count() == 0) continue;
      const double e = median_ ? empirical_median(s) : trimmed_mean(s, trim_);
      if (e > best_value) {
        best_value = e;
        best = a;
      }
    }
    return best;
  }

  std::int64_t total_pulls() const override { return t_; }
  int active_count() const override { return static_cast<int>(active_.size()); }
  std::span<const std::int64_t> counts() const override { return counts_; }
  std::span<const EliminationEvent> eliminations() const override { return events_; }

 private:
  PolicyConfig config_;
  int k_;
  bool median_;
  std::vector<ArmStatistics> stats_;
  std::vector<std::int64_t> counts_;
  double trim_;
  double floor_t_;
  std::vector<int> active_;
  std::vector<EliminationEvent> events_;
  std::size_t pos_ = 0;
  std::int64_t round_ = 0;
  std::int64_t t_ = 0;
};

}  // namespace

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyConfig& config,
                                    int num_arms, const SeedSpec& seeds) {
  switch (kind) {
    case PolicyKind::gcbai:
      return std::make_unique<GapPolicy>(config, num_arms, seeds, false);
    case PolicyKind::random_gap:
      return std::make_unique<GapPolicy>(config, num_arms, seeds, true);
    case PolicyKind::secbai:
      return std::make_unique<EliminationPolicy>(config, num_arms, false);
    case PolicyKind::median_se:
      return std::make_unique<EliminationPolicy>(config, num_arms, true);
  }
  throw std::invalid_argument("unknown policy kind");
}

}  // namespace cbai
