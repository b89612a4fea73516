#include "cbai/bandit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbai/errors.hpp"
#include "fmt_compat.hpp"

namespace cbai {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

bool finite(double x) { return std::isfinite(x); }

// Index of the unique maximizer of the contaminated mixture means, or -1 on a
// tie. The mixture mean of arm i is (1-eps)*mu_i + eps*center_i.
int mixture_best(const std::vector<double>& means, const std::vector<double>& centers,
                 double epsilon) {
  int best = 0;
  bool tied = false;
  double best_value = (1.0 - epsilon) * means[0] + epsilon * centers[0];
  for (std::size_t i = 1; i < means.size(); ++i) {
    const double v = (1.0 - epsilon) * means[i] + epsilon * centers[i];
    if (v > best_value) {
      best = static_cast<int>(i);
      best_value = v;
      tied = false;
    } else if (v == best_value) {
      tied = true;
    }
  }
  return tied ? -1 : best;
}

}  // namespace

std::string to_string(DistKind kind) {
  switch (kind) {
    case DistKind::gaussian: return "gaussian";
    case DistKind::exponential: return "exponential";
    case DistKind::lognormal: return "lognormal";
    case DistKind::bernoulli: return "bernoulli";
  }
  return "?";
}

std::string to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::none: return "none";
    case AdversaryKind::fixed_shift: return "fixed_shift";
    case AdversaryKind::uniform_random_mean: return "uniform_random_mean";
  }
  return "?";
}

ArmDistribution ArmDistribution::gaussian(double mean, double sigma) {
  require(finite(mean), "gaussian mean must be finite");
  require(finite(sigma) && sigma > 0.0, "gaussian sigma must be > 0");
  return ArmDistribution(DistKind::gaussian, mean, sigma);
}

ArmDistribution ArmDistribution::exponential(double mean) {
  require(finite(mean) && mean > 0.0, "exponential mean must be > 0");
  return ArmDistribution(DistKind::exponential, mean, 0.0);
}

ArmDistribution ArmDistribution::lognormal(double mu_log, double sigma_log) {
  require(finite(mu_log), "lognormal mu_log must be finite");
  require(finite(sigma_log) && sigma_log > 0.0, "lognormal sigma_log must be > 0");
  return ArmDistribution(DistKind::lognormal, mu_log, sigma_log);
}

ArmDistribution ArmDistribution::bernoulli(double p) {
  require(finite(p) && p >= 0.0 && p <= 1.0, "bernoulli p must lie in [0, 1]");
  return ArmDistribution(DistKind::bernoulli, p, 0.0);
}

double ArmDistribution::true_mean() const {
  switch (kind_) {
    case DistKind::gaussian: return a_;
    case DistKind::exponential: return a_;
    case DistKind::lognormal: return std::exp(a_ + 0.5 * b_ * b_);
    case DistKind::bernoulli: return a_;
  }
  return 0.0;
}

double ArmDistribution::sample(const StreamRng& rng, std::uint64_t arm,
                               std::uint64_t t) const {
  switch (kind_) {
    case DistKind::gaussian:
      return a_ + b_ * rng.gaussian(arm, t);
    case DistKind::exponential:
      return -a_ * std::log(rng.u01(arm, t, 0));
    case DistKind::lognormal:
      return std::exp(a_ + b_ * rng.gaussian(arm, t));
    case DistKind::bernoulli:
      return rng.u01(arm, t, 0) <= a_ ? 1.0 : 0.0;
  }
  return 0.0;
}

BanditInstance::BanditInstance(std::vector<ArmDistribution> arms, double sigma_proxy)
    : arms_(std::move(arms)), sigma_proxy_(sigma_proxy) {
  require(!arms_.empty(), "instance needs at least one arm");
  require(finite(sigma_proxy_) && sigma_proxy_ > 0.0, "sigma_proxy must be > 0");
  means_.reserve(arms_.size());
  for (const auto& a : arms_) means_.push_back(a.true_mean());
  for (std::size_t i = 1; i < means_.size(); ++i) {
    if (means_[i] > means_[best_arm_]) best_arm_ = static_cast<int>(i);
  }
  if (size() >= 2) {
    std::vector<double> zeros(means_.size(), 0.0);
    check_separation(zeros);
  }
}

int BanditInstance::second_best() const {
  require(size() >= 2, "second_best needs K >= 2");
  int second = best_arm_ == 0 ? 1 : 0;
  for (int i = 0; i < size(); ++i) {
    if (i == best_arm_) continue;
    if (means_[static_cast<std::size_t>(i)] > means_[static_cast<std::size_t>(second)]) {
      second = i;
    }
  }
  return second;
}

void BanditInstance::check_separation(std::span<const double> uncertainty) const {
  require(uncertainty.size() == means_.size(),
          "uncertainty vector size must match arm count");
  const double top = means_[static_cast<std::size_t>(best_arm_)] -
                     uncertainty[static_cast<std::size_t>(best_arm_)];
  for (int i = 0; i < size(); ++i) {
    if (i == best_arm_) continue;
    const double rival = means_[static_cast<std::size_t>(i)] +
                         uncertainty[static_cast<std::size_t>(i)];
    if (!(top > rival)) {
      throw InfeasibleGapError(fmt_msg(
          "separation violated: arm %d (mean %.17g + U %.17g) reaches the best arm %d "
          "(mean %.17g - U %.17g)",
          i, means_[static_cast<std::size_t>(i)], uncertainty[static_cast<std::size_t>(i)],
          best_arm_, means_[static_cast<std::size_t>(best_arm_)],
          uncertainty[static_cast<std::size_t>(best_arm_)]));
    }
  }
}

std::vector<double> true_gaps(const BanditInstance& instance,
                              std::span<const double> uncertainty) {
  instance.check_separation(uncertainty);
  const auto& mu = instance.true_means();
  const int best = instance.best_arm();
  const double top = mu[static_cast<std::size_t>(best)] -
                     uncertainty[static_cast<std::size_t>(best)];
  std::vector<double> gaps(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    gaps[i] = top - (mu[i] + uncertainty[i]);
  }
  return gaps;
}

ContaminationModel::ContaminationModel(double eps, AdversaryKind adv, double parameter,
                                       double eps_assumed)
    : epsilon(eps),
      epsilon_assumed(eps_assumed < 0.0 ? eps : eps_assumed),
      adversary(adv) {
  require(finite(epsilon) && epsilon >= 0.0 && epsilon < 0.5,
          "epsilon must lie in [0, 0.5)");
  require(finite(epsilon_assumed) && epsilon_assumed >= 0.0 && epsilon_assumed < 0.5,
          "epsilon_assumed must lie in [0, 0.5)");
  switch (adversary) {
    case AdversaryKind::none:
      break;
    case AdversaryKind::fixed_shift:
      require(finite(parameter), "fixed_shift needs a finite shift");
      shift = parameter;
      break;
    case AdversaryKind::uniform_random_mean:
      require(finite(parameter) && parameter >= 0.0,
              "uniform_random_mean needs half_width >= 0");
      half_width = parameter;
      break;
  }
  if (epsilon > 0.0) {
    require(adversary != AdversaryKind::none,
            "epsilon > 0 requires an adversary kind");
  }
}

RealizedAdversary realize_adversary(const BanditInstance& instance,
                                    const ContaminationModel& model,
                                    const SeedSpec& seeds) {
  RealizedAdversary out;
  out.kind = model.adversary;
  out.half_width = model.half_width;
  if (model.epsilon == 0.0 || model.adversary == AdversaryKind::none) {
    out.kind = AdversaryKind::none;
    return out;
  }
  const auto& mu = instance.true_means();
  if (model.adversary == AdversaryKind::fixed_shift) {
    out.centers.reserve(mu.size());
    for (double m : mu) out.centers.push_back(m + model.shift);
    if (instance.size() >= 2 &&
        mixture_best(mu, out.centers, model.epsilon) != instance.best_arm()) {
      throw InfeasibleGapError("fixed_shift contamination moves the best arm");
    }
    return out;
  }
  // uniform_random_mean: centers drawn once per trial from a setup block of
  // the adversarial stream; counter c1 is a tag outside the per-round range.
  const StreamRng setup(seeds, Stream::adversarial_sample);
  constexpr std::uint64_t kSetupTag = ~0ull;
  const int K = instance.size();
  for (int attempt = 0; attempt < 100; ++attempt) {
    out.centers.assign(mu.size(), 0.0);
    for (int i = 0; i < K; ++i) {
      const double u = setup.u01(kSetupTag, static_cast<std::uint64_t>(attempt),
                                 static_cast<std::uint64_t>(i));
      out.centers[static_cast<std::size_t>(i)] =
          mu[static_cast<std::size_t>(i)] + model.half_width * (2.0 * u - 1.0);
    }
    out.resamples = attempt;
    if (K < 2 || mixture_best(mu, out.centers, model.epsilon) == instance.best_arm()) {
      return out;
    }
  }
  throw InfeasibleGapError(
      "uniform_random_mean: no admissible adversarial means after 100 resamples "
      "(contamination would move the best arm)");
}

RewardSource::RewardSource(const BanditInstance& instance, const ContaminationModel& model,
                           const SeedSpec& seeds)
    : instance_(&instance),
      model_(model),
      realized_(realize_adversary(instance, model, seeds)),
      natural_(seeds, Stream::natural_reward),
      coin_(seeds, Stream::corruption_coin),
      adversarial_(seeds, Stream::adversarial_sample) {}

bool RewardSource::corrupted(std::uint64_t t) const {
  if (model_.epsilon == 0.0) return false;
  return coin_.u01(t) <= model_.epsilon;
}

double RewardSource::draw(int arm, std::uint64_t t) const {
  require(arm >= 0 && arm < instance_->size(), "reward draw: arm index out of range");
  const auto a = static_cast<std::uint64_t>(arm);
  if (!corrupted(t)) {
    return instance_->arm(arm).sample(natural_, a, t);
  }
  const double center = realized_.centers[static_cast<std::size_t>(arm)];
  if (realized_.kind == AdversaryKind::fixed_shift) {
    return center;
  }
  return center + realized_.half_width * (2.0 * adversarial_.u01(a, t) - 1.0);
}

double sample_reward(const BanditInstance& instance, const ContaminationModel& model,
                     int arm, std::uint64_t t, const SeedSpec& seeds) {
  return RewardSource(instance, model, seeds).draw(arm, t);
}

}  // namespace cbai
