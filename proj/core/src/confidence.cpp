#include "cbai/confidence.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cbai/errors.hpp"
#include "fmt_compat.hpp"

namespace cbai {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_delta(double delta) {
  require(std::isfinite(delta) && delta > 0.0 && delta < 1.0,
          "delta must lie in (0, 1)");
}

// Upper bound on sum_{t>=1} t^{-beta}: explicit partial sum plus integral tail.
double zeta_upper_bound(double beta) {
  constexpr int kTerms = 4096;
  double sum = 0.0;
  for (int t = kTerms; t >= 1; --t) sum += std::pow(static_cast<double>(t), -beta);
  const double tail =
      std::pow(static_cast<double>(kTerms), 1.0 - beta) / (beta - 1.0);
  return sum + tail;
}

struct Gaps {
  std::vector<double> delta;  // Delta_i with the best arm's entry included
  double second = 0.0;        // Delta of the runner-up (smallest positive gap)
  int best = 0;
};

Gaps compute_gaps(std::span<const double> means, std::span<const double> uncertainty) {
  require(means.size() >= 2, "complexity needs K >= 2");
  require(uncertainty.size() == means.size(), "uncertainty size must match K");
  int best = 0;
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (means[i] > means[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  const double top = means[static_cast<std::size_t>(best)] -
                     uncertainty[static_cast<std::size_t>(best)];
  Gaps out;
  out.best = best;
  out.delta.resize(means.size());
  out.second = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < means.size(); ++i) {
    out.delta[i] = top - (means[i] + uncertainty[i]);
    if (static_cast<int>(i) != best) {
      if (!(out.delta[i] > 0.0)) {
        throw InfeasibleGapError(fmt_msg(
            "degenerate gap: arm %zu has Delta = %.17g <= 0", i, out.delta[i]));
      }
      out.second = std::min(out.second, out.delta[i]);
    }
  }
  return out;
}

double complexity_from_gaps(const Gaps& gaps, double sigma) {
  double h = 0.0;
  for (double d : gaps.delta) {
    const double denom = std::max(d, gaps.second);
    h += 2.0 * sigma * sigma / (denom * denom);
  }
  return h;
}

}  // namespace

RadiusParams::RadiusParams(double sigma_, double epsilon_, int num_arms_, double delta_,
                           double beta_exp_, double c1_uncertainty_)
    : sigma(sigma_),
      epsilon(epsilon_),
      num_arms(num_arms_),
      delta(delta_),
      beta_exp(beta_exp_),
      c1_uncertainty(c1_uncertainty_) {
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be > 0");
  require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon < 0.5,
          "epsilon must lie in [0, 0.5)");
  require(num_arms >= 2, "radius parameters need K >= 2");
  check_delta(delta);
  require(std::isfinite(beta_exp) && beta_exp > 1.0, "beta_exp must be > 1");
  require(std::isfinite(c1_uncertainty) && c1_uncertainty >= 0.0,
          "c1_uncertainty must be >= 0");
  c_const = 1.0 + 1.0 / (beta_exp - 1.0);
  if (c_const < zeta_upper_bound(beta_exp)) {
    throw std::invalid_argument(
        "c_const fails to dominate the round-union series for this beta_exp");
  }
}

double exploration_floor(double alpha, double delta) {
  require(std::isfinite(alpha) && alpha >= 0.0 && alpha < 0.5,
          "alpha must lie in [0, 0.5)");
  check_delta(delta);
  if (alpha == 0.0) return 0.0;
  return (2.0 / (alpha * alpha)) * std::log(1.0 / delta);
}

double beta_gap_radius(const RadiusParams& params, std::int64_t n_pulls, std::int64_t t) {
  require(n_pulls >= 1, "beta_gap_radius needs n_pulls >= 1");
  require(t >= 1, "beta_gap_radius needs t >= 1");
  const double log_arg = std::log(static_cast<double>(params.num_arms - 1) *
                                  params.c_const / params.delta) +
                         params.beta_exp * std::log(static_cast<double>(t));
  return params.sigma / (1.0 - params.epsilon) *
         std::sqrt(2.0 / static_cast<double>(n_pulls) * log_arg);
}

double gamma_se_radius(const RadiusParams& params, std::int64_t t) {
  require(t >= 1, "gamma_se_radius needs t >= 1");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double log_arg = std::log(static_cast<double>(params.num_arms) * pi2 /
                                  (12.0 * params.delta)) +
                         2.0 * std::log(static_cast<double>(t));
  return params.sigma / (1.0 - params.epsilon) *
         std::sqrt(2.0 / static_cast<double>(t) * log_arg);
}

double empirical_gap_radius(double sigma, double delta, std::int64_t n_pulls,
                            std::int64_t t) {
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be > 0");
  check_delta(delta);
  require(n_pulls >= 1, "empirical_gap_radius needs n_pulls >= 1");
  const double tt = static_cast<double>(std::max<std::int64_t>(t, 3));
  return sigma * std::sqrt(2.0 / static_cast<double>(n_pulls) *
                           std::log(std::log(tt) / delta));
}

double problem_complexity(std::span<const double> means,
                          std::span<const double> uncertainty, double sigma) {
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be > 0");
  return complexity_from_gaps(compute_gaps(means, uncertainty), sigma);
}

LowerBoundReport lower_bound_report(std::span<const double> means, double delta,
                                    double epsilon, double sigma, double c1) {
  require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon < 0.5,
          "epsilon must lie in [0, 0.5)");
  require(std::isfinite(c1) && c1 >= 0.0, "c1 must be >= 0");
  check_delta(delta);
  LowerBoundReport out;
  const std::vector<double> zeros(means.size(), 0.0);
  out.pibai_slope = problem_complexity(means, zeros, sigma);
  out.uncertainty_term =
      epsilon > 0.0 ? c1 * sigma * epsilon * std::sqrt(std::log(1.0 / epsilon)) : 0.0;

  Gaps gaps = compute_gaps(means, zeros);
  double slope = 0.0;
  out.cbai_feasible = true;
  for (double d : gaps.delta) {
    const double denom = std::max(d, gaps.second) - out.uncertainty_term;
    if (!(denom > 0.0)) {
      out.cbai_feasible = false;
      break;
    }
    slope += 2.0 * sigma * sigma / (denom * denom);
  }
  out.cbai_slope = out.cbai_feasible ? slope : std::numeric_limits<double>::infinity();
  const double scale = std::log(1.0 / (2.4 * delta));
  out.pibai_at_delta = out.pibai_slope * scale;
  out.cbai_at_delta = out.cbai_slope * scale;
  return out;
}

SampleBoundReport sample_bound_report(std::span<const double> means, double sigma,
                                      double epsilon, double delta, double beta_exp) {
  require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon < 0.5,
          "epsilon must lie in [0, 0.5)");
  require(std::isfinite(beta_exp) && beta_exp > 1.0, "beta_exp must be > 1");
  check_delta(delta);
  const auto K = static_cast<double>(means.size());
  const std::vector<double> zeros(means.size(), 0.0);
  Gaps gaps = compute_gaps(means, zeros);
  const double h = complexity_from_gaps(gaps, sigma);

  SampleBoundReport out;
  out.epsilon_zero = epsilon == 0.0;
  const double inv_eps2 = out.epsilon_zero
                              ? std::numeric_limits<double>::infinity()
                              : 1.0 / (epsilon * epsilon);
  out.gap_floor_term = 8.0 * K * inv_eps2;
  out.gap_h_term = 64.0 * beta_exp * h;
  out.gap_bound = std::max(out.gap_floor_term, out.gap_h_term);
  out.gap_proof_form = 16.0 * beta_exp * h / ((1.0 - epsilon) * (1.0 - epsilon));
  out.elim_floor_term = out.gap_floor_term * std::log(1.0 / delta);
  out.elim_gap_term = 0.0;
  for (std::size_t i = 0; i < gaps.delta.size(); ++i) {
    if (static_cast<int>(i) == gaps.best) continue;
    const double d = gaps.delta[i];
    out.elim_gap_term += 1.0 / (d * d) * std::log(K / (delta * d));
  }
  out.elim_bound = std::max(out.elim_floor_term, out.elim_gap_term);
  return out;
}

}  // namespace cbai
