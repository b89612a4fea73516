#pragma once

#include <cstdint>
#include <span>

namespace cbai {

// Shared inputs for the confidence radii. c_const is derived from beta_exp
// and verified at construction to dominate sum_{t>=1} t^{-beta_exp}.
struct RadiusParams {
  double sigma = 1.0;
  double epsilon = 0.0;
  int num_arms = 2;
  double delta = 0.1;
  double beta_exp = 2.0;
  double c_const = 2.0;
  double c1_uncertainty = 1.0;

  RadiusParams() = default;
  RadiusParams(double sigma, double epsilon, int num_arms, double delta,
               double beta_exp = 2.0, double c1_uncertainty = 1.0);
};

// Minimum per-arm pull budget (2/alpha^2) * ln(1/delta); zero when alpha = 0.
double exploration_floor(double alpha, double delta);

// Gap-policy radius: sigma/(1-eps) * sqrt((2/n) * ln((K-1) * C * t^beta / delta)).
double beta_gap_radius(const RadiusParams& params, std::int64_t n_pulls, std::int64_t t);

// Elimination-policy radius: sigma/(1-eps) * sqrt((2/t) * ln(K t^2 pi^2 / (12 delta))).
double gamma_se_radius(const RadiusParams& params, std::int64_t t);

// Tightened data-driven radius: sigma * sqrt((2/n) * ln(ln(max(t,3)) / delta)).
double empirical_gap_radius(double sigma, double delta, std::int64_t n_pulls,
                            std::int64_t t);

// H = sum_i (sqrt(2) * sigma / max{Delta_i, Delta_second})^2 over all arms,
// with Delta_i = (mu_best - U_best) - (mu_i + U_i). Throws when separation
// fails (some Delta_i <= 0 for i != best).
double problem_complexity(std::span<const double> means, std::span<const double> uncertainty,
                          double sigma);

struct LowerBoundReport {
  double pibai_slope = 0.0;      // H: slope for tau >= H * ln(1/(2.4 delta))
  double cbai_slope = 0.0;       // same form with contamination-widened gaps
  double uncertainty_term = 0.0; // c1 * sigma * eps * sqrt(ln(1/eps))
  bool cbai_feasible = true;     // false when the widened gaps collapse
  double pibai_at_delta = 0.0;   // slope * ln(1/(2.4 delta))
  double cbai_at_delta = 0.0;
};

LowerBoundReport lower_bound_report(std::span<const double> means, double delta,
                                    double epsilon, double sigma, double c1);

struct SampleBoundReport {
  double gap_floor_term = 0.0;   // 8K / eps^2
  double gap_h_term = 0.0;       // 64 * beta * H
  double gap_bound = 0.0;        // max of the two
  double gap_proof_form = 0.0;   // 16 * beta * H / (1-eps)^2
  double elim_floor_term = 0.0;  // (8K / eps^2) * ln(1/delta)
  double elim_gap_term = 0.0;    // sum_{i != best} (1/Delta_i^2) * ln(K/(delta Delta_i))
  double elim_bound = 0.0;       // max of the two (constant factor unspecified)
  bool epsilon_zero = false;     // floor terms diverge; only meaningful for eps > 0
};

SampleBoundReport sample_bound_report(std::span<const double> means, double sigma,
                                      double epsilon, double delta, double beta_exp);

}  // namespace cbai
