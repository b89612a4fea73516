#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cbai/errors.hpp"
#include "cbai/harness.hpp"
#include "doctest.h"
#include "frozen_values.hpp"
#include "support.hpp"

using namespace cbai;

namespace {

bool same_trial(const TrialResult& a, const TrialResult& b) {
  return a.trial == b.trial && a.tau == b.tau && a.recommended == b.recommended &&
         a.correct == b.correct && a.truncated == b.truncated;
}

InstanceSpec single_arm() {
  InstanceSpec spec;
  spec.means = {5.0};
  spec.sigmas = {1.0};
  return spec;
}

}  // namespace

// ------------------------------------------------------------------- trials

TEST_CASE("single-arm trials spend exactly the floor budget") {
  auto config = testsupport::make_experiment(single_arm(), PolicyKind::gcbai, 0.1,
                                             0.1, 5.0);
  auto result = run_trial(config, 0);
  CHECK(result.tau == static_cast<std::int64_t>(std::ceil(frozen::kFloorA05D01)));
  CHECK(result.recommended == 0);
  CHECK(result.correct);
  CHECK_FALSE(result.truncated);

  config = testsupport::make_experiment(single_arm(), PolicyKind::gcbai, 0.0, 0.1,
                                        0.0);
  CHECK(run_trial(config, 0).tau == 1);

  for (PolicyKind kind : {PolicyKind::secbai, PolicyKind::median_se}) {
    config = testsupport::make_experiment(single_arm(), kind, 0.1, 0.1, 5.0);
    CHECK(run_trial(config, 0).tau == 1);
  }
}

TEST_CASE("trial replay is bit-identical") {
  const auto config = testsupport::make_experiment(testsupport::k4_spec(),
                                                   PolicyKind::gcbai, 0.1, 0.1, 5.0);
  const auto a = run_trial(config, 5);
  const auto b = run_trial(config, 5);
  CHECK(same_trial(a, b));
  CHECK(a.tau >= frozen::kStopFloorK4);
  CHECK(a.correct);
  CHECK_FALSE(a.truncated);
}

TEST_CASE("trace sink sees every round") {
  auto config = testsupport::make_experiment(single_arm(), PolicyKind::gcbai, 0.1,
                                             0.1, 5.0);
  std::vector<RoundRecord> rounds;
  const auto result =
      run_trial(config, 0, [&](const RoundRecord& r) { rounds.push_back(r); });
  REQUIRE(static_cast<std::int64_t>(rounds.size()) == result.tau);
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    CHECK(rounds[i].t == static_cast<std::int64_t>(i) + 1);
    CHECK(rounds[i].arm == 0);
  }
  // The corruption flags come from the coin stream: at epsilon = 0.1 roughly a
  // tenth of 1843 rounds, certainly not none and not all.
  int corrupted = 0;
  for (const auto& r : rounds) corrupted += r.corrupted ? 1 : 0;
  CHECK(corrupted > 100);
  CHECK(corrupted < 300);
}

TEST_CASE("truncation is reported, not hidden") {
  auto config = testsupport::make_experiment(testsupport::k4_spec(),
                                             PolicyKind::gcbai, 0.1, 0.1, 5.0);
  config.max_rounds = 100;
  const auto result = run_trial(config, 0);
  CHECK(result.truncated);
  CHECK(result.tau == 100);

  config.n_trials = 3;
  const auto summary = run_experiment(config);
  CHECK(summary.truncated == 3);
}

// ------------------------------------------------------------------ summaries

TEST_CASE("summary statistics match the hand calculation") {
  std::vector<TrialResult> results(3);
  results[0] = {0, 10, 0, true, false, 0.0};
  results[1] = {1, 20, 1, false, false, 0.0};
  results[2] = {2, 30, 0, true, true, 0.0};

  const auto s = summarize(results);
  CHECK(s.n_trials == 3);
  CHECK(s.mean_tau == 20.0);
  CHECK(s.std_tau == 10.0);
  CHECK(s.stderr_tau == doctest::Approx(10.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(s.error_rate == 1.0 / 3.0);
  const double half = 1.96 * std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / 3.0);
  CHECK(s.error_ci_low == 0.0);
  CHECK(s.error_ci_high == doctest::Approx(1.0 / 3.0 + half).epsilon(1e-15));
  CHECK(s.truncated == 1);
  CHECK(s.stderr_defined);
}

TEST_CASE("degenerate summaries") {
  std::vector<TrialResult> one(1);
  one[0] = {0, 42, 0, true, false, 0.0};
  const auto s1 = summarize(one);
  CHECK(s1.mean_tau == 42.0);
  CHECK(s1.std_tau == 0.0);
  CHECK(s1.stderr_tau == 0.0);
  CHECK_FALSE(s1.stderr_defined);
  CHECK(s1.error_rate == 0.0);

  const auto s0 = summarize(std::vector<TrialResult>{});
  CHECK(s0.n_trials == 0);
  CHECK_FALSE(s0.stderr_defined);
}

TEST_CASE("experiment results do not depend on the worker count") {
  auto config = testsupport::make_experiment(testsupport::k4_spec(),
                                             PolicyKind::gcbai, 0.1, 0.1, 5.0);
  config.n_trials = 6;

  std::vector<TrialResult> serial, threaded;
  const auto s1 = run_experiment(config, 1, &serial);
  const auto s3 = run_experiment(config, 3, &threaded);

  REQUIRE(serial.size() == 6);
  REQUIRE(threaded.size() == 6);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(same_trial(serial[i], threaded[i]));
  }
  CHECK(s1.mean_tau == s3.mean_tau);
  CHECK(s1.std_tau == s3.std_tau);
  CHECK(s1.error_rate == s3.error_rate);
}

TEST_CASE("growing the trial budget preserves the prefix") {
  auto config = testsupport::make_experiment(testsupport::k4_spec(),
                                             PolicyKind::gcbai, 0.1, 0.1, 5.0);
  config.n_trials = 4;
  std::vector<TrialResult> small;
  run_experiment(config, 2, &small);

  config.n_trials = 8;
  std::vector<TrialResult> large;
  run_experiment(config, 2, &large);

  REQUIRE(large.size() == 8);
  for (std::size_t i = 0; i < small.size(); ++i) {
    CHECK(same_trial(small[i], large[i]));
  }
}

TEST_CASE("trial budget must be positive") {
  auto config = testsupport::make_experiment(single_arm(), PolicyKind::gcbai, 0.0,
                                             0.1, 0.0);
  config.n_trials = 0;
  CHECK_THROWS_AS(run_experiment(config), ConfigValueError);
}

// -------------------------------------------------------------------- sweeps

TEST_CASE("epsilon sweep re-derives the contamination model per point") {
  // K = 1 makes the stopping time a pure function of the floor: tau is
  // ceil(T(epsilon/2, delta)) and exposes exactly which epsilon was used.
  auto config = testsupport::make_experiment(single_arm(), PolicyKind::gcbai, 0.1,
                                             0.1, 5.0);
  config.n_trials = 3;
  const std::vector<double> grid{0.2, 0.1};  // unsorted on purpose
  const auto rows = sweep(config, ParamAxis::epsilon, grid);

  REQUIRE(rows.size() == 2);
  CHECK(rows[0].param == 0.1);
  CHECK(rows[1].param == 0.2);
  CHECK(rows[0].summary.mean_tau ==
        std::ceil(frozen::kFloorA05D01));  // T(0.05, 0.1)
  CHECK(rows[1].summary.mean_tau ==
        std::ceil(exploration_floor(0.1, 0.1)));  // T(0.10, 0.1)
  CHECK(rows[0].summary.std_tau == 0.0);
  CHECK(rows[0].policy == PolicyKind::gcbai);
}

TEST_CASE("a single-point delta sweep equals the direct experiment") {
  auto config = testsupport::make_experiment(testsupport::k4_spec(),
                                             PolicyKind::gcbai, 0.1, 0.1, 5.0);
  config.n_trials = 3;
  const std::vector<double> grid{0.05};
  const auto rows = sweep(config, ParamAxis::delta, grid);

  config.delta = 0.05;
  const auto direct = run_experiment(config);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].param == 0.05);
  CHECK(rows[0].summary.mean_tau == direct.mean_tau);
  CHECK(rows[0].summary.std_tau == direct.std_tau);
  CHECK(rows[0].summary.error_rate == direct.error_rate);
}

TEST_CASE("empty sweep grids are rejected") {
  const auto config = testsupport::make_experiment(single_arm(), PolicyKind::gcbai,
                                                   0.1, 0.1, 5.0);
  CHECK_THROWS_AS(sweep(config, ParamAxis::delta, std::vector<double>{}),
                  ConfigValueError);
}

// ------------------------------------------------------------- serialization

TEST_CASE("six-significant-digit rendering") {
  CHECK(format_sig6(1842.0680743952364) == "1842.07");
  CHECK(format_sig6(0.1) == "0.1");
  CHECK(format_sig6(461.0) == "461");
  CHECK(format_sig6(1234567.0) == "1.23457e+06");
  CHECK(format_sig6(0.0) == "0");
}

TEST_CASE("sweep CSV is byte-exact") {
  SweepRow row;
  row.param = 0.05;
  row.policy = PolicyKind::gcbai;
  row.summary.mean_tau = 1234.5;
  row.summary.std_tau = 10.25;
  row.summary.stderr_tau = 2.5;
  row.summary.error_rate = 0.015625;
  row.summary.n_trials = 64;
  row.summary.truncated = 1;

  std::ostringstream out;
  const std::vector<std::string> comments{"delta sweep", "seed 1"};
  write_sweep_csv(out, std::vector<SweepRow>{row}, comments);
  CHECK(out.str() ==
        "# delta sweep\n"
        "# seed 1\n"
        "param,policy,mean_tau,std_tau,stderr_tau,error_rate,n_trials,truncated\n"
        "0.05,gcbai,1234.5,10.25,2.5,0.015625,64,1\n");
}

TEST_CASE("sweep CSV does not depend on the worker count") {
  auto config = testsupport::make_experiment(testsupport::k4_spec(),
                                             PolicyKind::gcbai, 0.1, 0.1, 5.0);
  config.n_trials = 3;
  const std::vector<double> grid{0.1, 0.05};
  const std::vector<std::string> no_comments;

  std::string rendered[3];
  int i = 0;
  for (int threads : {1, 2, 4}) {
    const auto rows = sweep(config, ParamAxis::delta, grid, threads);
    std::ostringstream out;
    write_sweep_csv(out, rows, no_comments);
    rendered[i++] = out.str();
  }
  CHECK(rendered[0] == rendered[1]);
  CHECK(rendered[0] == rendered[2]);
}

TEST_CASE("trial JSONL is byte-exact") {
  std::vector<TrialResult> results(2);
  results[0] = {0, 7369, 0, true, false, 0.25};
  results[1] = {1, 10000000, 2, false, true, 0.5};

  std::ostringstream out;
  write_trial_jsonl(out, results);
  CHECK(out.str() ==
        "{\"trial\":0,\"tau\":7369,\"recommended\":0,\"correct\":true,"
        "\"truncated\":false}\n"
        "{\"trial\":1,\"tau\":10000000,\"recommended\":2,\"correct\":false,"
        "\"truncated\":true}\n");
}

TEST_CASE("policy and axis names") {
  CHECK(to_string(PolicyKind::gcbai) == "gcbai");
  CHECK(to_string(PolicyKind::secbai) == "secbai");
  CHECK(to_string(PolicyKind::median_se) == "median_se");
  CHECK(to_string(PolicyKind::random_gap) == "random_gap");
  CHECK(to_string(ParamAxis::delta) == "delta");
  CHECK(to_string(ParamAxis::epsilon) == "epsilon");
}

// ----------------------------------------------------------- instance builds

TEST_CASE("instance defaults per family") {
  InstanceSpec exponential;
  exponential.kind = DistKind::exponential;
  exponential.means = {2.0, 5.0};
  CHECK(build_instance(exponential).sigma_proxy() == 5.0);

  InstanceSpec bernoulli;
  bernoulli.kind = DistKind::bernoulli;
  bernoulli.means = {0.9, 0.2};
  CHECK(build_instance(bernoulli).sigma_proxy() == 0.5);

  InstanceSpec gaussian;
  gaussian.means = {1.0, 0.0};
  gaussian.sigmas = {1.0, 3.0};
  CHECK(build_instance(gaussian).sigma_proxy() == 3.0);

  InstanceSpec lognormal;
  lognormal.kind = DistKind::lognormal;
  lognormal.mu_log = {1.0, 0.0};
  lognormal.sigma_log = {1.0, 1.0};
  CHECK_THROWS_AS(build_instance(lognormal), ConfigValueError);
  lognormal.sigma_proxy = 2.0;
  CHECK(build_instance(lognormal).sigma_proxy() == 2.0);
}

TEST_CASE("instance validation") {
  InstanceSpec missing;
  CHECK_THROWS_AS(build_instance(missing), ConfigValueError);

  InstanceSpec mismatched;
  mismatched.means = {1.0, 2.0, 3.0};
  mismatched.sigmas = {1.0, 2.0};
  CHECK_THROWS_AS(build_instance(mismatched), ConfigValueError);

  InstanceSpec lognormal;
  lognormal.kind = DistKind::lognormal;
  lognormal.mu_log = {1.0, 0.0};
  lognormal.sigma_log = {1.0};
  CHECK_THROWS_AS(build_instance(lognormal), ConfigValueError);
}

TEST_CASE("default trim parameter is half the assumed contamination") {
  auto config = testsupport::make_experiment(testsupport::k4_spec(),
                                             PolicyKind::gcbai, 0.1, 0.1, 5.0);
  CHECK(resolved_alpha(config) == 0.05);
  config.alpha_override = 0.25;
  CHECK(resolved_alpha(config) == 0.25);

  ExperimentConfig clean;
  CHECK(resolved_alpha(clean) == 0.0);
}

// ---------------------------------------------------------------- ingestion

TEST_CASE("ratings ingestion averages per item in first-appearance order") {
  std::istringstream in(
      "item,rating\n"
      "A,2\r\n"
      "# midway comment\n"
      "A,3\n"
      "B,1\n"
      "\n"
      "A,3\n");
  const auto spec = ingest_ratings(in, 2.0);
  CHECK(spec.kind == DistKind::gaussian);
  REQUIRE(spec.means.size() == 2);
  CHECK(spec.means[0] == frozen::kRatingsMeanA);
  CHECK(spec.means[1] == frozen::kRatingsMeanB);
  REQUIRE(spec.sigmas.size() == 1);
  CHECK(spec.sigmas[0] == 2.0);
  CHECK(build_instance(spec).sigma_proxy() == 2.0);
  CHECK(build_instance(spec).best_arm() == 0);
}

TEST_CASE("ratings ingestion rejects unusable rows") {
  std::istringstream missing("A,2\nB,\n");
  CHECK_THROWS_AS(ingest_ratings(missing, 1.0), ConfigValueError);

  std::istringstream verbal("A,2\nB,great\n");
  CHECK_THROWS_AS(ingest_ratings(verbal, 1.0), ConfigValueError);

  std::istringstream lonely("A,2\nA,3\n");
  CHECK_THROWS_AS(ingest_ratings(lonely, 1.0), ConfigValueError);

  std::istringstream nameless(",3\nB,1\n");
  CHECK_THROWS_AS(ingest_ratings(nameless, 1.0), ConfigValueError);

  std::istringstream good("A,2\nB,1\n");
  CHECK_THROWS_AS(ingest_ratings(good, 0.0), ConfigValueError);
}

TEST_CASE("inhibition ingestion normalizes to log control") {
  std::istringstream in(
      "compound,percent\n"
      "c1,0\n"
      "c2,40\n"
      "c3,100\n"
      "c2,60\n");
  const auto spec = ingest_pkis2(in, 1.0);
  CHECK(spec.kind == DistKind::gaussian);
  REQUIRE(spec.means.size() == 3);
  CHECK(spec.means[0] == 0.0);                  // control 1 at the minimum
  CHECK(spec.means[1] == frozen::kPkis2Mid);    // duplicates average to 50
  CHECK(spec.means[2] == frozen::kPkis2Clip);   // control clipped at 1e-6
  CHECK(build_instance(spec).best_arm() == 0);
}

TEST_CASE("inhibition ingestion rejects a zero range") {
  std::istringstream flat("a,5\nb,5\n");
  CHECK_THROWS_AS(ingest_pkis2(flat, 1.0), ConfigValueError);

  std::istringstream lonely("a,5\n");
  CHECK_THROWS_AS(ingest_pkis2(lonely, 1.0), ConfigValueError);
}
