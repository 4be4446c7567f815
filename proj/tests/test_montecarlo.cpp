#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "rotatest/error.hpp"
#include "rotatest/io.hpp"
#include "rotatest/mle.hpp"
#include "rotatest/montecarlo.hpp"
#include "rotatest/permtest.hpp"
#include "rotatest/process.hpp"

using namespace rotatest;

namespace {
ExperimentConfig small_config() {
  ExperimentConfig c;
  c.replications = 40;
  c.grid_points = 20;
  c.master_seed = 77;
  c.jobs = 1;
  return c;
}
}  // namespace

TEST_CASE("one replication is generate, fit, rotate, KS") {
  auto c = small_config();
  c.replications = 1;
  const auto edf = run_cell(c, "exponential", 2);
  REQUIRE(edf.values.size() == 1);

  auto rng = replication_stream(77, "exponential", 2, 0, 0);
  const auto model = exponential_model();
  const auto s = generate_sample(model, model.theta0, 48, 2, rng);
  const auto fit = fit_mle(model, s);
  CHECK(edf.values[0] == ks_statistic(s, model, fit.theta_hat, 20).ks);
  CHECK(edf.fitted == "exponential");
  CHECK(edf.boundary_count == (fit.at_boundary ? 1u : 0u));
}

TEST_CASE("experiment 2 fits the logistic family to the same data") {
  auto c = small_config();
  c.replications = 1;
  c.experiment = ExperimentKind::LogisticFit;
  const auto edf = run_cell(c, "normal", 1);
  auto rng = replication_stream(77, "normal", 1, 0, 0);
  const auto s = generate_sample(normal_model(), 1.0, 96, 1, rng);
  const auto fit = fit_mle(logistic_model(), s);
  CHECK(edf.fitted == "logistic");
  CHECK(edf.values[0] == ks_statistic(s, logistic_model(), fit.theta_hat, 20).ks);
}

TEST_CASE("results do not depend on the worker count") {
  auto c = small_config();
  c.m_values = {1, 3};
  c.generators = {"logistic", "beta"};
  const auto serial = run_experiment(c);
  c.jobs = 3;
  const auto threaded = run_experiment(c);
  REQUIRE(serial.size() == 4);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].values == threaded[i].values);
    CHECK(std::is_sorted(serial[i].values.begin(), serial[i].values.end()));
  }
  CHECK(serial[0].generator == "logistic");
  CHECK(serial[1].m == 3);
  CHECK(serial[2].generator == "beta");
}

TEST_CASE("EDF evaluation") {
  EDFSample e;
  e.values = {0.1, 0.2, 0.2, 0.5};
  CHECK(edf_evaluate(e, 0.05) == 0.0);
  CHECK(edf_evaluate(e, 0.2) == 0.75);
  CHECK(edf_evaluate(e, 0.3) == 0.75);
  CHECK(edf_evaluate(e, 0.5) == 1.0);
  CHECK(edf_evaluate(EDFSample{}, 1.0) == 0.0);
}

TEST_CASE("configuration errors") {
  auto c = small_config();
  c.total_trials = 100;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = small_config();
  c.m_values = {4};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = small_config();
  c.generators = {"gamma"};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = small_config();
  c.generators = {"normal", "normal"};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = small_config();
  c.replications = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  CHECK_NOTHROW(validate(small_config()));
}

TEST_CASE("exhausted attempts raise a replication failure") {
  auto c = small_config();
  c.max_attempts_per_replication = 0;
  try {
    run_cell(c, "logistic", 1);
    FAIL("expected ReplicationFailureError");
  } catch (const ReplicationFailureError& e) {
    CHECK(e.replications() == 40);
  }
}

TEST_CASE("EDF files round-trip") {
  auto c = small_config();
  const auto edf = run_cell(c, "normal", 3);
  std::stringstream ss;
  write_edf_csv(ss, edf, {{"seed", "77"}});
  const auto back = read_edf_csv(ss);
  CHECK(back.values == edf.values);
  CHECK(back.generator == "normal");
  CHECK(back.fitted == "normal");
  CHECK(back.m == 3);
  CHECK(back.boundary_count == edf.boundary_count);
}

TEST_CASE("null EDF is stable in the sample size") {
  ExperimentConfig c;
  c.m_values = {1};
  c.generators = {"logistic"};
  c.replications = 5000;
  c.master_seed = 96;
  const auto small = run_cell(c, "logistic", 1);
  c.total_trials = 192;
  const auto large = run_cell(c, "logistic", 1);
  CHECK(two_sample_ks_distance(small, large) < 0.05);
}
