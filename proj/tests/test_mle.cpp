#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rotatest/error.hpp"
#include "rotatest/mle.hpp"

using namespace rotatest;

namespace {
TrialSample single_trials(std::vector<double> x, std::vector<std::uint8_t> y) {
  TrialSample s;
  s.m = 1;
  s.n = static_cast<int>(x.size());
  s.covariates = std::move(x);
  s.outcomes = std::move(y);
  return s;
}
}  // namespace

TEST_CASE("log-likelihood of single trials") {
  const auto model = logistic_model();
  CHECK(log_likelihood(model, single_trials({0.0}, {0}), 1.0) == doctest::Approx(std::log(0.5)));
  CHECK(log_likelihood(model, single_trials({0.0}, {1}), 1.0) == doctest::Approx(std::log(0.5)));
}

TEST_CASE("log-likelihood of a four-trial sample") {
  const auto s = single_trials({0.5, 1.0, 1.5, 2.0}, {1, 0, 1, 1});
  CHECK(log_likelihood(logistic_model(), s, 1.0) == doctest::Approx(-2.1156799607240546).epsilon(1e-13));
}

TEST_CASE("all failures push the logistic fit to the lower bound") {
  auto rng = make_stream(9);
  auto s = generate_sample(logistic_model(), 1.0, 96, 1, rng);
  std::fill(s.outcomes.begin(), s.outcomes.end(), std::uint8_t{0});
  const auto fit = fit_mle(logistic_model(), s);
  CHECK(fit.theta_hat == logistic_model().theta_interval.lower);
  CHECK(fit.at_boundary);
  CHECK(std::isfinite(fit.loglik));
}

TEST_CASE("fit matches a fine grid search and beats a coarse grid") {
  for (const auto& model : builtin_models()) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      CAPTURE(model.name);
      CAPTURE(seed);
      auto rng = make_stream(seed, {name_key(model.name)});
      const auto s = generate_sample(model, model.theta0, 96, 1, rng);
      const auto fit = fit_mle(model, s);
      CHECK(model.theta_interval.contains(fit.theta_hat));
      CHECK(std::abs(fit.theta_hat - oracle::grid_mle(model, s, 1e-3)) < 2e-3);

      const auto [lo, hi] = model.theta_interval;
      for (int k = 0; k < 1000; ++k) {
        const double theta = lo + (hi - lo) * k / 999.0;
        CHECK(fit.loglik >= log_likelihood(model, s, theta) - 1e-9);
      }
      if (!fit.at_boundary) CHECK(std::abs(score(model, s, fit.theta_hat)) < 1e-4 * s.total_trials());
    }
  }
}

TEST_CASE("iteration cap reports the best point") {
  auto rng = make_stream(4);
  const auto s = generate_sample(logistic_model(), 1.0, 96, 1, rng);
  MleOptions opts;
  opts.max_iterations = 2;
  try {
    fit_mle(logistic_model(), s, opts);
    FAIL("expected EstimationError");
  } catch (const EstimationError& e) {
    CHECK(logistic_model().theta_interval.contains(e.best_theta()));
    CHECK(std::isfinite(e.best_loglik()));
  }
}

TEST_CASE("empty sample is rejected") {
  TrialSample empty;
  CHECK_THROWS_AS(fit_mle(logistic_model(), empty), std::invalid_argument);
}
