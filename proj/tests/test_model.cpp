#include <doctest.h>

#include <cmath>
#include <random>

#include "rotatest/error.hpp"
#include "rotatest/model.hpp"

using namespace rotatest;

TEST_CASE("built-in models at reference points") {
  CHECK(evaluate_model(logistic_model(), 0.0, 1.0).p0 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(evaluate_model(exponential_model(), 0.0, 0.3).p0 == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(evaluate_model(logistic_model(), 2.0, 1.0).p0 == doctest::Approx(0.11920292202211757).epsilon(1e-14));
  CHECK(evaluate_model(normal_model(), 1.0, 1.0).p0 == doctest::Approx(0.7984134206021491).epsilon(1e-14));
  CHECK(evaluate_model(beta_model(), 0.5, 2.5).p0 == doctest::Approx(0.849519052838329).epsilon(1e-14));
}

TEST_CASE("true parameters and lookup by name") {
  CHECK(model_by_name("logistic").theta0 == 1.0);
  CHECK(model_by_name("exponential").theta0 == 0.3);
  CHECK(model_by_name("normal").theta0 == 1.0);
  CHECK(model_by_name("beta").theta0 == 2.5);
  CHECK_THROWS_AS(model_by_name("weibull"), std::invalid_argument);
  for (const auto& m : builtin_models()) CHECK(m.theta_interval.contains(m.theta0));
}

TEST_CASE("probabilities stay clipped and derivatives match finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& model : builtin_models()) {
    CAPTURE(model.name);
    const auto [lo, hi] = model.theta_interval;
    for (int k = 0; k < 100; ++k) {
      const double x = 2.0 * unit(rng);
      const double theta = lo + (hi - lo) * unit(rng);
      const auto v = evaluate_model(model, x, theta);
      CHECK(v.p0 >= kProbClip);
      CHECK(v.p0 <= 1.0 - kProbClip);
      const double h = 1e-6;
      const double fd =
          (evaluate_model(model, x, theta + h).p0 - evaluate_model(model, x, theta - h).p0) / (2 * h);
      CAPTURE(x);
      CAPTURE(theta);
      CHECK(std::abs(v.dp0 - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("monotone families slope as drawn") {
  const auto logistic = logistic_model();
  const auto expo = exponential_model();
  for (int k = 1; k < 200; ++k) {
    const double x0 = 2.0 * (k - 1) / 200, x1 = 2.0 * k / 200;
    CHECK(evaluate_model(logistic, x1, 1.0).p0 < evaluate_model(logistic, x0, 1.0).p0);
    CHECK(evaluate_model(expo, x1, 0.3).p0 > evaluate_model(expo, x0, 0.3).p0);
  }
  for (double theta : {-5.0, -1.0, 0.5, 1.0, 5.0}) {
    for (int k = 1; k <= 100; ++k) CHECK(evaluate_model(logistic, 2.0 * k / 100, theta).dp0 < 0.0);
  }
  for (double theta : {0.01, 0.3, 5.0}) {
    for (int k = 1; k <= 100; ++k) CHECK(evaluate_model(expo, 2.0 * k / 100, theta).dp0 > 0.0);
  }
}

TEST_CASE("beta model clips near x=2 for small theta and is finite at the edge") {
  const auto beta = beta_model();
  const auto clipped = evaluate_model(beta, 0.4, 1.1);  // raw value above one
  CHECK(clipped.p0 == 1.0 - kProbClip);
  CHECK(clipped.dp0 == 0.0);
  const auto edge = evaluate_model(beta, 2.0, 2.5);
  CHECK(edge.p0 == doctest::Approx(0.2));
  CHECK(edge.dp0 == 0.0);
}

TEST_CASE("non-finite model output is an error") {
  CHECK_THROWS_AS(evaluate_model(beta_model(), 2.0, 0.5), ModelError);
  ModelSpec bad = logistic_model();
  bad.failure_prob = [](double, double) { return std::nan(""); };
  CHECK_THROWS_AS(evaluate_model(bad, 1.0, 1.0), ModelError);
}

TEST_CASE("user-supplied families plug in") {
  ModelSpec probit_like;
  probit_like.name = "linear";
  probit_like.theta_interval = {0.0, 0.4};
  probit_like.failure_prob = [](double x, double t) { return 0.1 + t * x; };
  probit_like.failure_prob_dtheta = [](double x, double) { return x; };
  const auto v = evaluate_model(probit_like, 1.5, 0.2);
  CHECK(v.p0 == doctest::Approx(0.4));
  CHECK(v.dp0 == doctest::Approx(1.5));
}
