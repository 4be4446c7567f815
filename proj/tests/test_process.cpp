#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "rotatest/error.hpp"
#include "rotatest/process.hpp"

using namespace rotatest;

namespace {
TrialSample two_subgroups() {
  TrialSample s;
  s.m = 1;
  s.n = 2;
  s.covariates = {0.4, 1.2};
  s.outcomes = {0, 1};
  return s;
}

TrialSample draw(const ModelSpec& model, int n, int m, std::uint64_t seed) {
  auto rng = make_stream(seed, {name_key(model.name), std::uint64_t(m)});
  return generate_sample(model, model.theta0, n, m, rng);
}
}  // namespace

TEST_CASE("indicator directions") {
  const auto v = indicator_direction(2, 1);
  CHECK(v[0] == doctest::Approx(0.75));
  CHECK(v[1] == doctest::Approx(-0.25));
  CHECK(indicator_direction(2, 4).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(indicator_direction(3, 5).sum()) < 1e-15);
}

TEST_CASE("hand-computed process values") {
  const auto s = two_subgroups();
  const auto model = logistic_model();
  CHECK(rotated_process_value(s, model, 1.0, 0.5, 1) == doctest::Approx(0.43183108642750434).epsilon(1e-12));
  CHECK(rotated_process_value(s, model, 1.0, 2.0, 1) == doctest::Approx(0.2377968716894194).epsilon(1e-12));
  CHECK(std::abs(rotated_process_value(s, model, 1.0, 2.0, 2)) < 1e-14);
  CHECK(rotated_process_value(s, model, 1.0, 0.3, 1) == 0.0);

  const auto ks = ks_statistic(s, model, 1.0, 4);
  CHECK(ks.ks == doctest::Approx(0.43183108642750434).epsilon(1e-12));
  CHECK(ks.argmax_x0 == doctest::Approx(0.5));
  CHECK(ks.argmax_z0 == 1);
}

TEST_CASE("top indicator and empty region vanish") {
  for (int m = 1; m <= 3; ++m) {
    const auto s = draw(normal_model(), 32, m, 5);
    CHECK(std::abs(rotated_process_value(s, normal_model(), 1.0, 2.0, 1 << m)) < 1e-12);
    double lowest = 2.0;
    for (int j = 0; j < s.n; ++j) lowest = std::min(lowest, s.max_covariate(j));
    CHECK(rotated_process_value(s, normal_model(), 1.0, lowest * 0.5, 1) == 0.0);
  }
}

TEST_CASE("KS statistic equals the brute-force oracle") {
  for (const auto& model : builtin_models()) {
    for (int m = 1; m <= 3; ++m) {
      CAPTURE(model.name);
      CAPTURE(m);
      const auto s = draw(model, 96 / m, m, 11);
      const double fast = ks_statistic(s, model, model.theta0, 50).ks;
      CHECK(std::abs(fast - oracle::naive_ks(s, model, model.theta0, 50)) < 1e-12);
    }
  }
}

TEST_CASE("surface agrees with pointwise evaluation") {
  const auto model = exponential_model();
  const auto s = draw(model, 24, 2, 3);
  const auto rotated = rotate_sample(s, model, 0.3);
  const auto surface = process_surface(rotated, 10);
  REQUIRE(surface.rows() == 10);
  REQUIRE(surface.cols() == 3);
  for (int k = 0; k < 10; ++k)
    for (int z0 = 1; z0 <= 3; ++z0)
      CHECK(std::abs(surface(k, z0 - 1) - rotated_process_value(s, model, 0.3, 2.0 * (k + 1) / 10, z0)) < 1e-12);
  CHECK(surface.cwiseAbs().maxCoeff() == doctest::Approx(ks_statistic(rotated, 10).ks).epsilon(1e-15));
}

TEST_CASE("subgroup order does not matter") {
  const auto model = beta_model();
  const auto s = draw(model, 32, 3, 21);
  std::vector<int> order(s.n);
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());
  std::swap(order[3], order[17]);
  TrialSample t = s;
  for (int j = 0; j < s.n; ++j) {
    for (int i = 0; i < s.m; ++i) {
      t.covariates[j * s.m + i] = s.covariates[order[j] * s.m + i];
      t.outcomes[j * s.m + i] = s.outcomes[order[j] * s.m + i];
    }
  }
  CHECK(std::abs(ks_statistic(s, model, 2.5).ks - ks_statistic(t, model, 2.5).ks) < 1e-12);
}

TEST_CASE("grid maximum never exceeds the supremum over jump points") {
  const auto model = logistic_model();
  const auto s = draw(model, 48, 2, 8);
  const auto rotated = rotate_sample(s, model, 1.0);
  double sup = 0.0;
  for (int j = 0; j < s.n; ++j)
    for (int z0 = 1; z0 <= 3; ++z0)
      sup = std::max(sup, std::abs(rotated_process_value(s, model, 1.0, s.max_covariate(j), z0)));
  const double grid = ks_statistic(rotated, 100).ks;
  CHECK(grid <= sup + 1e-12);
  CHECK(grid > 0.5 * sup);
}

TEST_CASE("rotated contributions are centred under the fitted model") {
  const auto model = normal_model();
  const auto s = draw(model, 16, 2, 4);
  const auto basis = build_reference_basis(2);
  for (int j = 0; j < s.n; ++j) {
    const auto b = build_bundle(model, s.x(j), 1.0, basis);
    for (int z0 = 1; z0 < 4; ++z0) {
      const Eigen::VectorXd w = b.U * b.ell.cwiseProduct(indicator_direction(2, z0));
      CHECK(std::abs(b.p.dot(w)) < 1e-12);
    }
  }
}

TEST_CASE("singular subgroups propagate") {
  TrialSample s;
  s.m = 1;
  s.n = 2;
  s.covariates = {0.0, 1.0};
  s.outcomes = {0, 1};
  CHECK_THROWS_AS(ks_statistic(s, logistic_model(), 1.0), SingularInformationError);
}

TEST_CASE("whole-sample information is the sum over subgroups") {
  const auto model = logistic_model();
  const auto s = draw(model, 10, 1, 2);
  double expected = 0.0;
  for (int j = 0; j < s.n; ++j) expected += oracle::fd_information(model, s.x(j), 1.0);
  CHECK(whole_sample_information(s, model, 1.0)(0, 0) == doctest::Approx(expected).epsilon(1e-6));
}
