#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <set>
#include <sstream>

#include "rotatest/rotation.hpp"
#include "rotatest/sample.hpp"

using namespace rotatest;

namespace {
ModelSpec constant_model(double p) {
  ModelSpec m;
  m.name = "constant";
  m.theta_interval = {0.0, 1.0};
  m.failure_prob = [p](double, double) { return p; };
  m.failure_prob_dtheta = [](double, double) { return 0.0; };
  return m;
}
}  // namespace

TEST_CASE("lexicographic codes") {
  const std::vector<std::uint8_t> a{0, 0, 0}, b{1, 1, 1}, c{0, 1, 0};
  CHECK(encode_lex(a) == 1);
  CHECK(encode_lex(b) == 8);
  CHECK(encode_lex(c) == 3);
  const std::vector<std::uint8_t> fail{0}, succ{1};
  CHECK(encode_lex(fail) == 1);
  CHECK(encode_lex(succ) == 2);
}

TEST_CASE("encode_lex is a bijection onto 1..2^m") {
  for (int m = 1; m <= 3; ++m) {
    std::set<int> codes;
    for (int z = 1; z <= (1 << m); ++z) {
      const auto y = decode_lex(z, m);
      CHECK(encode_lex(y) == z);
      codes.insert(encode_lex(y));
    }
    CHECK(codes.size() == std::size_t(1) << m);
    CHECK(*codes.begin() == 1);
    CHECK(*codes.rbegin() == (1 << m));
  }
}

TEST_CASE("degenerate failure probabilities") {
  auto rng = make_stream(5);
  const auto always = generate_sample(constant_model(1.0), 0.5, 40, 3, rng);
  for (auto y : always.outcomes) CHECK(y == 0);
  const auto never = generate_sample(constant_model(0.0), 0.5, 40, 3, rng);
  for (auto y : never.outcomes) CHECK(y == 1);
}

TEST_CASE("sample shape and ranges") {
  auto rng = make_stream(1);
  const auto s = generate_sample(logistic_model(), 1.0, 32, 3, rng);
  CHECK(s.n * s.m == 96);
  CHECK(s.covariates.size() == 96);
  for (double x : s.covariates) {
    CHECK(x >= 0.0);
    CHECK(x <= 2.0);
  }
  for (auto y : s.outcomes) CHECK(y <= 1);
  CHECK_THROWS(generate_sample(logistic_model(), 1.0, 0, 1, rng));
  CHECK_THROWS(generate_sample(logistic_model(), 1.0, 10, 4, rng));
}

TEST_CASE("failure rate near x=0 under the logistic model") {
  auto rng = make_stream(2024);
  const auto s = generate_sample(logistic_model(), 1.0, 1000000, 1, rng);
  int in_band = 0, failures = 0;
  for (int j = 0; j < s.n; ++j) {
    if (s.x(j)[0] <= 0.02) {
      ++in_band;
      failures += s.y(j)[0] == 0;
    }
  }
  REQUIRE(in_band > 1000);
  CHECK(double(failures) / in_band == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("outcome codes follow the product probabilities") {
  for (int m = 2; m <= 3; ++m) {
    auto rng = make_stream(77, {std::uint64_t(m)});
    const auto s = generate_sample(exponential_model(), 0.3, 20000, m, rng);
    const int outcomes = 1 << m;
    std::vector<double> expected(outcomes, 0.0), observed(outcomes, 0.0);
    for (int j = 0; j < s.n; ++j) {
      const auto g = group_probabilities(exponential_model(), s.x(j), 0.3);
      for (int z = 0; z < outcomes; ++z) expected[z] += g.p[z];
      observed[s.z(j) - 1] += 1.0;
    }
    double chi2 = 0.0;
    for (int z = 0; z < outcomes; ++z) chi2 += (observed[z] - expected[z]) * (observed[z] - expected[z]) / expected[z];
    const boost::math::chi_squared dist(outcomes - 1);
    CAPTURE(m);
    CHECK(chi2 < boost::math::quantile(dist, 0.999));
  }
}

TEST_CASE("sample CSV") {
  auto rng = make_stream(3);
  const auto s = generate_sample(logistic_model(), 1.0, 2, 2, rng);
  std::ostringstream os;
  write_sample_csv(os, s);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "subgroup,trial,covariate,outcome");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 4);
}
