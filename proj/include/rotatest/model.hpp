#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace rotatest {

// Probabilities are clipped into [kProbClip, 1 - kProbClip].
inline constexpr double kProbClip = 1e-10;

struct ThetaInterval {
  double lower;
  double upper;
  bool contains(double theta) const { return theta >= lower && theta <= upper; }
  double width() const { return upper - lower; }
};

// A scalar-parameter family for the FAILURE probability p_{x,theta}(0) of a
// single Bernoulli trial with covariate x. Success (y = 1) has probability
// 1 - p. Any (p, dp/dtheta) pair can be plugged in.
struct ModelSpec {
  std::string name;
  int K = 1;
  double theta0 = 0.0;
  ThetaInterval theta_interval{0.0, 1.0};
  std::function<double(double x, double theta)> failure_prob;
  std::function<double(double x, double theta)> failure_prob_dtheta;
};

struct ModelValue {
  double p0;   // clipped failure probability
  double dp0;  // d p0 / d theta; zero where clipping is active
};

// Throws ModelError if the family returns a non-finite value.
ModelValue evaluate_model(const ModelSpec& model, double x, double theta);

// The four built-in generators, in table order.
ModelSpec logistic_model();     // 1 / (1 + e^{theta x}),               theta0 = 1
ModelSpec exponential_model();  // 0.2 + 0.8 (1 - e^{-theta x}),        theta0 = 0.3
ModelSpec normal_model();       // 1.5/sqrt(2 pi) e^{-2(x-theta)^2}+0.2, theta0 = 1
ModelSpec beta_model();         // 0.2 + 2 (x/2)^0.5 (1 - x/2)^{theta-1}, theta0 = 2.5

std::vector<ModelSpec> builtin_models();
std::vector<std::string> builtin_model_names();

// Throws std::invalid_argument for unknown names.
ModelSpec model_by_name(std::string_view name);

}  // namespace rotatest
