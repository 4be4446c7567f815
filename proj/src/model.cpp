#include "rotatest/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rotatest/error.hpp"

namespace rotatest {

ModelValue evaluate_model(const ModelSpec& model, double x, double theta) {
  const double p = model.failure_prob(x, theta);
  const double dp = model.failure_prob_dtheta(x, theta);
  if (!std::isfinite(p) || !std::isfinite(dp)) {
    throw ModelError("model '" + model.name + "' is not finite at x=" + std::to_string(x) +
                     ", theta=" + std::to_string(theta));
  }
  // The clipped function is flat, so its derivative is zero there.
  if (p < kProbClip) return {kProbClip, 0.0};
  if (p > 1.0 - kProbClip) return {1.0 - kProbClip, 0.0};
  return {p, dp};
}

ModelSpec logistic_model() {
  ModelSpec m;
  m.name = "logistic";
  m.theta0 = 1.0;
  m.theta_interval = {-5.0, 5.0};
  m.failure_prob = [](double x, double theta) { return 1.0 / (1.0 + std::exp(theta * x)); };
  m.failure_prob_dtheta = [](double x, double theta) {
    const double p = 1.0 / (1.0 + std::exp(theta * x));
    return -x * p * (1.0 - p);
  };
  return m;
}

ModelSpec exponential_model() {
  ModelSpec m;
  m.name = "exponential";
  m.theta0 = 0.3;
  m.theta_interval = {0.01, 5.0};
  m.failure_prob = [](double x, double theta) { return 0.2 + 0.8 * (1.0 - std::exp(-theta * x)); };
  m.failure_prob_dtheta = [](double x, double theta) { return 0.8 * x * std::exp(-theta * x); };
  return m;
}

namespace {
const double kNormalScale = 1.5 / std::sqrt(2.0 * std::numbers::pi);
}

ModelSpec normal_model() {
  ModelSpec m;
  m.name = "normal";
  m.theta0 = 1.0;
  m.theta_interval = {-2.0, 4.0};
  m.failure_prob = [](double x, double theta) {
    const double d = x - theta;
    return kNormalScale * std::exp(-2.0 * d * d) + 0.2;
  };
  m.failure_prob_dtheta = [](double x, double theta) {
    const double d = x - theta;
    return kNormalScale * std::exp(-2.0 * d * d) * 4.0 * d;
  };
  return m;
}

ModelSpec beta_model() {
  ModelSpec m;
  m.name = "beta";
  m.theta0 = 2.5;
  m.theta_interval = {1.1, 10.0};
  m.failure_prob = [](double x, double theta) {
    return 0.2 + 2.0 * std::sqrt(x / 2.0) * std::pow(1.0 - x / 2.0, theta - 1.0);
  };
  m.failure_prob_dtheta = [](double x, double theta) {
    const double tail = 1.0 - x / 2.0;
    // (1 - x/2)^{theta-1} log(1 - x/2) -> 0 as x -> 2 for theta > 1.
    if (tail <= 0.0) return theta > 1.0 ? 0.0 : std::nan("");
    return 2.0 * std::sqrt(x / 2.0) * std::pow(tail, theta - 1.0) * std::log(tail);
  };
  return m;
}

std::vector<ModelSpec> builtin_models() {
  return {logistic_model(), exponential_model(), normal_model(), beta_model()};
}

std::vector<std::string> builtin_model_names() {
  return {"logistic", "exponential", "normal", "beta"};
}

ModelSpec model_by_name(std::string_view name) {
  for (auto& m : builtin_models()) {
    if (m.name == name) return m;
  }
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "' (expected logistic, exponential, normal or beta)");
}

}  // namespace rotatest
