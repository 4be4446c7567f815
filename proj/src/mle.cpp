#include "rotatest/mle.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "rotatest/error.hpp"

namespace rotatest {

double log_likelihood(const ModelSpec& model, const TrialSample& sample, double theta) {
  double ll = 0.0;
  for (std::size_t k = 0; k < sample.covariates.size(); ++k) {
    const double p = evaluate_model(model, sample.covariates[k], theta).p0;
    ll += sample.outcomes[k] ? std::log1p(-p) : std::log(p);
  }
  return ll;
}

double score(const ModelSpec& model, const TrialSample& sample, double theta) {
  double s = 0.0;
  for (std::size_t k = 0; k < sample.covariates.size(); ++k) {
    const auto v = evaluate_model(model, sample.covariates[k], theta);
    s += sample.outcomes[k] ? -v.dp0 / (1.0 - v.p0) : v.dp0 / v.p0;
  }
  return s;
}

FitResult fit_mle(const ModelSpec& model, const TrialSample& sample, const MleOptions& opts) {
  if (sample.covariates.empty()) throw std::invalid_argument("fit_mle: empty sample");
  const double lo = model.theta_interval.lower;
  const double hi = model.theta_interval.upper;
  const int points = std::max(opts.scan_points, 3);
  const double step = (hi - lo) / (points - 1);

  int best_k = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) {
    const double theta = k + 1 == points ? hi : lo + k * step;
    const double ll = log_likelihood(model, sample, theta);
    if (ll > best_ll) {
      best_ll = ll;
      best_k = k;
    }
  }
  double best_theta = best_k + 1 == points ? hi : lo + best_k * step;

  const double a = std::max(lo, lo + (best_k - 1) * step);
  const double b = std::min(hi, lo + (best_k + 1) * step);
  auto negative_ll = [&](double theta) { return -log_likelihood(model, sample, theta); };
  std::uintmax_t iterations = static_cast<std::uintmax_t>(opts.max_iterations);
  const auto [theta_brent, neg_ll_brent] = boost::math::tools::brent_find_minima(
      negative_ll, a, b, std::numeric_limits<double>::digits, iterations);
  if (-neg_ll_brent > best_ll) {
    best_ll = -neg_ll_brent;
    best_theta = theta_brent;
  }
  if (iterations >= static_cast<std::uintmax_t>(opts.max_iterations)) {
    throw EstimationError("fit_mle: Brent iteration cap reached", best_theta, best_ll);
  }

  FitResult r;
  r.theta_hat = best_theta;
  r.loglik = best_ll;
  r.converged = true;
  r.at_boundary = best_theta - lo <= opts.boundary_tolerance || hi - best_theta <= opts.boundary_tolerance;
  return r;
}

}  // namespace rotatest
