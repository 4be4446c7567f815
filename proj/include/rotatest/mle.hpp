#pragma once

#include "rotatest/model.hpp"
#include "rotatest/sample.hpp"

namespace rotatest {

struct FitResult {
  double theta_hat = 0.0;
  double loglik = 0.0;
  bool converged = false;
  bool at_boundary = false;
};

// Bernoulli log-likelihood of every trial in the sample, with clipped p.
double log_likelihood(const ModelSpec& model, const TrialSample& sample, double theta);

// d/dtheta of log_likelihood.
double score(const ModelSpec& model, const TrialSample& sample, double theta);

struct MleOptions {
  int scan_points = 48;          // coarse scan used to bracket the global maximum
  int max_iterations = 10000;
  double boundary_tolerance = 1e-6;
};

// Maximises the log-likelihood over model.theta_interval: coarse scan, then
// Brent refinement inside the best bracket, then a comparison against both
// endpoints. Throws EstimationError if Brent exhausts its iteration cap.
FitResult fit_mle(const ModelSpec& model, const TrialSample& sample, const MleOptions& opts = {});

}  // namespace rotatest
