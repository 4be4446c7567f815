#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rotatest/model.hpp"
#include "rotatest/rotation.hpp"
#include "rotatest/sample.hpp"

namespace rotatest {

struct KSResult {
  double ks = 0.0;
  double argmax_x0 = 0.0;
  int argmax_z0 = 1;
};

// v_{z0}(z) = 1{z <= z0} - 2^{-m} z0, for z = 1..2^m.
Eigen::VectorXd indicator_direction(int m, int z0);

// A sample after rotation: for every subgroup j and every z0 in 1..2^m-1,
//   c_j(z0) = w_j(z_j) - sum_z p_z w_j(z),   w_j = U_j (ell_j .* v_{z0}).
// A subgroup enters the indicator {X_j <= x0} when all of its covariates do,
// i.e. when max_covariate[j] <= x0.
struct RotatedSample {
  int m = 1;
  int n = 0;
  std::vector<double> max_covariate;
  Eigen::MatrixXd contribution;  // n x (2^m - 1)
};

// Builds one rotation bundle per subgroup at theta_hat. Propagates
// SingularInformationError and IdentifiabilityError.
RotatedSample rotate_sample(const TrialSample& sample, const ModelSpec& model, double theta_hat);
RotatedSample rotate_sample(const TrialSample& sample, const ModelSpec& model, double theta_hat,
                            const ReferenceBasis& basis);

// The rotated empirical process at one indicator function, evaluated from
// scratch (a bundle per subgroup, no caching). z0 ranges over 1..2^m.
double rotated_process_value(const TrialSample& sample, const ModelSpec& model, double theta_hat, double x0,
                             int z0);

// max |process| over x0 in {2k/grid_points} and z0 in 1..2^m-1. Ties keep
// the first maximiser in (x0, z0) order.
KSResult ks_statistic(const RotatedSample& rotated, int grid_points = 100);
KSResult ks_statistic(const TrialSample& sample, const ModelSpec& model, double theta_hat, int grid_points = 100);

// The full process surface: row k is x0 = 2(k+1)/grid_points, column z0-1.
Eigen::MatrixXd process_surface(const RotatedSample& rotated, int grid_points = 100);

// Sum of per-subgroup information matrices, reported for diagnostics only.
Eigen::MatrixXd whole_sample_information(const TrialSample& sample, const ModelSpec& model, double theta);

}  // namespace rotatest
