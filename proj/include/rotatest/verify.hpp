#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotatest/rotation.hpp"

namespace rotatest {

// Max-abs residuals of the exact identities the rotation must satisfy.
struct InvariantResiduals {
  double orthonormality = 0.0;  // |O_A^T O_A - I|
  double mapping = 0.0;         // |U L B - A|
  double full_mapping = 0.0;    // |U L (B|Z_B) - (A|Z_A)|
  double unitarity = 0.0;       // |U^T D_P U - D_P|
  double constant = 0.0;        // |U (ell .* 1) - 1|
  double centering = 0.0;       // |1^T D_P M|
  double probability_sum = 0.0; // |sum p - 1|

  void absorb(const InvariantResiduals& other);
};

// Residuals of a single bundle.
InvariantResiduals bundle_residuals(const RotationBundle& bundle, const ReferenceBasis& basis);

struct VerifyTolerances {
  double identity = 1e-10;
  double probability_sum = 1e-12;
  double closed_form = 1e-10;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::size_t cases = 1000;
  double theta_spread = 0.2;  // theta drawn from theta0 (1 +- spread)
  ScoreNormalization normalization = ScoreNormalization::Spectral;
  Completion completion = Completion::GramSchmidt;
  VerifyTolerances tol;
};

struct CaseReport {
  std::size_t index = 0;
  std::string model;
  int m = 1;
  std::vector<double> x;
  double theta = 0.0;
  InvariantResiduals residuals;
  bool passed = true;
};

struct VerifyReport {
  InvariantResiduals max_residuals;
  double closed_form_max = 0.0;  // |U_thm (ell b_k) - U_cf (ell b_k)|, k = 0, 1
  std::size_t cases = 0;
  std::size_t skipped = 0;  // singular information (measure-zero draws)
  std::vector<CaseReport> failures;
  std::vector<CaseReport> reports;  // every case, when keep_all is requested
  bool passed = true;
};

// Random (model, m, x, theta) cases over the four built-in models and
// m in {1,2,3}, plus an m = 1 closed-form comparison per case.
VerifyReport run_invariant_suite(const VerifyOptions& opts, bool keep_all = false);

// Largest action difference of the two m = 1 constructions on ell*b0 and
// ell*b1. dp0 must be non-zero.
double closed_form_discrepancy(double p0, double dp0);

}  // namespace rotatest
