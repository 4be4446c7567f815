#include "rotatest/verify.hpp"

#include <algorithm>
#include <cmath>

#include "rotatest/error.hpp"
#include "rotatest/model.hpp"
#include "rotatest/rng.hpp"

namespace rotatest {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

void InvariantResiduals::absorb(const InvariantResiduals& o) {
  orthonormality = std::max(orthonormality, o.orthonormality);
  mapping = std::max(mapping, o.mapping);
  full_mapping = std::max(full_mapping, o.full_mapping);
  unitarity = std::max(unitarity, o.unitarity);
  constant = std::max(constant, o.constant);
  centering = std::max(centering, o.centering);
  probability_sum = std::max(probability_sum, o.probability_sum);
}

InvariantResiduals bundle_residuals(const RotationBundle& b, const ReferenceBasis& basis) {
  InvariantResiduals r;
  const Eigen::Index outcomes = b.p.size();
  const Eigen::VectorXd sqrt_p = b.p.cwiseSqrt();
  const Eigen::MatrixXd O_A = sqrt_p.asDiagonal() * b.A;
  r.orthonormality = max_abs(O_A.transpose() * O_A - Eigen::MatrixXd::Identity(b.A.cols(), b.A.cols()));

  const Eigen::MatrixXd L = b.ell.asDiagonal();
  r.mapping = max_abs(b.U * L * basis.B - b.A);
  const Eigen::MatrixXd BZ = basis.O_Q * std::pow(2.0, 0.5 * basis.m);
  const Eigen::MatrixXd AZ = sqrt_p.cwiseInverse().asDiagonal() * b.O_P;
  r.full_mapping = max_abs(b.U * L * BZ - AZ);

  const Eigen::MatrixXd D = b.p.asDiagonal();
  r.unitarity = max_abs(b.U.transpose() * D * b.U - D);
  r.constant = max_abs(b.U * b.ell - Eigen::VectorXd::Ones(outcomes));
  r.centering = max_abs(Eigen::RowVectorXd::Ones(outcomes) * D * b.M);
  r.probability_sum = std::abs(b.p.sum() - 1.0);
  return r;
}

double closed_form_discrepancy(double p0, double dp0) {
  Eigen::VectorXd p(2), dp(2);
  p << p0, 1.0 - p0;
  dp << dp0, -dp0;
  const Eigen::MatrixXd M = score_matrix(p, dp);
  const Eigen::MatrixXd gamma = information_matrix(M, p);
  const auto basis = build_reference_basis(1);
  const Eigen::MatrixXd U_thm = build_U(p, M, gamma, basis);
  const Eigen::Matrix2d U_cf = build_U_m1_closed_form(p0, dp0);
  const Eigen::MatrixXd LB = likelihood_ratio_weights(p).asDiagonal() * basis.B;
  return max_abs(U_thm * LB - U_cf * LB);
}

VerifyReport run_invariant_suite(const VerifyOptions& opts, bool keep_all) {
  const auto models = builtin_models();
  std::vector<ReferenceBasis> bases;
  for (int m = 1; m <= 3; ++m) bases.push_back(build_reference_basis(m, 1, opts.completion));

  VerifyReport report;
  for (std::size_t c = 0; c < opts.cases; ++c) {
    auto rng = make_stream(opts.seed, {static_cast<std::uint64_t>(c)});
    std::uniform_int_distribution<int> pick_model(0, static_cast<int>(models.size()) - 1);
    std::uniform_int_distribution<int> pick_m(1, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    CaseReport cr;
    cr.index = c;
    const auto& model = models[pick_model(rng)];
    cr.model = model.name;
    cr.m = pick_m(rng);
    cr.x.resize(cr.m);
    for (auto& xi : cr.x) xi = 2.0 * unit(rng);
    cr.theta = model.theta0 * (1.0 + opts.theta_spread * (2.0 * unit(rng) - 1.0));
    cr.theta = std::clamp(cr.theta, model.theta_interval.lower, model.theta_interval.upper);

    // Closed-form comparison on an unrelated (p0, dp0) draw.
    const double p0 = 0.01 + 0.98 * unit(rng);
    const double mag = 0.01 + 5.0 * unit(rng);
    const double dp0 = unit(rng) < 0.5 ? -mag : mag;
    const double cf = closed_form_discrepancy(p0, dp0);
    report.closed_form_max = std::max(report.closed_form_max, cf);

    try {
      const auto& basis = bases[cr.m - 1];
      const auto bundle = build_bundle(model, cr.x, cr.theta, basis, opts.normalization);
      cr.residuals = bundle_residuals(bundle, basis);
    } catch (const SingularInformationError&) {
      ++report.skipped;
      continue;
    }
    ++report.cases;
    const auto& r = cr.residuals;
    const double tol = opts.tol.identity;
    cr.passed = r.orthonormality < tol && r.mapping < tol && r.full_mapping < tol && r.unitarity < tol &&
                r.constant < tol && r.centering < tol && r.probability_sum < opts.tol.probability_sum &&
                cf < opts.tol.closed_form;
    report.max_residuals.absorb(r);
    if (!cr.passed) report.failures.push_back(cr);
    if (keep_all) report.reports.push_back(cr);
  }
  report.passed = report.failures.empty();
  return report;
}

}  // namespace rotatest
