#include "rotatest/rotation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rotatest/error.hpp"

namespace rotatest {

GroupProbabilities group_probabilities(const ModelSpec& model, std::span<const double> x, double theta) {
  const int m = static_cast<int>(x.size());
  if (m < 1 || m > 16) throw std::invalid_argument("group_probabilities: bad group size");
  const int outcomes = 1 << m;

  std::vector<ModelValue> trial(m);
  for (int i = 0; i < m; ++i) trial[i] = evaluate_model(model, x[i], theta);

  GroupProbabilities g;
  g.p.resize(outcomes);
  g.dp.resize(outcomes);
  for (int z = 0; z < outcomes; ++z) {
    // Factor for trial i is p_i on failure (bit 0) and 1 - p_i on success;
    // trial 1 is the most significant bit.
    double prod = 1.0;
    for (int i = 0; i < m; ++i) {
      const bool success = (z >> (m - 1 - i)) & 1;
      prod *= success ? 1.0 - trial[i].p0 : trial[i].p0;
    }
    double deriv = 0.0;
    for (int i = 0; i < m; ++i) {
      double term = 1.0;
      for (int k = 0; k < m; ++k) {
        const bool success = (z >> (m - 1 - k)) & 1;
        if (k == i) {
          term *= success ? -trial[k].dp0 : trial[k].dp0;
        } else {
          term *= success ? 1.0 - trial[k].p0 : trial[k].p0;
        }
      }
      deriv += term;
    }
    g.p[z] = prod;
    g.dp[z] = deriv;
  }
  g.degenerate = g.p.maxCoeff() > 1.0 - 1e-9;
  return g;
}

Eigen::MatrixXd score_matrix(const Eigen::VectorXd& p, const Eigen::MatrixXd& dp) {
  if (dp.rows() != p.size()) throw std::invalid_argument("score_matrix: dimension mismatch");
  return p.cwiseInverse().asDiagonal() * dp;
}

Eigen::MatrixXd information_matrix(const Eigen::MatrixXd& M, const Eigen::VectorXd& p) {
  if (M.rows() != p.size()) throw std::invalid_argument("information_matrix: dimension mismatch");
  if (M.cols() + 1 > p.size()) {
    throw IdentifiabilityError("information_matrix: " + std::to_string(M.cols()) +
                               " parameters cannot be identified from " + std::to_string(p.size()) +
                               " outcomes");
  }
  Eigen::MatrixXd gamma = M.transpose() * p.asDiagonal() * M;
  gamma = 0.5 * (gamma + gamma.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (!(min_eig > kInformationFloor)) {
    throw SingularInformationError("information matrix is singular (min eigenvalue " + std::to_string(min_eig) +
                                   ")");
  }
  return gamma;
}

Eigen::MatrixXd inverse_sqrt_spd(const Eigen::MatrixXd& gamma) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (!(lambda.minCoeff() > kInformationFloor)) {
    throw SingularInformationError("inverse_sqrt_spd: matrix is not positive definite");
  }
  const Eigen::MatrixXd& V = eig.eigenvectors();
  return V * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
}

Eigen::MatrixXd complete_orthonormal(const Eigen::MatrixXd& Q, Completion method, double tol) {
  const Eigen::Index r = Q.rows();
  if (Q.cols() > r) throw std::invalid_argument("complete_orthonormal: more columns than rows");
  if (method == Completion::Householder) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(Q);
    Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(r, r);
    // The leading Householder columns equal Q up to sign; keep Q itself.
    full.leftCols(Q.cols()) = Q;
    return full;
  }
  Eigen::MatrixXd out(r, r);
  out.leftCols(Q.cols()) = Q;
  Eigen::Index filled = Q.cols();
  for (Eigen::Index i = 0; i < r && filled < r; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(r, i);
    for (int pass = 0; pass < 2; ++pass) {
      const auto basis = out.leftCols(filled);
      v -= basis * (basis.transpose() * v);
    }
    const double norm = v.norm();
    if (norm < tol) continue;
    out.col(filled++) = v / norm;
  }
  if (filled < r) throw std::runtime_error("complete_orthonormal: could not span the space");
  return out;
}

Eigen::VectorXd likelihood_ratio_weights(const Eigen::VectorXd& p) {
  const double q = 1.0 / static_cast<double>(p.size());
  return (q * p.cwiseInverse()).cwiseSqrt();
}

Eigen::VectorXd reference_b1(int m) {
  switch (m) {
    case 1:
      return (Eigen::VectorXd(2) << -1.0, 1.0).finished();
    case 2:
      return std::sqrt(2.0) * (Eigen::VectorXd(4) << -1.0, 0.0, 0.0, 1.0).finished();
    case 3:
      return (Eigen::VectorXd(8) << -3.0, -1.0, -1.0, 1.0, -1.0, 1.0, 1.0, 3.0).finished() / std::sqrt(3.0);
    default:
      throw std::invalid_argument("reference_b1: group size must be 1, 2 or 3");
  }
}

ReferenceBasis build_reference_basis(int m, int K, Completion completion) {
  const Eigen::Index outcomes = Eigen::Index{1} << m;
  const Eigen::VectorXd b1 = reference_b1(m);
  if (K < 1 || K + 1 > outcomes) {
    throw IdentifiabilityError("build_reference_basis: K+1 must not exceed 2^m");
  }
  const double scale = std::pow(2.0, -0.5 * m);  // D_Q^{1/2}
  Eigen::MatrixXd head(outcomes, 2);
  head.col(0).setConstant(scale);
  head.col(1) = scale * b1;

  ReferenceBasis basis;
  basis.m = m;
  basis.K = K;
  basis.completion = completion;
  basis.O_Q = complete_orthonormal(head, completion);
  basis.B = basis.O_Q.leftCols(K + 1) / scale;
  return basis;
}

Rotation build_rotation(const Eigen::VectorXd& p, const Eigen::MatrixXd& M, const Eigen::MatrixXd& gamma,
                        const ReferenceBasis& basis, ScoreNormalization norm) {
  const Eigen::Index outcomes = p.size();
  const Eigen::Index K = M.cols();
  if (K + 1 > outcomes) {
    throw IdentifiabilityError("build_U: " + std::to_string(K) + " parameters cannot be identified from " +
                               std::to_string(outcomes) + " outcomes");
  }
  if (basis.O_Q.rows() != outcomes || basis.K != K) {
    throw std::invalid_argument("build_U: reference basis does not match the subgroup");
  }
  Rotation r;
  r.A.resize(outcomes, K + 1);
  r.A.col(0).setOnes();
  if (norm == ScoreNormalization::Spectral) {
    r.A.rightCols(K) = M * inverse_sqrt_spd(gamma);
  } else {
    r.A.rightCols(K) = M;
  }
  const Eigen::VectorXd sqrt_p = p.cwiseSqrt();
  r.O_P = complete_orthonormal(sqrt_p.asDiagonal() * r.A, basis.completion);
  r.U = sqrt_p.cwiseInverse().asDiagonal() * r.O_P * basis.O_Q.transpose() * sqrt_p.asDiagonal();
  return r;
}

Eigen::MatrixXd build_U(const Eigen::VectorXd& p, const Eigen::MatrixXd& M, const Eigen::MatrixXd& gamma,
                        const ReferenceBasis& basis) {
  return build_rotation(p, M, gamma, basis).U;
}

Eigen::Matrix2d build_U_m1_closed_form(double p0, double dp0) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw std::invalid_argument("build_U_m1_closed_form: p0 must lie in (0,1)");
  const double p1 = 1.0 - p0;
  const double s = dp0 >= 0.0 ? 1.0 : -1.0;  // upper branch for dp0 > 0
  const double r10 = std::sqrt(p1 / p0);
  const double r01 = std::sqrt(p0 / p1);
  const double sp0 = std::sqrt(p0);
  const double sp1 = std::sqrt(p1);
  Eigen::Matrix2d U;
  U << sp0 * (1.0 - s * r10), sp1 * (1.0 + s * r10),
       sp0 * (1.0 + s * r01), sp1 * (1.0 - s * r01);
  return U / std::sqrt(2.0);
}

RotationBundle build_bundle(const ModelSpec& model, std::span<const double> x, double theta,
                            const ReferenceBasis& basis, ScoreNormalization norm) {
  const auto g = group_probabilities(model, x, theta);
  RotationBundle b;
  b.m = static_cast<int>(x.size());
  b.K = 1;
  b.p = g.p;
  b.M = score_matrix(g.p, g.dp);
  b.Gamma = information_matrix(b.M, b.p);
  b.ell = likelihood_ratio_weights(b.p);
  auto rot = build_rotation(b.p, b.M, b.Gamma, basis, norm);
  b.A = std::move(rot.A);
  b.O_P = std::move(rot.O_P);
  b.U = std::move(rot.U);
  return b;
}

std::string_view to_string(SignAgreement s) {
  switch (s) {
    case SignAgreement::AllSame:
      return "ALL_SAME";
    case SignAgreement::AllOpposite:
      return "ALL_OPPOSITE";
    case SignAgreement::Mixed:
      return "MIXED";
  }
  return "MIXED";
}

SignAgreement sign_consistency(const ModelSpec& model1, double theta1, const ModelSpec& model2, double theta2,
                               std::span<const double> x_grid) {
  bool any_same = false;
  bool any_opposite = false;
  for (double x : x_grid) {
    const bool up1 = evaluate_model(model1, x, theta1).dp0 >= 0.0;
    const bool up2 = evaluate_model(model2, x, theta2).dp0 >= 0.0;
    (up1 == up2 ? any_same : any_opposite) = true;
  }
  if (any_same && any_opposite) return SignAgreement::Mixed;
  return any_opposite ? SignAgreement::AllOpposite : SignAgreement::AllSame;
}

std::vector<double> covariate_grid(int points) {
  if (points < 1) throw std::invalid_argument("covariate_grid: need at least one point");
  std::vector<double> grid(points);
  for (int k = 1; k <= points; ++k) grid[k - 1] = 2.0 * k / points;
  return grid;
}

}  // namespace rotatest
