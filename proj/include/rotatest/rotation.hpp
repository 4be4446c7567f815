#pragma once

#include <Eigen/Dense>
#include <span>
#include <string_view>
#include <vector>

#include "rotatest/model.hpp"

namespace rotatest {

// Smallest admissible eigenvalue of a subgroup information matrix.
inline constexpr double kInformationFloor = 1e-12;
// Gram-Schmidt candidates whose projected norm falls below this are skipped.
inline constexpr double kCompletionTolerance = 1e-8;

// Outcome probabilities of one subgroup and their theta-derivatives, indexed
// by lexicographic code z-1.
struct GroupProbabilities {
  Eigen::VectorXd p;
  Eigen::VectorXd dp;
  bool degenerate = false;  // all mass on one outcome after clipping
};

GroupProbabilities group_probabilities(const ModelSpec& model, std::span<const double> x, double theta);

// Score matrix: M(z,k) = (dp_z/dtheta_k) / p_z. dp is 2^m x K.
Eigen::MatrixXd score_matrix(const Eigen::VectorXd& p, const Eigen::MatrixXd& dp);

// Gamma = M^T diag(p) M. Throws IdentifiabilityError if K+1 > 2^m and
// SingularInformationError if the smallest eigenvalue is below the floor.
Eigen::MatrixXd information_matrix(const Eigen::MatrixXd& M, const Eigen::VectorXd& p);

// Gamma^{-1/2} from the spectral decomposition of a symmetric positive
// definite matrix.
Eigen::MatrixXd inverse_sqrt_spd(const Eigen::MatrixXd& gamma);

// How the free columns of O_Q and O_P are filled in. Any choice gives a valid
// rotation; the finite-sample law of the KS statistic for m > 1 does depend
// on it.
enum class Completion {
  GramSchmidt,  // canonical basis vectors in index order
  Householder,  // trailing columns of the full Householder Q
};

// Extends orthonormal columns Q (r x c) to an r x r orthogonal matrix whose
// first c columns are Q. With GramSchmidt, canonical basis vectors are tried
// in index order, each orthogonalised twice against the current columns and
// skipped when nearly dependent.
Eigen::MatrixXd complete_orthonormal(const Eigen::MatrixXd& Q, Completion method = Completion::GramSchmidt,
                                     double tol = kCompletionTolerance);

// sqrt(2^{-m} / p_z): square-root density of the uniform reference measure
// with respect to the fitted outcome measure.
Eigen::VectorXd likelihood_ratio_weights(const Eigen::VectorXd& p);

// Second reference direction b1 for m = 1, 2, 3.
Eigen::VectorXd reference_b1(int m);

// B = (1 | b1 | ...) with K+1 columns, orthonormal under the uniform measure,
// and O_Q = 2^{-m/2} (B | Z_B). Columns past b1 (K > 1) come from the
// deterministic completion.
struct ReferenceBasis {
  int m = 1;
  int K = 1;
  Completion completion = Completion::GramSchmidt;  // also used for O_P
  Eigen::MatrixXd B;
  Eigen::MatrixXd O_Q;
};

ReferenceBasis build_reference_basis(int m, int K = 1, Completion completion = Completion::GramSchmidt);

enum class ScoreNormalization {
  Spectral,  // A = (1 | M Gamma^{-1/2})
  None,      // A = (1 | M); only for negative-control runs of the verifier
};

struct Rotation {
  Eigen::MatrixXd A;    // (1 | normalised scores)
  Eigen::MatrixXd O_P;  // diag(p)^{1/2} (A | Z_A)
  Eigen::MatrixXd U;    // diag(p)^{-1/2} O_P O_Q^T diag(p)^{1/2}
};

// O_P is completed with basis.completion.
// U maps l*b_k to a_k for k = 0..K and preserves the diag(p)-weighted inner
// product. Throws IdentifiabilityError if K+1 > 2^m.
Rotation build_rotation(const Eigen::VectorXd& p, const Eigen::MatrixXd& M, const Eigen::MatrixXd& gamma,
                        const ReferenceBasis& basis, ScoreNormalization norm = ScoreNormalization::Spectral);

Eigen::MatrixXd build_U(const Eigen::VectorXd& p, const Eigen::MatrixXd& M, const Eigen::MatrixXd& gamma,
                        const ReferenceBasis& basis);

// Explicit 2x2 rotation for m = 1, K = 1. The branch follows sign(dp0) with
// sign(0) taken as +1.
Eigen::Matrix2d build_U_m1_closed_form(double p0, double dp0);

// Everything needed to rotate one subgroup.
struct RotationBundle {
  int m = 1;
  int K = 1;
  Eigen::VectorXd p;
  Eigen::MatrixXd M;
  Eigen::MatrixXd Gamma;
  Eigen::VectorXd ell;
  Eigen::MatrixXd A;
  Eigen::MatrixXd O_P;
  Eigen::MatrixXd U;
};

RotationBundle build_bundle(const ModelSpec& model, std::span<const double> x, double theta,
                            const ReferenceBasis& basis, ScoreNormalization norm = ScoreNormalization::Spectral);

enum class SignAgreement { AllSame, AllOpposite, Mixed };

std::string_view to_string(SignAgreement s);

// Compares sign(dp0) of two m = 1 models over a covariate grid. When the
// signs agree everywhere (or disagree everywhere) the score directions of the
// two models coincide up to a global sign.
SignAgreement sign_consistency(const ModelSpec& model1, double theta1, const ModelSpec& model2, double theta2,
                               std::span<const double> x_grid);

// {2k/points : k = 1..points}
std::vector<double> covariate_grid(int points = 100);

}  // namespace rotatest
