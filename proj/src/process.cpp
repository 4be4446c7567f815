#include "rotatest/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rotatest {

Eigen::VectorXd indicator_direction(int m, int z0) {
  const int outcomes = 1 << m;
  if (z0 < 1 || z0 > outcomes) throw std::invalid_argument("indicator_direction: z0 out of range");
  const double shift = static_cast<double>(z0) / outcomes;
  Eigen::VectorXd v(outcomes);
  for (int z = 1; z <= outcomes; ++z) v[z - 1] = (z <= z0 ? 1.0 : 0.0) - shift;
  return v;
}

namespace {

// Columns v_1 .. v_{2^m - 1}.
Eigen::MatrixXd indicator_directions(int m) {
  const int outcomes = 1 << m;
  Eigen::MatrixXd V(outcomes, outcomes - 1);
  for (int z0 = 1; z0 < outcomes; ++z0) V.col(z0 - 1) = indicator_direction(m, z0);
  return V;
}

}  // namespace

RotatedSample rotate_sample(const TrialSample& sample, const ModelSpec& model, double theta_hat) {
  return rotate_sample(sample, model, theta_hat, build_reference_basis(sample.m, model.K));
}

RotatedSample rotate_sample(const TrialSample& sample, const ModelSpec& model, double theta_hat,
                            const ReferenceBasis& basis) {
  const Eigen::MatrixXd V = indicator_directions(sample.m);
  RotatedSample r;
  r.m = sample.m;
  r.n = sample.n;
  r.max_covariate.resize(sample.n);
  r.contribution.resize(sample.n, V.cols());
  for (int j = 0; j < sample.n; ++j) {
    const auto bundle = build_bundle(model, sample.x(j), theta_hat, basis);
    const Eigen::MatrixXd W = bundle.U * bundle.ell.asDiagonal() * V;
    r.contribution.row(j) = W.row(sample.z(j) - 1) - bundle.p.transpose() * W;
    r.max_covariate[j] = sample.max_covariate(j);
  }
  return r;
}

double rotated_process_value(const TrialSample& sample, const ModelSpec& model, double theta_hat, double x0,
                             int z0) {
  const auto basis = build_reference_basis(sample.m, model.K);
  const Eigen::VectorXd v = indicator_direction(sample.m, z0);
  double total = 0.0;
  for (int j = 0; j < sample.n; ++j) {
    if (sample.max_covariate(j) > x0) continue;
    const auto bundle = build_bundle(model, sample.x(j), theta_hat, basis);
    const Eigen::VectorXd w = bundle.U * bundle.ell.cwiseProduct(v);
    total += w[sample.z(j) - 1] - bundle.p.dot(w);
  }
  return total / std::sqrt(static_cast<double>(sample.n));
}

namespace {

template <class Visit>
void sweep_grid(const RotatedSample& rotated, int grid_points, Visit&& visit) {
  if (grid_points < 1) throw std::invalid_argument("ks_statistic: grid_points must be positive");
  std::vector<int> order(rotated.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rotated.max_covariate[a] < rotated.max_covariate[b]; });
  const double scale = 1.0 / std::sqrt(static_cast<double>(rotated.n));
  Eigen::RowVectorXd running = Eigen::RowVectorXd::Zero(rotated.contribution.cols());
  std::size_t next = 0;
  for (int k = 1; k <= grid_points; ++k) {
    const double x0 = 2.0 * k / grid_points;
    while (next < order.size() && rotated.max_covariate[order[next]] <= x0) {
      running += rotated.contribution.row(order[next]);
      ++next;
    }
    visit(k, x0, running * scale);
  }
}

}  // namespace

KSResult ks_statistic(const RotatedSample& rotated, int grid_points) {
  KSResult best;
  double top = -1.0;
  sweep_grid(rotated, grid_points, [&](int, double x0, const Eigen::RowVectorXd& values) {
    for (Eigen::Index c = 0; c < values.size(); ++c) {
      const double a = std::abs(values[c]);
      if (a > top) {
        top = a;
        best.ks = a;
        best.argmax_x0 = x0;
        best.argmax_z0 = static_cast<int>(c) + 1;
      }
    }
  });
  return best;
}

KSResult ks_statistic(const TrialSample& sample, const ModelSpec& model, double theta_hat, int grid_points) {
  return ks_statistic(rotate_sample(sample, model, theta_hat), grid_points);
}

Eigen::MatrixXd process_surface(const RotatedSample& rotated, int grid_points) {
  Eigen::MatrixXd surface(grid_points, rotated.contribution.cols());
  sweep_grid(rotated, grid_points,
             [&](int k, double, const Eigen::RowVectorXd& values) { surface.row(k - 1) = values; });
  return surface;
}

Eigen::MatrixXd whole_sample_information(const TrialSample& sample, const ModelSpec& model, double theta) {
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(model.K, model.K);
  for (int j = 0; j < sample.n; ++j) {
    const auto g = group_probabilities(model, sample.x(j), theta);
    const Eigen::MatrixXd M = score_matrix(g.p, g.dp);
    total += M.transpose() * g.p.asDiagonal() * M;
  }
  return total;
}

}  // namespace rotatest
