#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rotatest/model.hpp"
#include "rotatest/rng.hpp"

namespace rotatest {

// n subgroups of m Bernoulli trials. Outcome 0 is a failure, 1 a success.
// Storage is row-major by subgroup: trial i of subgroup j sits at j*m + i.
struct TrialSample {
  int m = 1;
  int n = 0;
  std::vector<double> covariates;
  std::vector<std::uint8_t> outcomes;

  std::span<const double> x(int j) const { return {covariates.data() + j * m, static_cast<std::size_t>(m)}; }
  std::span<const std::uint8_t> y(int j) const { return {outcomes.data() + j * m, static_cast<std::size_t>(m)}; }
  // Largest covariate of subgroup j; the subgroup lies below x0 iff this does.
  double max_covariate(int j) const;
  // Lexicographic outcome code of subgroup j, in 1..2^m.
  int z(int j) const;
  int total_trials() const { return n * m; }
};

// z = 1 + sum_i y_i 2^{m-i}: 0..0 -> 1, ..., 1..1 -> 2^m.
int encode_lex(std::span<const std::uint8_t> y);
// Inverse of encode_lex; bit i of the result is trial i's outcome.
std::vector<std::uint8_t> decode_lex(int z, int m);

// Covariates i.i.d. uniform on [0,2]; each trial fails with probability
// p_{x,theta}(0). Trials are drawn consecutively, subgroup by subgroup.
TrialSample generate_sample(const ModelSpec& model, double theta, int n, int m, Stream& rng);

// CSV with columns subgroup,trial,covariate,outcome (1-based indices).
void write_sample_csv(std::ostream& os, const TrialSample& sample);

}  // namespace rotatest
