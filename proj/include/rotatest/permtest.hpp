#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rotatest/montecarlo.hpp"

namespace rotatest {

// Largest vertical gap between two empirical distribution functions, found
// exactly by a merge scan. Both inputs must be sorted ascending.
double two_sample_ks_distance(std::span<const double> a_sorted, std::span<const double> b_sorted);
double two_sample_ks_distance(const EDFSample& g1, const EDFSample& g2);

enum class PValueConvention {
  Raw,      // #{d* >= d} / N, so 0 is attainable
  PlusOne,  // (#{d* >= d} + 1) / (N + 1)
};

struct PermutationOptions {
  std::size_t permutations = 10000;
  std::uint64_t seed = 0;
  PValueConvention convention = PValueConvention::Raw;
  unsigned jobs = 0;
};

struct PermutationResult {
  double p_value = 1.0;
  double observed_distance = 0.0;
  std::size_t exceed_count = 0;
  std::size_t permutations = 0;
};

// Pools both samples, reshuffles the pooled values N times (Fisher-Yates, one
// substream per permutation), resplits them into parts of the original sizes
// and counts the permuted distances at least as large as the observed one.
// Swapping the arguments gives the same answer.
PermutationResult randomization_test(std::span<const double> g1, std::span<const double> g2,
                                     const PermutationOptions& opts);

double randomization_pvalue(const EDFSample& g1, const EDFSample& g2, std::size_t permutations,
                            std::uint64_t seed);

struct PValueCell {
  std::string row;
  std::string col;
  int m = 1;
  double p_value = 1.0;
  double observed_distance = 0.0;
};

// Pairwise p-values between the generators of one experiment, per m. Only
// pairs with the row model earlier than the column model are stored.
struct PValueMatrix {
  std::vector<std::string> models;
  std::vector<int> m_values;
  std::size_t permutations = 0;
  PValueConvention convention = PValueConvention::Raw;
  std::vector<PValueCell> cells;

  // Order of the two names does not matter. Throws std::out_of_range.
  const PValueCell& at(const std::string& a, const std::string& b, int m) const;
};

// The permutation stream of each pair is keyed by (seed, row, col, m).
PValueMatrix pvalue_matrix(const std::vector<EDFSample>& edfs, const PermutationOptions& opts);

}  // namespace rotatest
