#include "rotatest/permtest.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "rotatest/parallel.hpp"
#include "rotatest/rng.hpp"

namespace rotatest {

namespace {

// Gap scaled by n1*n2 so that ties compare exactly.
std::int64_t scaled_distance(std::span<const double> a, std::span<const double> b) {
  const auto n1 = static_cast<std::int64_t>(a.size());
  const auto n2 = static_cast<std::int64_t>(b.size());
  std::int64_t i = 0, j = 0, best = 0;
  while (i < n1 || j < n2) {
    double t;
    if (j >= n2 || (i < n1 && a[i] <= b[j])) {
      t = a[i];
    } else {
      t = b[j];
    }
    while (i < n1 && a[i] <= t) ++i;
    while (j < n2 && b[j] <= t) ++j;
    best = std::max(best, std::abs(i * n2 - j * n1));
  }
  return best;
}

}  // namespace

double two_sample_ks_distance(std::span<const double> a_sorted, std::span<const double> b_sorted) {
  if (a_sorted.empty() || b_sorted.empty()) throw std::invalid_argument("two_sample_ks_distance: empty sample");
  const double denom = static_cast<double>(a_sorted.size()) * static_cast<double>(b_sorted.size());
  return static_cast<double>(scaled_distance(a_sorted, b_sorted)) / denom;
}

double two_sample_ks_distance(const EDFSample& g1, const EDFSample& g2) {
  return two_sample_ks_distance(g1.values, g2.values);
}

PermutationResult randomization_test(std::span<const double> g1, std::span<const double> g2,
                                     const PermutationOptions& opts) {
  if (g1.empty() || g2.empty()) throw std::invalid_argument("randomization_test: empty sample");
  if (opts.permutations < 1) throw std::invalid_argument("randomization_test: need at least one permutation");

  std::vector<double> a(g1.begin(), g1.end());
  std::vector<double> b(g2.begin(), g2.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::int64_t observed = scaled_distance(a, b);

  // Pooled values in ascending order; block_end marks the end of each run of
  // equal values, where the two step functions are compared.
  std::vector<double> pooled;
  pooled.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(pooled));
  std::vector<std::size_t> block_end;
  for (std::size_t k = 0; k < pooled.size(); ++k) {
    if (k + 1 == pooled.size() || pooled[k + 1] != pooled[k]) block_end.push_back(k + 1);
  }

  // The smaller sample takes label 1 so the split does not depend on argument
  // order.
  const auto n_small = static_cast<std::int64_t>(std::min(a.size(), b.size()));
  const auto n_large = static_cast<std::int64_t>(std::max(a.size(), b.size()));
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (opts.permutations + kBlock - 1) / kBlock;
  std::vector<std::size_t> exceed(blocks, 0);

  parallel_for(blocks, opts.jobs, [&](std::size_t blk) {
    std::vector<std::uint8_t> labels(pooled.size());
    const std::size_t first = blk * kBlock;
    const std::size_t last = std::min(opts.permutations, first + kBlock);
    std::size_t count = 0;
    for (std::size_t k = first; k < last; ++k) {
      std::fill(labels.begin(), labels.begin() + n_small, std::uint8_t{1});
      std::fill(labels.begin() + n_small, labels.end(), std::uint8_t{0});
      auto rng = make_stream(opts.seed, {static_cast<std::uint64_t>(k)});
      std::shuffle(labels.begin(), labels.end(), rng);
      std::int64_t small_seen = 0, best = 0;
      std::size_t pos = 0;
      for (std::size_t end : block_end) {
        for (; pos < end; ++pos) small_seen += labels[pos];
        const std::int64_t large_seen = static_cast<std::int64_t>(end) - small_seen;
        best = std::max(best, std::abs(small_seen * n_large - large_seen * n_small));
      }
      if (best >= observed) ++count;
    }
    exceed[blk] = count;
  });

  PermutationResult r;
  r.permutations = opts.permutations;
  r.exceed_count = std::accumulate(exceed.begin(), exceed.end(), std::size_t{0});
  r.observed_distance = static_cast<double>(observed) / (static_cast<double>(n_small) * static_cast<double>(n_large));
  const double N = static_cast<double>(opts.permutations);
  const double hits = static_cast<double>(r.exceed_count);
  r.p_value = opts.convention == PValueConvention::Raw ? hits / N : (hits + 1.0) / (N + 1.0);
  return r;
}

double randomization_pvalue(const EDFSample& g1, const EDFSample& g2, std::size_t permutations,
                            std::uint64_t seed) {
  PermutationOptions opts;
  opts.permutations = permutations;
  opts.seed = seed;
  return randomization_test(g1.values, g2.values, opts).p_value;
}

const PValueCell& PValueMatrix::at(const std::string& a, const std::string& b, int m) const {
  for (const auto& c : cells) {
    if (c.m == m && ((c.row == a && c.col == b) || (c.row == b && c.col == a))) return c;
  }
  throw std::out_of_range("no p-value for " + a + " vs " + b + " at m=" + std::to_string(m));
}

PValueMatrix pvalue_matrix(const std::vector<EDFSample>& edfs, const PermutationOptions& opts) {
  PValueMatrix out;
  out.permutations = opts.permutations;
  out.convention = opts.convention;
  for (const auto& e : edfs) {
    if (std::find(out.models.begin(), out.models.end(), e.generator) == out.models.end()) {
      out.models.push_back(e.generator);
    }
    if (std::find(out.m_values.begin(), out.m_values.end(), e.m) == out.m_values.end()) {
      out.m_values.push_back(e.m);
    }
  }
  auto find = [&](const std::string& g, int m) -> const EDFSample* {
    for (const auto& e : edfs) {
      if (e.generator == g && e.m == m) return &e;
    }
    return nullptr;
  };
  for (std::size_t r = 0; r < out.models.size(); ++r) {
    for (int m : out.m_values) {
      for (std::size_t c = r + 1; c < out.models.size(); ++c) {
        const EDFSample* g1 = find(out.models[r], m);
        const EDFSample* g2 = find(out.models[c], m);
        if (!g1 || !g2) continue;
        PermutationOptions pair_opts = opts;
        pair_opts.seed = make_stream(opts.seed, {name_key(out.models[r]), name_key(out.models[c]),
                                                 static_cast<std::uint64_t>(m)})();
        const auto res = randomization_test(g1->values, g2->values, pair_opts);
        out.cells.push_back({out.models[r], out.models[c], m, res.p_value, res.observed_distance});
      }
    }
  }
  return out;
}

}  // namespace rotatest
