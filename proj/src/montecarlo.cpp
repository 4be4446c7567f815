#include "rotatest/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "rotatest/error.hpp"
#include "rotatest/mle.hpp"
#include "rotatest/parallel.hpp"
#include "rotatest/process.hpp"
#include "rotatest/sample.hpp"

namespace rotatest {

std::string_view to_string(ExperimentKind kind) {
  return kind == ExperimentKind::CorrectFit ? "correct-fit" : "logistic-fit";
}

void validate(const ExperimentConfig& config) {
  if (config.total_trials < 1) throw std::invalid_argument("total_trials must be positive");
  if (config.replications < 1) throw std::invalid_argument("replications must be positive");
  if (config.grid_points < 1) throw std::invalid_argument("grid_points must be positive");
  if (config.m_values.empty()) throw std::invalid_argument("m_values is empty");
  for (int m : config.m_values) {
    if (m < 1 || m > 3) throw std::invalid_argument("m must be 1, 2 or 3");
    if (config.total_trials % m != 0) {
      throw std::invalid_argument("total_trials " + std::to_string(config.total_trials) +
                                  " is not divisible by m=" + std::to_string(m));
    }
  }
  if (config.generators.empty()) throw std::invalid_argument("no generator models given");
  std::set<std::string> seen;
  for (const auto& g : config.generators) {
    model_by_name(g);
    if (!seen.insert(g).second) throw std::invalid_argument("duplicate model '" + g + "'");
  }
}

ReplicationResult run_replication(const ModelSpec& generator, const ModelSpec& fitted, int m, int n,
                                  int grid_points, Stream& rng, Completion completion) {
  const auto sample = generate_sample(generator, generator.theta0, n, m, rng);
  const auto fit = fit_mle(fitted, sample);
  const auto basis = build_reference_basis(m, fitted.K, completion);
  const auto ks = ks_statistic(rotate_sample(sample, fitted, fit.theta_hat, basis), grid_points);
  return {ks.ks, fit.theta_hat, fit.at_boundary};
}

Stream replication_stream(std::uint64_t master_seed, std::string_view generator, int m, std::size_t rep,
                          int attempt) {
  return make_stream(master_seed, {name_key(generator), static_cast<std::uint64_t>(m),
                                   static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(attempt)});
}

EDFSample run_cell(const ExperimentConfig& config, const std::string& generator, int m) {
  const ModelSpec gen = model_by_name(generator);
  const ModelSpec fitted = config.experiment == ExperimentKind::CorrectFit ? gen : logistic_model();
  const int n = config.total_trials / m;
  const auto reps = static_cast<std::size_t>(config.replications);

  std::vector<ReplicationResult> results(reps);
  std::vector<int> failures(reps, 0);
  parallel_for(reps, config.jobs, [&](std::size_t r) {
    for (int attempt = 0; attempt < config.max_attempts_per_replication; ++attempt) {
      auto rng = replication_stream(config.master_seed, generator, m, r, attempt);
      try {
        results[r] = run_replication(gen, fitted, m, n, config.grid_points, rng, config.completion);
        return;
      } catch (const SingularInformationError&) {
      } catch (const EstimationError&) {
      } catch (const ModelError&) {
      }
      ++failures[r];
    }
    throw ReplicationFailureError("replication " + std::to_string(r) + " of " + generator + "/m=" +
                                      std::to_string(m) + " failed on every attempt",
                                  static_cast<std::size_t>(failures[r]), reps);
  });

  EDFSample edf;
  edf.generator = generator;
  edf.fitted = fitted.name;
  edf.m = m;
  edf.values.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    edf.values.push_back(results[r].ks);
    edf.boundary_count += results[r].at_boundary ? 1 : 0;
    edf.failure_count += static_cast<std::size_t>(failures[r]);
  }
  std::sort(edf.values.begin(), edf.values.end());
  if (static_cast<double>(edf.failure_count) > config.max_failure_fraction * static_cast<double>(reps)) {
    throw ReplicationFailureError("too many failed replications in " + generator + "/m=" + std::to_string(m) +
                                      ": " + std::to_string(edf.failure_count),
                                  edf.failure_count, reps);
  }
  return edf;
}

std::vector<EDFSample> run_experiment(const ExperimentConfig& config) {
  validate(config);
  std::vector<EDFSample> cells;
  for (const auto& g : config.generators) {
    for (int m : config.m_values) cells.push_back(run_cell(config, g, m));
  }
  return cells;
}

double edf_evaluate(const EDFSample& edf, double t) {
  if (edf.values.empty()) return 0.0;
  const auto upto = std::upper_bound(edf.values.begin(), edf.values.end(), t) - edf.values.begin();
  return static_cast<double>(upto) / static_cast<double>(edf.values.size());
}

}  // namespace rotatest
