#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rotatest/model.hpp"
#include "rotatest/rng.hpp"
#include "rotatest/rotation.hpp"

namespace rotatest {

enum class ExperimentKind {
  CorrectFit,   // experiment 1: each generator fitted with its own family
  LogisticFit,  // experiment 2: every generator fitted with the logistic family
};

std::string_view to_string(ExperimentKind kind);

struct ExperimentConfig {
  int total_trials = 96;
  std::vector<int> m_values{1, 2, 3};
  int replications = 5000;
  int grid_points = 100;
  std::uint64_t master_seed = 0;
  ExperimentKind experiment = ExperimentKind::CorrectFit;
  std::vector<std::string> generators{"logistic", "exponential", "normal", "beta"};
  unsigned jobs = 0;  // 0 = all cores
  double max_failure_fraction = 0.01;
  int max_attempts_per_replication = 100;
  Completion completion = Completion::GramSchmidt;
};

// Throws std::invalid_argument describing the first problem found.
void validate(const ExperimentConfig& config);

// Sorted KS statistics of one (generator, fitted model, m) cell.
struct EDFSample {
  std::string generator;
  std::string fitted;
  int m = 1;
  std::vector<double> values;
  std::size_t boundary_count = 0;  // replications whose MLE sat on an interval endpoint
  std::size_t failure_count = 0;   // attempts discarded and redrawn
};

struct ReplicationResult {
  double ks = 0.0;
  double theta_hat = 0.0;
  bool at_boundary = false;
};

// generate -> fit -> rotate -> KS, all from one stream.
ReplicationResult run_replication(const ModelSpec& generator, const ModelSpec& fitted, int m, int n,
                                  int grid_points, Stream& rng,
                                  Completion completion = Completion::GramSchmidt);

// Stream for attempt `attempt` of replication `rep` in the (generator, m)
// cell. The fitted model is not part of the key, so both experiments see the
// same simulated data.
Stream replication_stream(std::uint64_t master_seed, std::string_view generator, int m, std::size_t rep,
                          int attempt);

// Runs one cell. Failed attempts (singular information, optimizer or model
// errors) are redrawn from a fresh stream; throws ReplicationFailureError if
// they exceed max_failure_fraction of the replications.
EDFSample run_cell(const ExperimentConfig& config, const std::string& generator, int m);

// All cells, generator-major then m, in config order.
std::vector<EDFSample> run_experiment(const ExperimentConfig& config);

// Proportion of values <= t.
double edf_evaluate(const EDFSample& edf, double t);

}  // namespace rotatest
