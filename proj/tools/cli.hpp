#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "rotatest/montecarlo.hpp"
#include "rotatest/permtest.hpp"
#include "rotatest/verify.hpp"

namespace rotatest::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::uint64_t kDefaultSeed = 20180110;

struct ExperimentArgs {
  ExperimentConfig config;
  std::string out_dir = "rotatest-out";
  std::size_t permutations = 10000;
  PValueConvention convention = PValueConvention::Raw;
  bool svg = false;
};

// Runs the experiment, writes EDF CSVs, the p-value table (CSV and JSON),
// per-m plot data and manifest.json into out_dir.
int cmd_experiment(const ExperimentArgs& args, std::ostream& log);

struct VerifyArgs {
  VerifyOptions options;
  bool verbose = false;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out);

// Full command line, argv[0] excluded. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Expands "--config FILE" into flags for every key=value line whose flag is
// not already on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace rotatest::cli
