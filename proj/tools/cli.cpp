#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "rotatest/error.hpp"
#include "rotatest/io.hpp"
#include "rotatest/mle.hpp"
#include "rotatest/process.hpp"
#include "rotatest/sample.hpp"

namespace rotatest::cli {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

nlohmann::json config_json(const ExperimentArgs& a) {
  const auto& c = a.config;
  return {{"experiment", c.experiment == ExperimentKind::CorrectFit ? 1 : 2},
          {"experiment_name", std::string(to_string(c.experiment))},
          {"trials", c.total_trials},
          {"m", c.m_values},
          {"reps", c.replications},
          {"grid", c.grid_points},
          {"seed", c.master_seed},
          {"models", c.generators},
          {"perms", a.permutations},
          {"pvalue_convention", a.convention == PValueConvention::Raw ? "raw" : "plus-one"},
          {"completion", c.completion == Completion::GramSchmidt ? "gram-schmidt" : "householder"},
          {"out", a.out_dir}};
}

}  // namespace

int cmd_experiment(const ExperimentArgs& args, std::ostream& log) {
  const auto& cfg = args.config;
  validate(cfg);
  const int exp_no = cfg.experiment == ExperimentKind::CorrectFit ? 1 : 2;
  const std::string prefix = "exp" + std::to_string(exp_no);
  const fs::path out = args.out_dir;
  fs::create_directories(out);

  nlohmann::json manifest;
  manifest["tool"] = "rotatest";
  manifest["version"] = ROTATEST_VERSION;
  manifest["config"] = config_json(args);
  manifest["started_at"] = utc_now();
  manifest["files"] = nlohmann::json::array();
  manifest["cells"] = nlohmann::json::array();

  auto finish = [&](const std::string& status) {
    manifest["status"] = status;
    manifest["finished_at"] = utc_now();
    auto os = open_out(out / "manifest.json");
    os << manifest.dump(2) << '\n';
  };

  const Metadata meta{{"experiment", std::to_string(exp_no)},
                      {"seed", std::to_string(cfg.master_seed)},
                      {"trials", std::to_string(cfg.total_trials)},
                      {"grid", std::to_string(cfg.grid_points)}};

  std::vector<EDFSample> edfs;
  try {
    for (const auto& g : cfg.generators) {
      for (int m : cfg.m_values) {
        log << "[" << prefix << "] " << g << " m=" << m << " ..." << std::flush;
        auto edf = run_cell(cfg, g, m);
        log << " boundary=" << edf.boundary_count << " failures=" << edf.failure_count << '\n';
        const std::string name = prefix + "_edf_" + g + "_fit-" + edf.fitted + "_m" + std::to_string(m) + ".csv";
        {
          auto os = open_out(out / name);
          write_edf_csv(os, edf, meta);
        }
        manifest["files"].push_back(name);
        manifest["cells"].push_back({{"generator", edf.generator},
                                     {"fitted", edf.fitted},
                                     {"m", m},
                                     {"boundary_count", edf.boundary_count},
                                     {"failure_count", edf.failure_count},
                                     {"file", name}});
        edfs.push_back(std::move(edf));
      }
    }
  } catch (const ReplicationFailureError& e) {
    log << "\nerror: " << e.what() << '\n';
    manifest["error"] = {{"message", e.what()}, {"failures", e.failures()}, {"replications", e.replications()}};
    finish("failed");
    return kExitFailure;
  }

  for (int m : cfg.m_values) {
    std::vector<const EDFSample*> series;
    for (const auto& e : edfs) {
      if (e.m == m) series.push_back(&e);
    }
    const std::string tsv = prefix + "_plot_m" + std::to_string(m) + ".tsv";
    {
      auto os = open_out(out / tsv);
      write_plot_tsv(os, series);
    }
    manifest["files"].push_back(tsv);
    if (args.svg) {
      const std::string svg = prefix + "_plot_m" + std::to_string(m) + ".svg";
      auto os = open_out(out / svg);
      write_plot_svg(os, series,
                     (exp_no == 1 ? "Correct model fitted" : "Logistic model fitted") + std::string(", m=") +
                         std::to_string(m));
      manifest["files"].push_back(svg);
    }
  }

  if (cfg.generators.size() >= 2) {
    log << "[" << prefix << "] randomization p-values (N=" << args.permutations << ") ..." << std::flush;
    PermutationOptions popts;
    popts.permutations = args.permutations;
    popts.seed = make_stream(cfg.master_seed, {name_key("permutation")})();
    popts.convention = args.convention;
    popts.jobs = cfg.jobs;
    const auto pv = pvalue_matrix(edfs, popts);
    log << " done\n";
    const std::string csv = prefix + "_pvalues.csv";
    const std::string json = prefix + "_pvalues.json";
    {
      auto os = open_out(out / csv);
      write_pvalue_csv(os, pv);
    }
    {
      auto os = open_out(out / json);
      os << to_json(pv).dump(2) << '\n';
    }
    manifest["files"].push_back(csv);
    manifest["files"].push_back(json);
    std::ostringstream table;
    write_pvalue_csv(table, pv);
    log << table.str();
  }
  finish("ok");
  return kExitOk;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  const auto report = run_invariant_suite(args.options, args.verbose);
  auto line = [&](const char* name, double v, double tol) {
    out << std::left << std::setw(34) << name << std::scientific << std::setprecision(3) << v
        << (v < tol ? "  ok" : "  FAIL") << '\n';
  };
  if (args.verbose) {
    for (const auto& c : report.reports) {
      out << "case " << c.index << ' ' << c.model << " m=" << c.m << " theta=" << std::setprecision(6)
          << std::defaultfloat << c.theta << " orth=" << std::scientific << std::setprecision(3)
          << c.residuals.orthonormality << " map=" << c.residuals.mapping << " unit=" << c.residuals.unitarity
          << " centre=" << c.residuals.centering << " psum=" << c.residuals.probability_sum << '\n';
    }
  }
  const auto& r = report.max_residuals;
  const auto& tol = args.options.tol;
  out << "cases " << report.cases << " (skipped singular: " << report.skipped << ")\n";
  line("O_A^T O_A - I", r.orthonormality, tol.identity);
  line("U L B - A", r.mapping, tol.identity);
  line("U L (B|Z_B) - (A|Z_A)", r.full_mapping, tol.identity);
  line("U^T D_P U - D_P", r.unitarity, tol.identity);
  line("U (ell * 1) - 1", r.constant, tol.identity);
  line("1^T D_P M", r.centering, tol.identity);
  line("sum p - 1", r.probability_sum, tol.probability_sum);
  line("closed form (m=1) action", report.closed_form_max, tol.closed_form);
  out << std::defaultfloat;
  if (!report.passed) {
    out << "FAILED cases (seed " << args.options.seed << "):";
    for (std::size_t k = 0; k < report.failures.size() && k < 20; ++k) out << ' ' << report.failures[k].index;
    if (report.failures.size() > 20) out << " ... (" << report.failures.size() << " total)";
    out << '\n';
    return kExitFailure;
  }
  out << "all invariants within tolerance\n";
  return kExitOk;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;
  std::ifstream in(config_path);
  if (!in) throw CLI::FileError::Missing(config_path);

  auto given = [&](const std::string& key) {
    const std::string flag = "--" + key;
    for (const auto& a : rest) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> injected;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CLI::ConversionError("config line without '=': " + line);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (given(key)) continue;
    if (value == "true") {
      injected.push_back("--" + key);
    } else if (value != "false") {
      injected.push_back("--" + key + "=" + value);
    }
  }
  // Subcommand name stays first.
  if (!rest.empty() && rest[0].rfind("-", 0) != 0) {
    rest.insert(rest.begin() + 1, injected.begin(), injected.end());
  } else {
    rest.insert(rest.begin(), injected.begin(), injected.end());
  }
  return rest;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distribution-free goodness-of-fit for grouped Bernoulli trials"};
  app.name("rotatest");
  app.set_version_flag("--version", std::string("rotatest ") + ROTATEST_VERSION);
  app.require_subcommand(1);

  std::uint64_t seed = kDefaultSeed;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed")->envname("ROTATEST_SEED");
  };

  // experiment
  ExperimentArgs ex;
  int experiment_no = 1;
  std::string convention = "raw";
  std::string completion = "gram-schmidt";
  auto* exp = app.add_subcommand("experiment", "Run experiment 1 (correct fit) or 2 (logistic fit)");
  exp->add_option("--experiment", experiment_no, "1 = correct model fitted, 2 = logistic fitted")
      ->check(CLI::IsMember({1, 2}));
  exp->add_option("--m", ex.config.m_values, "Group sizes")->delimiter(',')->check(CLI::Range(1, 3));
  exp->add_option("--trials", ex.config.total_trials, "Bernoulli trials per sample")->check(CLI::PositiveNumber);
  exp->add_option("--reps", ex.config.replications, "Replications per EDF")->check(CLI::PositiveNumber);
  exp->add_option("--grid", ex.config.grid_points, "Covariate grid intervals on [0,2]")->check(CLI::PositiveNumber);
  exp->add_option("--models", ex.config.generators, "Generating models")
      ->delimiter(',')
      ->check(CLI::IsMember(builtin_model_names()));
  exp->add_option("--out", ex.out_dir, "Output directory");
  exp->add_option("--perms", ex.permutations, "Permutations per p-value")->check(CLI::PositiveNumber);
  exp->add_option("--pvalue-convention", convention, "raw or plus-one")->check(CLI::IsMember({"raw", "plus-one"}));
  exp->add_option("--jobs", ex.config.jobs, "Worker threads (0 = all cores)");
  exp->add_flag("--svg", ex.svg, "Also write SVG plots");
  exp->add_option("--completion", completion, "Orthogonal completion: gram-schmidt or householder")
      ->check(CLI::IsMember({"gram-schmidt", "householder"}));
  add_seed(exp);

  // verify
  VerifyArgs va;
  bool inject_fault = false;
  auto* ver = app.add_subcommand("verify", "Check the rotation identities on random subgroups");
  ver->add_option("--cases", va.options.cases, "Number of random cases")->check(CLI::PositiveNumber);
  ver->add_flag("--inject-fault", inject_fault, "Skip the Gamma^{-1/2} normalisation (negative control)");
  ver->add_flag("--verbose", va.verbose, "Print every case");
  ver->add_option("--completion", completion, "Orthogonal completion: gram-schmidt or householder")
      ->check(CLI::IsMember({"gram-schmidt", "householder"}));
  add_seed(ver);

  // curves
  int curve_points = 200;
  auto* cur = app.add_subcommand("curves", "Failure probability of each model at theta0, as TSV");
  cur->add_option("--points", curve_points, "Grid intervals on [0,2]")->check(CLI::PositiveNumber);

  // bundle
  std::string model_name = "logistic";
  double theta = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> xs;
  auto* bun = app.add_subcommand("bundle", "Dump the rotation bundle of one subgroup as JSON");
  bun->add_option("--model", model_name, "Model")->check(CLI::IsMember(builtin_model_names()));
  bun->add_option("--theta", theta, "Parameter (default theta0)");
  bun->add_option("--x", xs, "Covariates of the subgroup, comma separated")
      ->delimiter(',')
      ->required()
      ->check(CLI::Range(0.0, 2.0));

  // sample / surface
  int m = 1;
  int trials = 96;
  int grid = 100;
  auto* sam = app.add_subcommand("sample", "Generate one sample as CSV");
  auto* sur = app.add_subcommand("surface", "Generate, fit and dump the rotated process surface as CSV");
  for (auto* sub : {sam, sur}) {
    sub->add_option("--model", model_name, "Model")->check(CLI::IsMember(builtin_model_names()));
    sub->add_option("--m", m, "Group size")->check(CLI::Range(1, 3));
    sub->add_option("--trials", trials, "Bernoulli trials")->check(CLI::PositiveNumber);
    add_seed(sub);
  }
  sam->add_option("--theta", theta, "Parameter (default theta0)");
  sur->add_option("--grid", grid, "Covariate grid intervals")->check(CLI::PositiveNumber);

  // pvalues from existing EDF files
  std::vector<std::string> edf_files;
  std::size_t perms = 10000;
  auto* pvs = app.add_subcommand("pvalues", "Randomization p-values between EDF CSV files");
  pvs->add_option("files", edf_files, "EDF CSV files")->required()->check(CLI::ExistingFile);
  pvs->add_option("--perms", perms, "Permutations")->check(CLI::PositiveNumber);
  add_seed(pvs);

  try {
    auto args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Completion completion_method =
      completion == "householder" ? Completion::Householder : Completion::GramSchmidt;
  try {
    if (*exp) {
      ex.config.completion = completion_method;
      ex.config.master_seed = seed;
      ex.config.experiment = experiment_no == 1 ? ExperimentKind::CorrectFit : ExperimentKind::LogisticFit;
      ex.convention = convention == "raw" ? PValueConvention::Raw : PValueConvention::PlusOne;
      try {
        validate(ex.config);
      } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
      }
      return cmd_experiment(ex, err);
    }
    if (*ver) {
      va.options.seed = seed;
      va.options.completion = completion_method;
      if (inject_fault) va.options.normalization = ScoreNormalization::None;
      return cmd_verify(va, out);
    }
    if (*cur) {
      write_model_curves_tsv(out, builtin_models(), curve_points);
      return kExitOk;
    }
    const ModelSpec model = model_by_name(model_name);
    if (std::isnan(theta)) theta = model.theta0;
    if (*bun) {
      if (xs.empty() || xs.size() > 3) {
        err << "error: --x needs 1 to 3 covariates\n";
        return kExitUsage;
      }
      const auto basis = build_reference_basis(static_cast<int>(xs.size()));
      out << to_json(build_bundle(model, xs, theta, basis)).dump(2) << '\n';
      return kExitOk;
    }
    if (*sam || *sur) {
      if (trials % m != 0) {
        err << "error: --trials must be divisible by --m\n";
        return kExitUsage;
      }
      auto rng = replication_stream(seed, model.name, m, 0, 0);
      const auto sample = generate_sample(model, theta, trials / m, m, rng);
      if (*sam) {
        write_sample_csv(out, sample);
      } else {
        const auto fit = fit_mle(model, sample);
        const auto rotated = rotate_sample(sample, model, fit.theta_hat);
        const auto ks = ks_statistic(rotated, grid);
        err << "theta_hat=" << fit.theta_hat << " ks=" << ks.ks << " at x0=" << ks.argmax_x0
            << " z0=" << ks.argmax_z0 << '\n';
        write_surface_csv(out, process_surface(rotated, grid), grid);
      }
      return kExitOk;
    }
    if (*pvs) {
      std::vector<EDFSample> edfs;
      for (const auto& f : edf_files) {
        std::ifstream in(f);
        edfs.push_back(read_edf_csv(in));
        if (edfs.back().generator.empty()) edfs.back().generator = fs::path(f).stem().string();
      }
      PermutationOptions popts;
      popts.permutations = perms;
      popts.seed = seed;
      write_pvalue_csv(out, pvalue_matrix(edfs, popts));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace rotatest::cli
