#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "rotatest/montecarlo.hpp"
#include "rotatest/permtest.hpp"
#include "rotatest/rotation.hpp"

namespace rotatest {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// "# key=value" rows, then a "ks" header and one value per line.
void write_edf_csv(std::ostream& os, const EDFSample& edf, const Metadata& meta);
// Reads what write_edf_csv produced. Generator, fitted model and m are taken
// from the metadata rows when present.
EDFSample read_edf_csv(std::istream& is);

// Table layout: one row per (row model, m), one column per later model.
void write_pvalue_csv(std::ostream& os, const PValueMatrix& pv);
nlohmann::json to_json(const PValueMatrix& pv);

// Long format "model<TAB>ks<TAB>cum_prob", one series per EDF, i/reps.
void write_plot_tsv(std::ostream& os, const std::vector<const EDFSample*>& series);
// Static step plot of the same series.
void write_plot_svg(std::ostream& os, const std::vector<const EDFSample*>& series, const std::string& title);

nlohmann::json to_json(const RotationBundle& bundle);

// Columns x0,z0,value.
void write_surface_csv(std::ostream& os, const Eigen::MatrixXd& surface, int grid_points);

// Failure probability of each model at theta0 on a covariate grid.
void write_model_curves_tsv(std::ostream& os, const std::vector<ModelSpec>& models, int points);

}  // namespace rotatest
