#include "rotatest/io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rotatest {

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

void write_edf_csv(std::ostream& os, const EDFSample& edf, const Metadata& meta) {
  os << "# generator=" << edf.generator << '\n';
  os << "# fitted=" << edf.fitted << '\n';
  os << "# m=" << edf.m << '\n';
  os << "# replications=" << edf.values.size() << '\n';
  os << "# boundary_count=" << edf.boundary_count << '\n';
  os << "# failure_count=" << edf.failure_count << '\n';
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
  os << "ks\n";
  for (double v : edf.values) os << fmt(v) << '\n';
}

EDFSample read_edf_csv(std::istream& is) {
  EDFSample edf;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = line.substr(line.find_first_not_of("# "));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const auto key = body.substr(0, eq);
      const auto value = body.substr(eq + 1);
      if (key == "generator") edf.generator = value;
      if (key == "fitted") edf.fitted = value;
      if (key == "m") edf.m = std::stoi(value);
      if (key == "boundary_count") edf.boundary_count = std::stoul(value);
      if (key == "failure_count") edf.failure_count = std::stoul(value);
      continue;
    }
    if (!header_seen) {
      if (line != "ks") throw std::runtime_error("read_edf_csv: expected 'ks' header, got '" + line + "'");
      header_seen = true;
      continue;
    }
    edf.values.push_back(std::stod(line));
  }
  std::sort(edf.values.begin(), edf.values.end());
  return edf;
}

void write_pvalue_csv(std::ostream& os, const PValueMatrix& pv) {
  os << "model,m";
  for (std::size_t c = 1; c < pv.models.size(); ++c) os << ',' << pv.models[c];
  os << '\n';
  for (std::size_t r = 0; r + 1 < pv.models.size(); ++r) {
    for (int m : pv.m_values) {
      os << pv.models[r] << ',' << m;
      for (std::size_t c = 1; c < pv.models.size(); ++c) {
        os << ',';
        if (c <= r) continue;
        for (const auto& cell : pv.cells) {
          if (cell.row == pv.models[r] && cell.col == pv.models[c] && cell.m == m) {
            os << fmt(cell.p_value, "%.10g");
          }
        }
      }
      os << '\n';
    }
  }
}

nlohmann::json to_json(const PValueMatrix& pv) {
  nlohmann::json j;
  j["models"] = pv.models;
  j["m_values"] = pv.m_values;
  j["permutations"] = pv.permutations;
  j["convention"] = pv.convention == PValueConvention::Raw ? "raw" : "plus-one";
  auto cells = nlohmann::json::array();
  for (const auto& c : pv.cells) {
    cells.push_back({{"row", c.row}, {"col", c.col}, {"m", c.m}, {"p_value", c.p_value},
                     {"observed_distance", c.observed_distance}});
  }
  j["cells"] = std::move(cells);
  return j;
}

void write_plot_tsv(std::ostream& os, const std::vector<const EDFSample*>& series) {
  os << "model\tks\tcum_prob\n";
  for (const EDFSample* s : series) {
    const double reps = static_cast<double>(s->values.size());
    for (std::size_t i = 0; i < s->values.size(); ++i) {
      os << s->generator << '\t' << fmt(s->values[i]) << '\t' << fmt((i + 1) / reps) << '\n';
    }
  }
}

void write_plot_svg(std::ostream& os, const std::vector<const EDFSample*>& series, const std::string& title) {
  constexpr double W = 640, H = 400, L = 60, R = 20, T = 40, B = 50;
  double xmax = 0.0;
  for (const EDFSample* s : series) {
    if (!s->values.empty()) xmax = std::max(xmax, s->values.back());
  }
  if (xmax <= 0.0) xmax = 1.0;
  auto px = [&](double v) { return L + (W - L - R) * v / xmax; };
  auto py = [&](double f) { return H - B - (H - T - B) * f; };
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << W - R << "\" y2=\"" << py(0)
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << L << "\" y2=\"" << py(1)
     << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    os << "<text x=\"" << L - 8 << "\" y=\"" << py(f) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(f, "%.2f")
       << "</text>\n";
    const double v = xmax * f;
    os << "<text x=\"" << px(v) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << fmt(v, "%.2f") << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">KS statistic</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const EDFSample& s = *series[k];
    const char* colour = colours[k % std::size(colours)];
    const double reps = static_cast<double>(s.values.size());
    std::ostringstream path;
    path << "M" << fmt(px(0), "%.2f") << ',' << fmt(py(0), "%.2f");
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      path << " H" << fmt(px(s.values[i]), "%.2f") << " V" << fmt(py((i + 1) / reps), "%.2f");
    }
    os << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\"/>\n";
    os << "<text x=\"" << W - R - 110 << "\" y=\"" << py(0.3) + 16.0 * k << "\" font-size=\"12\" fill=\"" << colour
       << "\">" << s.generator << "</text>\n";
  }
  os << "</svg>\n";
}

nlohmann::json to_json(const RotationBundle& b) {
  nlohmann::json j;
  j["m"] = b.m;
  j["K"] = b.K;
  j["p"] = vector_json(b.p);
  j["M"] = matrix_json(b.M);
  j["Gamma"] = matrix_json(b.Gamma);
  j["ell"] = vector_json(b.ell);
  j["A"] = matrix_json(b.A);
  j["U"] = matrix_json(b.U);
  return j;
}

void write_surface_csv(std::ostream& os, const Eigen::MatrixXd& surface, int grid_points) {
  os << "x0,z0,value\n";
  for (Eigen::Index k = 0; k < surface.rows(); ++k) {
    const double x0 = 2.0 * static_cast<double>(k + 1) / grid_points;
    for (Eigen::Index z = 0; z < surface.cols(); ++z) {
      os << fmt(x0) << ',' << z + 1 << ',' << fmt(surface(k, z)) << '\n';
    }
  }
}

void write_model_curves_tsv(std::ostream& os, const std::vector<ModelSpec>& models, int points) {
  os << 'x';
  for (const auto& m : models) os << '\t' << m.name;
  os << '\n';
  for (int k = 0; k <= points; ++k) {
    const double x = 2.0 * k / points;
    os << fmt(x, "%.6g");
    for (const auto& m : models) os << '\t' << fmt(evaluate_model(m, x, m.theta0).p0, "%.10g");
    os << '\n';
  }
}

}  // namespace rotatest
