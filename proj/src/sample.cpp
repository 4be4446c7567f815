#include "rotatest/sample.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace rotatest {

double TrialSample::max_covariate(int j) const {
  const auto xs = x(j);
  return *std::max_element(xs.begin(), xs.end());
}

int TrialSample::z(int j) const { return encode_lex(y(j)); }

int encode_lex(std::span<const std::uint8_t> y) {
  int code = 0;
  for (auto bit : y) {
    if (bit > 1) throw std::invalid_argument("encode_lex: outcomes must be 0 or 1");
    code = (code << 1) | bit;
  }
  return code + 1;
}

std::vector<std::uint8_t> decode_lex(int z, int m) {
  if (z < 1 || z > (1 << m)) throw std::invalid_argument("decode_lex: code out of range");
  std::vector<std::uint8_t> y(m);
  const int bits = z - 1;
  for (int i = 0; i < m; ++i) y[i] = static_cast<std::uint8_t>((bits >> (m - 1 - i)) & 1);
  return y;
}

TrialSample generate_sample(const ModelSpec& model, double theta, int n, int m, Stream& rng) {
  if (n < 1) throw std::invalid_argument("generate_sample: n must be positive");
  if (m < 1 || m > 3) throw std::invalid_argument("generate_sample: m must be 1, 2 or 3");
  TrialSample s;
  s.m = m;
  s.n = n;
  s.covariates.resize(static_cast<std::size_t>(n) * m);
  s.outcomes.resize(static_cast<std::size_t>(n) * m);
  std::uniform_real_distribution<double> covariate(0.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < s.covariates.size(); ++k) {
    const double x = covariate(rng);
    const double p_fail = evaluate_model(model, x, theta).p0;
    s.covariates[k] = x;
    s.outcomes[k] = unit(rng) < p_fail ? 0 : 1;
  }
  return s;
}

void write_sample_csv(std::ostream& os, const TrialSample& sample) {
  os << "subgroup,trial,covariate,outcome\n";
  os << std::setprecision(17);
  for (int j = 0; j < sample.n; ++j) {
    for (int i = 0; i < sample.m; ++i) {
      os << j + 1 << ',' << i + 1 << ',' << sample.x(j)[i] << ',' << int(sample.y(j)[i]) << '\n';
    }
  }
}

}  // namespace rotatest
