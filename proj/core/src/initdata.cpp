#include "bfamily/initdata.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "bfamily/spectral.hpp"

namespace bfam {

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Gaussian: return "Gaussian";
    case ProfileKind::OddGaussian: return "OddGaussian";
    case ProfileKind::OddCubicGaussian: return "OddCubicGaussian";
    case ProfileKind::EvenBumpZeroAtOrigin: return "EvenBumpZeroAtOrigin";
    case ProfileKind::FromM0: return "FromM0";
    case ProfileKind::CustomTable: return "CustomTable";
  }
  return "?";
}

std::optional<ProfileKind> parse_profile_kind(std::string_view text) {
  for (auto k : {ProfileKind::Gaussian, ProfileKind::OddGaussian, ProfileKind::OddCubicGaussian,
                 ProfileKind::EvenBumpZeroAtOrigin, ProfileKind::FromM0, ProfileKind::CustomTable}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

void InitSpec::validate() const {
  if (!std::isfinite(amplitude)) throw std::invalid_argument("amplitude must be finite");
  if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("width must be positive");
  if (!std::isfinite(center)) throw std::invalid_argument("center must be finite");
  if (kind == ProfileKind::FromM0) {
    if (!m0) throw std::invalid_argument("m0: FromM0 needs a nested m0 profile");
    m0->validate();
  }
  if (kind == ProfileKind::CustomTable && table_path.empty()) {
    throw std::invalid_argument("table: CustomTable needs a file path");
  }
}

namespace {

void check_decay(const Field& f, std::string_view what) {
  const double edge = std::max(std::abs(f[0]), std::abs(f[f.size() - 1]));
  if (!(edge <= 1e-12)) {
    std::ostringstream os;
    os << what << " does not decay at the boundary (|f(+-L)| = " << edge << " > 1e-12); enlarge L";
    throw std::invalid_argument(os.str());
  }
}

Field analytic(const InitSpec& s, const GridPtr& grid) {
  const double a = s.amplitude, w = s.width;
  switch (s.kind) {
    case ProfileKind::Gaussian:
      return Field::from_function(grid, [&](double x) {
        const double z = (x - s.center) / w;
        return a * std::exp(-z * z);
      });
    case ProfileKind::OddGaussian:
      return Field::from_function(grid, [&](double x) {
        const double z = x / w;
        return a * z * std::exp(-z * z);
      });
    case ProfileKind::OddCubicGaussian:
      return Field::from_function(grid, [&](double x) {
        const double z = x / w;
        return a * z * z * z * std::exp(-z * z);
      });
    case ProfileKind::EvenBumpZeroAtOrigin:
      return Field::from_function(grid, [&](double x) {
        const double z = x / w;
        return a * z * z * std::exp(-z * z);
      });
    default:
      break;
  }
  throw std::logic_error("not an analytic profile");
}

}  // namespace

Field build_profile(const InitSpec& spec, const GridPtr& grid) {
  spec.validate();
  switch (spec.kind) {
    case ProfileKind::FromM0:
      // An analytic m0 was decay-checked when built; tables are taken as given.
      return u_from_m0(build_profile(*spec.m0, grid));
    case ProfileKind::CustomTable:
      return read_table(spec.table_path, grid);
    default: {
      Field f = analytic(spec, grid);
      check_decay(f, std::string(to_string(spec.kind)) + " profile");
      return f;
    }
  }
}

State build_initial(const InitSpec& spec_u, const InitSpec& spec_rho, const GridPtr& grid) {
  return State{0.0, build_profile(spec_u, grid), build_profile(spec_rho, grid)};
}

Field read_table(const std::string& path, const GridPtr& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table " + path);
  std::vector<double> values;
  const double tol = 1e-9 * grid->dx();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream row(line);
    double x, v;
    if (!(row >> x >> v)) {
      if (values.empty()) continue;  // header
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    if (values.size() >= grid->size()) {
      throw std::invalid_argument(path + ": more rows than grid nodes (" + std::to_string(grid->size()) + ")");
    }
    if (std::abs(x - grid->node(values.size())) > tol) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": x does not match grid node " +
                                  std::to_string(values.size()));
    }
    values.push_back(v);
  }
  if (values.size() != grid->size()) {
    throw std::invalid_argument(path + ": " + std::to_string(values.size()) + " rows for " +
                                std::to_string(grid->size()) + " grid nodes");
  }
  return Field(grid, std::move(values));
}

double u0_prime_at_zero(const Field& m0) {
  const Grid& g = m0.grid();
  const std::size_t o = g.origin_index();
  const double h = g.dx();
  std::vector<double> f;
  f.reserve(g.size() - o);
  for (std::size_t j = o; j < g.size(); ++j) f.push_back(std::exp(-g.node(j)) * m0[j]);

  double sum = 0.5 * f.front();
  for (std::size_t j = 1; j < f.size(); ++j) sum += f[j];
  double integral = h * sum;

  // Forward differences at y = 0 for the Gregory end correction.
  std::vector<double> d(f.begin(), f.begin() + 6);
  double delta[6];
  for (int k = 0; k < 6; ++k) {
    delta[k] = d[0];
    for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
    d.pop_back();
  }
  integral += h * (delta[1] / 12.0 - delta[2] / 24.0 + 19.0 * delta[3] / 720.0 - 3.0 * delta[4] / 160.0 +
                   863.0 * delta[5] / 60480.0);
  return integral;
}

bool blowup_bound_applies(const ModelParams& p) { return p.k1 > 1.0 && p.k1 <= 3.0 && p.k2 >= 0.0; }

double blowup_bound(const ModelParams& p, double u0p0) {
  if (!(p.k1 > 1.0 && p.k1 <= 3.0)) throw std::domain_error("blowup_bound: needs 1 < k1 <= 3");
  if (!(u0p0 > 0.0)) throw std::domain_error("blowup_bound: needs u0'(0) > 0");
  return 2.0 / ((p.k1 - 1.0) * u0p0);
}

}  // namespace bfam
