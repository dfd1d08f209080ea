#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bfamily/initdata.hpp"
#include "bfamily/spectral.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bfam;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

InitSpec profile(ProfileKind kind, double a = 1.0, double w = 1.0) {
  InitSpec s;
  s.kind = kind;
  s.amplitude = a;
  s.width = w;
  return s;
}

double parity_res(const Field& f, double sign) {
  const auto& g = f.grid();
  double r = 0.0;
  for (std::size_t j = 1; j < g.size(); ++j) r = std::max(r, std::abs(f[j] - sign * f[g.mirror_index(j)]));
  return r;
}

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& name)
      : path(fs::temp_directory_path() / ("bfamily_test_" + std::to_string(::getpid()) + "_" + name)) {}
  ~TempFile() {
    std::error_code ec;
    fs::remove(path, ec);
  }
};

void write_table(const fs::path& p, const GridPtr& g, const std::function<double(double)>& f, const std::string& header,
                 char sep = ' ') {
  std::ofstream out(p);
  out << header;
  out.precision(17);
  for (std::size_t j = 0; j < g->size(); ++j) out << g->node(j) << sep << f(g->node(j)) << "\n";
}

}  // namespace

TEST_SUITE("initdata") {

TEST_CASE("symmetric profiles") {
  const auto g = make_grid(12.0, 512);
  const auto u = build_profile(profile(ProfileKind::OddGaussian), g);
  const auto rho = build_profile(profile(ProfileKind::EvenBumpZeroAtOrigin), g);
  const auto cubic = build_profile(profile(ProfileKind::OddCubicGaussian, 2.0), g);
  CHECK(parity_res(u, -1.0) == 0.0);
  CHECK(parity_res(cubic, -1.0) == 0.0);
  CHECK(parity_res(rho, +1.0) == 0.0);
  CHECK(u[g->origin_index()] == 0.0);
  CHECK(rho[g->origin_index()] == 0.0);

  const auto ux = derivative(u, 1);
  CHECK(ux[g->origin_index()] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(derivative(cubic, 1)[g->origin_index()]) <= 1e-12);

  auto wide = profile(ProfileKind::OddGaussian, 3.0, 1.5);
  CHECK(derivative(build_profile(wide, g), 1)[g->origin_index()] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Gaussian honours its center") {
  const auto g = make_grid(20.0, 256);
  auto s = profile(ProfileKind::Gaussian, 0.5, 2.0);
  s.center = 1.25;
  const auto f = build_profile(s, g);
  for (std::size_t j = 0; j < g->size(); ++j) {
    const double z = (g->node(j) - 1.25) / 2.0;
    CHECK(f[j] == doctest::Approx(0.5 * std::exp(-z * z)));
  }
}

TEST_CASE("profiles must decay at the boundary") {
  const auto g = make_grid(3.0, 64);
  CHECK_THROWS_AS(build_profile(profile(ProfileKind::Gaussian), g), std::invalid_argument);
  InitSpec nested = profile(ProfileKind::FromM0);
  nested.m0 = std::make_shared<InitSpec>(profile(ProfileKind::OddGaussian));
  CHECK_THROWS_AS(build_profile(nested, g), std::invalid_argument);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(profile(ProfileKind::Gaussian, 1.0, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(profile(ProfileKind::Gaussian, NAN, 1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(profile(ProfileKind::FromM0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(profile(ProfileKind::CustomTable).validate(), std::invalid_argument);
  CHECK_NOTHROW(profile(ProfileKind::EvenBumpZeroAtOrigin, -2.0, 0.5).validate());
  for (auto k : {ProfileKind::Gaussian, ProfileKind::OddGaussian, ProfileKind::OddCubicGaussian,
                 ProfileKind::EvenBumpZeroAtOrigin, ProfileKind::FromM0, ProfileKind::CustomTable})
    CHECK(parse_profile_kind(to_string(k)) == k);
  CHECK_FALSE(parse_profile_kind("Peakon").has_value());
}

TEST_CASE("momentum-driven construction") {
  const auto g = make_grid(20.0, 1024);
  InitSpec s = profile(ProfileKind::FromM0);
  s.m0 = std::make_shared<InitSpec>(profile(ProfileKind::OddGaussian, 1.0, 1.0));
  const auto u = build_profile(s, g);
  const auto m0 = build_profile(*s.m0, g);
  CHECK(testing::max_abs_diff(momentum(u).values(), m0.values()) <= 1e-10 * testing::sup(m0.values()));
  CHECK(parity_res(u, -1.0) <= 1e-16);
}

TEST_CASE("momentum table on a periodic eigenfunction") {
  const auto g = make_grid(pi, 64);
  TempFile table("m0_sin.txt");
  write_table(table.path, g, [](double x) { return 2.0 * std::sin(x); }, "x value\n");
  InitSpec s = profile(ProfileKind::FromM0);
  auto m0 = profile(ProfileKind::CustomTable);
  m0.table_path = table.path.string();
  s.m0 = std::make_shared<InitSpec>(m0);
  const auto u = build_profile(s, g);
  for (std::size_t j = 0; j < g->size(); ++j) CHECK(std::abs(u[j] - std::sin(g->node(j))) <= 1e-13);
}

TEST_CASE("table reader") {
  const auto g = make_grid(2.0, 16);
  auto f = [](double x) { return x * x; };

  TempFile csv("ok.csv");
  write_table(csv.path, g, f, "# comment\nx,value\n", ',');
  const auto t = read_table(csv.path.string(), g);
  for (std::size_t j = 0; j < g->size(); ++j) CHECK(t[j] == doctest::Approx(f(g->node(j))));

  const auto coarse = make_grid(2.0, 32);
  CHECK_THROWS_AS(read_table(csv.path.string(), coarse), std::invalid_argument);
  const auto wider = make_grid(2.5, 16);
  CHECK_THROWS_AS(read_table(csv.path.string(), wider), std::invalid_argument);

  TempFile shortf("short.txt");
  {
    std::ofstream out(shortf.path);
    out << g->node(0) << " 1\n" << g->node(1) << " 2\n";
  }
  CHECK_THROWS_AS(read_table(shortf.path.string(), g), std::invalid_argument);

  TempFile bad("bad.txt");
  {
    std::ofstream out(bad.path);
    out << g->node(0) << " 1\nnot numbers\n";
  }
  CHECK_THROWS_AS(read_table(bad.path.string(), g), std::invalid_argument);

  CHECK_THROWS_AS(read_table("/nonexistent/table.txt", g), std::runtime_error);

  // Tables are used as given, without the decay check.
  TempFile flat("flat.txt");
  write_table(flat.path, g, [](double) { return 1.0; }, "");
  auto spec = profile(ProfileKind::CustomTable);
  spec.table_path = flat.path.string();
  CHECK_NOTHROW(build_profile(spec, g));
}

TEST_CASE("u0'(0) from the momentum") {
  const auto g = make_grid(20.0, 1024);
  CHECK(u0_prime_at_zero(Field(g)) == 0.0);

  auto m0 = [](double y) { return y * std::exp(-y * y); };
  const double ref = oracle::adaptive_simpson([&](double y) { return std::exp(-y) * m0(y); }, 0.0, 40.0, 1e-14);
  const auto m = testing::sample(g, m0);
  const double q = u0_prime_at_zero(m);
  CHECK(std::abs(q - ref) <= 1e-8);
  CHECK(q >= 0.0);

  // Same value through the velocity: u0'(0) = (p * m0)'(0).
  const double via_u = derivative(u_from_m0(m), 1)[g->origin_index()];
  CHECK(std::abs(via_u - q) <= 1e-6);

  // Odd m0 with negative weight near the origin.
  const auto neg = testing::sample(g, [](double y) { return -y * std::exp(-y * y); });
  CHECK(u0_prime_at_zero(neg) == doctest::Approx(-q));

  for (std::size_t n : {2048u, 4096u}) {
    const auto gg = make_grid(20.0, n);
    CHECK(std::abs(u0_prime_at_zero(testing::sample(gg, m0)) - ref) <= 1e-8);
  }
  // Coarser grids: the end correction leaves a high-order remainder.
  const double e256 = std::abs(u0_prime_at_zero(testing::sample(make_grid(20.0, 256), m0)) - ref);
  const double e512 = std::abs(u0_prime_at_zero(testing::sample(make_grid(20.0, 512), m0)) - ref);
  CHECK(e256 / e512 >= 16.0);
}

TEST_CASE("blow-up time bound") {
  CHECK(blowup_bound(make_params(CaseTag::CaseI, 2.0), 1.0) == 2.0);
  CHECK(blowup_bound(ModelParams::custom(3.0, 2.0, 2.0), 0.5) == 2.0);
  CHECK(blowup_bound(ModelParams::custom(1.5, 3.0, 1.0), 4.0) == 1.0);
  CHECK_THROWS_AS(blowup_bound(ModelParams::custom(1.0, 0, 1), 1.0), std::domain_error);
  CHECK_THROWS_AS(blowup_bound(ModelParams::custom(3.5, 0, 1), 1.0), std::domain_error);
  CHECK_THROWS_AS(blowup_bound(make_params(CaseTag::CaseI, 2.0), 0.0), std::domain_error);

  CHECK(blowup_bound_applies(make_params(CaseTag::CaseI, 3.0)));
  CHECK_FALSE(blowup_bound_applies(make_params(CaseTag::CaseI, 1.0)));
  CHECK_FALSE(blowup_bound_applies(ModelParams::custom(2.0, -1.0, 1.0)));
}

}
