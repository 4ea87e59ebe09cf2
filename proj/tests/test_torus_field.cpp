#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sprd/snapshot_io.hpp"
#include "sprd/spectral.hpp"
#include "sprd/torus_field.hpp"

using namespace sprd;
using std::numbers::pi;

namespace {

// Brute-force midpoint quadrature on [0,1) with m points.
template <class F>
double quad1(F fn, int m) {
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += fn((i + 0.5) / m);
  return s / m;
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Field random_smooth(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  double c[4][3];
  for (auto& row : c)
    for (double& v : row) v = N(rng);
  return sample_field(g, [&](std::span<const double> x) {
    double s = 0.0;
    for (int k = 1; k <= 4; ++k)
      for (std::size_t j = 0; j < x.size(); ++j)
        s += c[k - 1][j] * std::sin(2 * pi * k * x[j] + 0.3 * j) / k;
    return s;
  });
}

}  // namespace

TEST_CASE("make_grid") {
  auto g = make_grid(1, 8);
  CHECK(g.cells() == 8);
  CHECK(g.spacing() == doctest::Approx(0.125));
  CHECK(make_grid(3, 16).cells() == 4096);
  CHECK_THROWS_AS(make_grid(2, 6), Error);
  CHECK_THROWS_AS(make_grid(4, 8), Error);
  CHECK_THROWS_AS(make_grid(1, 2), Error);
}

TEST_CASE("gradient of trigonometric polynomials") {
  auto g1 = make_grid(1, 32);
  auto u = sample_field(g1, [](auto x) { return std::sin(2 * pi * x[0]); });
  auto du = gradient(u);
  auto ex = sample_field(g1, [](auto x) { return 2 * pi * std::cos(2 * pi * x[0]); });
  CHECK(max_diff(du[0], ex) <= 1e-12 * 2 * pi);

  auto c = Field(g1, 3.0);
  CHECK(gradient(c)[0].max_abs() <= 1e-14);

  auto g2 = make_grid(2, 16);
  auto v = sample_field(g2, [](auto x) { return std::sin(2 * pi * x[0]) + std::cos(4 * pi * x[1]); });
  auto dv = gradient(v);
  auto e0 = sample_field(g2, [](auto x) { return 2 * pi * std::cos(2 * pi * x[0]); });
  auto e1 = sample_field(g2, [](auto x) { return -4 * pi * std::sin(4 * pi * x[1]); });
  CHECK(max_diff(dv[0], e0) <= 1e-11);
  CHECK(max_diff(dv[1], e1) <= 1e-11);

  Field bad(g1, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(gradient(bad), Error);
}

TEST_CASE("divergence") {
  auto g1 = make_grid(1, 32);
  auto u = sample_field(g1, [](auto x) { return std::sin(2 * pi * x[0]); });
  auto lap = divergence(gradient(u));
  auto ex = sample_field(g1, [](auto x) { return -4 * pi * pi * std::sin(2 * pi * x[0]); });
  CHECK(max_diff(lap, ex) <= 1e-10);

  auto g2 = make_grid(2, 16);
  VectorField shear{sample_field(g2, [](auto x) { return std::cos(2 * pi * x[1]); }), Field(g2, 0.0)};
  CHECK(divergence(shear).max_abs() <= 1e-12);
  VectorField constant{Field(g2, 1.0), Field(g2, -2.0)};
  CHECK(divergence(constant).max_abs() <= 1e-12);

  VectorField mixed{Field(g2, 1.0), Field(make_grid(2, 8), 1.0)};
  CHECK_THROWS_AS(divergence(mixed), Error);
}

TEST_CASE("norms and functionals") {
  auto g = make_grid(1, 64);
  CHECK(lzeta_norm(Field(g, 2.0), 3.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lzeta_norm(Field(g, 0.0), 2.0) == 0.0);
  auto s = sample_field(g, [](auto x) { return std::sin(2 * pi * x[0]); });
  CHECK(std::abs(lzeta_norm(s, 2.0) - std::sqrt(quad1([](double x) { return std::pow(std::sin(2 * pi * x), 2); }, 4096))) <= 1e-12);
  CHECK(std::abs(lzeta_norm(s, 2.0) - std::sqrt(0.5)) <= 1e-12);
  CHECK_THROWS_AS(lzeta_norm(s, 1.5), Error);

  CHECK(dissipation_integral(Field(g, 5.0), 3.0) == doctest::Approx(0.0));
  double oracle2 = quad1([](double x) { return std::pow(2 * pi * std::cos(2 * pi * x), 2); }, 512);
  CHECK(std::abs(dissipation_integral(s, 2.0) - oracle2) <= 1e-10);
  CHECK(std::abs(dissipation_integral(s, 2.0) - 2 * pi * pi) <= 1e-10);

  // zeta = 4 against midpoint quadrature of the closed form at 512 points.
  auto g512 = make_grid(1, 512);
  auto s512 = sample_field(g512, [](auto x) { return std::sin(2 * pi * x[0]); });
  double oracle4 = 0.0;
  for (int i = 0; i < 512; ++i) {
    double x = i / 512.0;
    oracle4 += std::pow(std::sin(2 * pi * x), 2) * std::pow(2 * pi * std::cos(2 * pi * x), 2);
  }
  oracle4 /= 512;
  CHECK(std::abs(dissipation_integral(s512, 4.0) - oracle4) <= 1e-8);
  CHECK(std::abs(dissipation_integral(s, 4.0) - pi * pi / 2) <= 1e-8);
}

TEST_CASE("transform properties") {
  for (int d = 1; d <= 3; ++d) {
    auto g = make_grid(d, d == 3 ? 8 : 32);
    auto u = random_smooth(g, 7 + d);
    auto back = inverse(forward(u));
    CHECK(max_diff(u, back) <= 1e-12 * (1.0 + u.max_abs()));

    double phys = lzeta_power(u, 2.0);
    CHECK(std::abs(phys - spectral_l2_squared(u)) <= 1e-12 * phys);

    auto v = random_smooth(g, 99);
    auto lin = gradient(2.5 * u + (-1.5) * v);
    auto gu = gradient(u), gv = gradient(v);
    for (int j = 0; j < d; ++j) {
      Field comb = 2.5 * gu[j] + (-1.5) * gv[j];
      CHECK(max_diff(lin[j], comb) <= 1e-13 * (1.0 + comb.max_abs()));
    }

    double grad_sq = 0.0;
    for (const auto& c : gu) grad_sq += lzeta_power(c, 2.0);
    CHECK(std::abs(dissipation_integral(u, 2.0) - grad_sq) <= 1e-12 * grad_sq);

    CHECK(std::abs(lzeta_norm(-3.0 * u, 3.0) - 3.0 * lzeta_norm(u, 3.0)) <=
          1e-13 * lzeta_norm(u, 3.0) * 3.0 + 1e-15);
  }
}

TEST_CASE("snapshot round trip") {
  auto g = make_grid(2, 8);
  auto u = random_smooth(g, 3);
  auto dir = std::filesystem::temp_directory_path() / "sprd_snapshot_test";
  std::filesystem::create_directories(dir);
  write_snapshot(dir / "u", u, {2, 8, 1, 0.25, 0});
  SnapshotMeta meta;
  auto r = read_snapshot(dir / "u", &meta);
  CHECK(meta.time == 0.25);
  CHECK(meta.n == 8);
  CHECK(max_diff(u, r) == 0.0);
  std::filesystem::remove_all(dir);
}
