#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sprd/noise.hpp"

using namespace sprd;
using std::numbers::pi;

namespace {

// Smallest eigenvalue of a symmetric 2x2 matrix, closed form.
double min_eig2(double a, double b, double c) {
  return 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
}

}  // namespace

TEST_CASE("Brownian increments: moments and determinism") {
  const std::size_t modes = 1000;
  const double dt = 0.01;
  BrownianDriver drv(modes, 42, 3);
  double s = 0.0, s2 = 0.0;
  const std::size_t steps = 1000;
  for (std::size_t k = 0; k < steps; ++k) {
    auto inc = drv.sample_increments(k, dt);
    REQUIRE(inc.size() == modes);
    for (double v : inc) {
      s += v;
      s2 += v * v;
    }
  }
  const double n = static_cast<double>(modes * steps);
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean) <= 4.0 * std::sqrt(dt / n));
  CHECK(std::abs(var - dt) <= 0.01 * dt);

  BrownianDriver again(modes, 42, 3), other(modes, 42, 4);
  CHECK(drv.sample_increments(17, dt) == again.sample_increments(17, dt));
  CHECK(drv.sample_increments(17, dt) != other.sample_increments(17, dt));
  CHECK_THROWS_AS(drv.sample_increments(0, 0.0), Error);
  CHECK_THROWS_AS(drv.sample_increments(0, -1.0), Error);
}

TEST_CASE("Kraichnan construction") {
  auto g2 = make_grid(2, 16);
  auto zero = build_kraichnan_noise(g2, 4, 0.5, 0.0);
  for (const auto& b : zero.fields_b)
    for (const auto& c : b) CHECK(c.max_abs() == 0.0);

  for (int d : {2, 3}) {
    auto g = make_grid(d, d == 2 ? 16 : 8);
    auto noise = build_kraichnan_noise(g, 8, 0.4, 1.0);
    CHECK(noise.divergence_free);
    CHECK(max_divergence(noise) <= 1e-10);
  }

  auto g1 = make_grid(1, 16);
  auto one = build_kraichnan_noise(g1, 1, 0.3, 0.7);
  REQUIRE(one.n_modes() == 1);
  for (std::size_t p = 0; p < g1.cells(); ++p) CHECK(one.fields_b[0][0][p] == doctest::Approx(0.7));
  CHECK(sup_square_sum(one) == doctest::Approx(0.49));

  CHECK_THROWS_AS(build_kraichnan_noise(g1, 100, 0.3, 1.0), Error);
  CHECK_THROWS_AS(build_kraichnan_noise(g1, 0, 0.3, 1.0), Error);
  CHECK_THROWS_AS(build_kraichnan_noise(g1, 1, 0.3, -1.0), Error);
}

TEST_CASE("ellipticity margin") {
  auto g1 = make_grid(1, 8);
  std::vector<double> nu{0.3};
  auto a1 = DiffusionTensor::isotropic(1, nu);
  CHECK(ellipticity_margin(a1, zero_noise(g1), 0) == doctest::Approx(0.3));
  auto beta = build_kraichnan_noise(g1, 1, 0.0, 0.5);
  CHECK(ellipticity_margin(a1, beta, 0) == doctest::Approx(0.3 - 0.125));

  // d = 2, single divergence-free mode normalised to sup |b| = 1.
  auto g2 = make_grid(2, 32);
  auto raw = build_kraichnan_noise(g2, 1, 0.0, 1.0);
  double sup = std::sqrt(sup_square_sum(raw));
  VectorField b = raw.fields_b[0];
  for (auto& c : b) c *= 1.0 / sup;
  auto noise = noise_from_fields(g2, {b});
  std::vector<double> one{1.0};
  auto a2 = DiffusionTensor::isotropic(2, one);
  double oracle = 1e300, net = 1e300;
  for (std::size_t p = 0; p < g2.cells(); ++p) {
    double bx = b[0][p], by = b[1][p];
    oracle = std::min(oracle, min_eig2(1 - 0.5 * bx * bx, -0.5 * bx * by, 1 - 0.5 * by * by));
    for (int t = 0; t < 720; ++t) {
      double c = std::cos(pi * t / 720), s = std::sin(pi * t / 720);
      net = std::min(net, 1.0 - 0.5 * (bx * c + by * s) * (bx * c + by * s));
    }
  }
  double m = ellipticity_margin(a2, noise, 0);
  CHECK(std::abs(m - oracle) <= 1e-10);
  CHECK(std::abs(m - 0.5) <= 1e-10);
  CHECK(net >= m - 1e-12);
  CHECK(net - m <= 1e-5);

  // Monotone in amplitude.
  double prev = 1e300;
  for (double amp : {0.0, 0.2, 0.5, 1.0, 1.3}) {
    double mm = ellipticity_margin(a2, build_kraichnan_noise(g2, 6, 0.3, amp), 0);
    CHECK(mm <= prev + 1e-15);
    prev = mm;
  }
}

TEST_CASE("calibrated noise satisfies the Kraichnan bound") {
  for (int d = 1; d <= 3; ++d) {
    auto g = make_grid(d, d == 3 ? 8 : 16);
    auto noise = calibrate_kraichnan_noise(g, d == 1 ? 4 : 8, 0.5, 0.4);
    CHECK(kraichnan_bound_margin(noise, 0.4) >= 0.0);
    CHECK(sup_square_sum(noise) <= 0.8);
    CHECK(sup_square_sum(noise) >= 0.8 * (1 - 1e-9));
  }
}

TEST_CASE("Stratonovich correction") {
  auto g1 = make_grid(1, 8);
  auto z = stratonovich_correction(zero_noise(g1), 0);
  CHECK(z.at(0, 0).max_abs() == 0.0);
  auto c1 = stratonovich_correction(build_kraichnan_noise(g1, 1, 0.0, 0.6), 0);
  CHECK(c1.at(0, 0)[3] == doctest::Approx(0.18));

  auto g2 = make_grid(2, 16);
  auto noise = build_kraichnan_noise(g2, 1, 0.2, 1.0);
  auto t = stratonovich_correction(noise, 0);
  const auto& b = noise.fields_b[0];
  for (std::size_t p = 0; p < g2.cells(); ++p) {
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) CHECK(std::abs(t.at(j, k)[p] - 0.5 * b[j][p] * b[k][p]) <= 1e-12);
    CHECK(min_eig2(t.at(0, 0)[p], t.at(0, 1)[p], t.at(1, 1)[p]) >= -1e-12);
  }

  VectorField bad{sample_field(g2, [](auto x) { return std::sin(2 * pi * x[0]); }), Field(g2, 0.0)};
  auto nd = noise_from_fields(g2, {bad});
  CHECK_FALSE(nd.divergence_free);
  CHECK_THROWS_AS(stratonovich_correction(nd, 0), Error);
}

TEST_CASE("apply_transport") {
  auto g1 = make_grid(1, 32);
  auto noise = build_kraichnan_noise(g1, 1, 0.0, 1.0);
  auto u = sample_field(g1, [](auto x) { return std::sin(2 * pi * x[0]); });
  std::vector<double> half{0.5}, zero{0.0};
  auto r = apply_transport(noise, u, half);
  for (std::size_t p = 0; p < g1.cells(); ++p)
    CHECK(std::abs(r[p] - pi * std::cos(2 * pi * g1.coords(p)[0])) <= 1e-12);
  CHECK(apply_transport(noise, u, zero).max_abs() == 0.0);
  CHECK(apply_transport(noise, Field(g1, 2.0), half).max_abs() <= 1e-14);
  std::vector<double> two{0.1, 0.2};
  CHECK_THROWS_AS(apply_transport(noise, u, two), Error);

  auto g2 = make_grid(2, 16);
  auto n2 = build_kraichnan_noise(g2, 4, 0.3, 1.0);
  auto v = sample_field(g2, [](auto x) { return std::cos(2 * pi * (x[0] + 2 * x[1])); });
  auto w = sample_field(g2, [](auto x) { return std::sin(4 * pi * x[1]); });
  std::vector<double> i1{0.1, -0.2, 0.3, 0.05}, i2{-0.4, 0.1, 0.0, 0.2}, i12(4);
  for (int k = 0; k < 4; ++k) i12[k] = i1[k] + 2.0 * i2[k];
  auto lhs = apply_transport(n2, v, i12);
  auto rhs = apply_transport(n2, v, i1) + 2.0 * apply_transport(n2, v, i2);
  auto lhs_u = apply_transport(n2, 3.0 * v + w, i1);
  auto rhs_u = 3.0 * apply_transport(n2, v, i1) + apply_transport(n2, w, i1);
  for (std::size_t p = 0; p < g2.cells(); ++p) {
    CHECK(std::abs(lhs[p] - rhs[p]) <= 1e-12);
    CHECK(std::abs(lhs_u[p] - rhs_u[p]) <= 1e-12);
  }
}
