#include <cmath>
#include <random>

#include "doctest.h"
#include "sprd/coercivity.hpp"

using namespace sprd;

namespace {

TransportNoise no_noise(int d = 3) { return zero_noise(make_grid(d, 4)); }

DiffusionTensor iso(int d, double nu, int ell = 1) {
  std::vector<double> v(ell, nu);
  return DiffusionTensor::isotropic(d, v);
}

CoercivitySpec box1(double lo, double hi, double zeta, std::size_t samples = 20000) {
  CoercivitySpec s;
  s.box = {{lo, hi}};
  s.zeta = zeta;
  s.samples = samples;
  return s;
}

ReactionModel ac(double theta_norm) { return build_model(AllenCahnParams{{theta_norm}}); }

ReactionModel poly(std::vector<double> f) { return build_model(PolynomialParams{f, {}, 1.0, 0.0}); }

}  // namespace

TEST_CASE("scalar pointwise") {
  auto spec = box1(-50, 50, 3.0);
  auto pass = check_scalar_pointwise(ac(0.99), no_noise(), iso(3, 1.0), spec);
  CHECK(pass.pass);
  CHECK(pass.worst_margin >= 0.0);
  auto failr = check_scalar_pointwise(ac(1.5), no_noise(), iso(3, 1.0), spec);
  CHECK_FALSE(failr.pass);
  CHECK(failr.worst_margin < 0.0);
  CHECK(std::abs(failr.worst_point[0]) > 45.0);

  auto zero = check_scalar_pointwise(poly({0.0}), no_noise(), iso(3, 1.0), spec);
  CHECK(zero.pass);
  CHECK(zero.fitted_M == 0.0);

  spec.epsilon = 1.0;
  CHECK_THROWS_AS(check_scalar_pointwise(ac(0.99), no_noise(), iso(3, 1.0), spec), Error);
  spec.epsilon = 1.5;
  CHECK_THROWS_AS(check_scalar_pointwise(ac(0.99), no_noise(), iso(3, 1.0), spec), Error);
}

TEST_CASE("fitted constant certifies fresh points") {
  // theta = 0.99: y^2/2 - 0.00995 y^4 has an interior maximum of the ratio.
  auto spec = box1(-50, 50, 3.0);
  auto model = ac(0.99);
  auto r = check_scalar_pointwise(model, no_noise(), iso(3, 1.0), spec);
  REQUIRE(r.pass);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-50.0, 50.0);
  int violations = 0;
  for (int s = 0; s < 1000000; ++s) {
    double y = U(rng);
    // Closed-form functional: y f/(zeta-1) + |theta|^2 y^4 / 2.
    double L = y * (y - y * y * y) / 2.0 + 0.99 * 0.99 * std::pow(y, 4) / 2.0;
    if (L - r.fitted_M * (y * y + 1.0) > 1e-9 * std::max(1.0, std::abs(L))) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("scalar smooth") {
  auto boundary = check_scalar_smooth(ac(1.0), no_noise(), iso(3, 1.0), box1(-50, 50, 3.0));
  CHECK(boundary.pass);
  // Remainder y^2/2 over 1 + y^2: sup at the box edge.
  CHECK(boundary.fitted_M == doctest::Approx(0.5 * 2500.0 / 2501.0).epsilon(1e-9));
  CHECK(check_scalar_smooth(poly({0.0, 1.0, -1.0}), no_noise(), iso(3, 1.0), box1(0, 50, 2.0)).pass);
  CHECK_FALSE(check_scalar_smooth(poly({0.0, 0.0, 0.0, 1.0}), no_noise(), iso(3, 1.0), box1(-50, 50, 2.0)).pass);

  // Monotonicity in zeta for a dissipative drift.
  auto m = poly({0.0, 1.0, 0.0, -1.0});
  for (double z : {2.0, 2.5, 3.0, 4.0, 6.0})
    CHECK(check_scalar_smooth(m, no_noise(), iso(3, 1.0), box1(-50, 50, z)).pass);
}

TEST_CASE("strong dissipativity") {
  auto r = check_strong_dissipativity(ac(1.0), box1(-50, 50, 2.0));
  CHECK(r.pass);
  CHECK(r.N0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.N1 == doctest::Approx(1.0).epsilon(1e-3));
  auto q = check_strong_dissipativity(poly({0, 0, 0, 0, 0, -1}), box1(-50, 50, 2.0));
  CHECK(q.pass);
  CHECK(q.N0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(check_strong_dissipativity(poly({0, 0, 0, 1}), box1(-50, 50, 2.0)).pass);
}

TEST_CASE("system") {
  CoercivitySpec s;
  s.box = {{0, 20}, {0, 20}};
  s.zeta = 2.0;
  s.samples = 20000;
  s.weights_alpha = {1.0, 1.0};
  CHECK(check_system(build_model(CoagulationParams{2, 0.0}), no_noise(), iso(3, 1.0, 2), s).pass);
  s.box = {{0, 50}, {0, 50}};
  CHECK(check_system(build_model(SymbioticLVParams{{0.5, 0.5}, {1.0, 1.0}, {0.3, 0.3}}), no_noise(),
                     iso(3, 1.0, 2), s).pass);
  auto bad = check_system(build_model(SymbioticLVParams{{0, 0}, {2.0, 2.0}, {0, 0}}), no_noise(),
                          iso(3, 1.0, 2), s);
  CHECK_FALSE(bad.pass);
  s.weights_alpha = {1.0, 0.0};
  CHECK_THROWS_AS(check_system(build_model(CoagulationParams{2, 0.0}), no_noise(), iso(3, 1.0, 2), s), Error);

  // ell = 1 agrees with the scalar check.
  for (double th : {0.5, 0.99, 1.2, 1.5}) {
    CoercivitySpec one = box1(-50, 50, 3.0);
    CHECK(check_system(ac(th), no_noise(), iso(3, 1.0), one).pass ==
          check_scalar_pointwise(ac(th), no_noise(), iso(3, 1.0), one).pass);
  }
}

TEST_CASE("growth envelope") {
  CoercivitySpec s;
  s.box = {{0, 50}, {0, 50}};
  s.samples = 20000;
  auto ok = build_model(BrusselatorParams{{0, 0, 0}, {0, 0, 0}, 0.38, 0.0, true});
  CHECK(check_growth_envelope(ok, EnvelopeId::Brusselator3d, no_noise(), iso(3, 1.0, 2), s).pass);
  auto over = build_model(BrusselatorParams{{0, 0, 0}, {0, 0, 0}, 0.5, 0.0, true});
  auto r = check_growth_envelope(over, EnvelopeId::Brusselator3d, no_noise(), iso(3, 1.0, 2), s);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.component_pass[0]);
  auto none = build_model(BrusselatorParams{{0, 0, 0}, {0, 0, 0}, 0.0, 0.0, true});
  auto z = check_growth_envelope(none, EnvelopeId::Brusselator3d, no_noise(), iso(3, 1.0, 2), s);
  CHECK(z.pass);
  CHECK(z.fitted_M == 0.0);
  CHECK(check_growth_envelope(build_model(LotkaVolterraParams{}), EnvelopeId::LotkaVolterra,
                              no_noise(), iso(3, 1.0, 2), s).pass);
  CHECK_THROWS_AS(parse_envelope("gray_scott_4d"), Error);
}

TEST_CASE("scale consistency") {
  for (double w : {50.0, 100.0, 200.0}) {
    CHECK(check_scalar_pointwise(ac(0.9), no_noise(), iso(3, 1.0), box1(-w, w, 3.0)).pass);
    CHECK_FALSE(check_scalar_pointwise(ac(1.1), no_noise(), iso(3, 1.0), box1(-w, w, 3.0)).pass);
  }
}

TEST_CASE("random coercivity shape") {
  auto a = check_random_coercivity_shape(3.0, 3, 3.0);
  CHECK(a.phi1 == 1.0);
  CHECK(a.psi1 == 1.5);
  CHECK(a.phi2 == doctest::Approx(2.0));
  auto b = check_random_coercivity_shape(2.0, 1, 2.0);
  CHECK(b.psi1 == 1.0);
  CHECK(b.phi2 == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS(check_random_coercivity_shape(2.0, 3, 1.5), Error);
}

TEST_CASE("noise enters the cross term") {
  auto g = make_grid(1, 8);
  auto noise = build_kraichnan_noise(g, 1, 0.0, 0.5);
  auto a = iso(1, 1.0);
  // theta = 0.9 passes without noise but the cross term adds
  // (0.5 * 0.9 y^2)^2 / (4 (nu - eps)) which tips it over.
  auto spec = box1(-50, 50, 3.0);
  CHECK(check_scalar_pointwise(ac(0.9), zero_noise(g), a, spec).pass);
  CHECK_FALSE(check_scalar_pointwise(ac(0.9), noise, a, spec).pass);
}
