#include <cmath>

#include "doctest.h"
#include "hmd/errors.hpp"
#include "hmd/weights.hpp"

using namespace hmd;

namespace {
const ModularParam kReal(0.8);
}

TEST_CASE("regimes") {
  CHECK(classify_regime(kReal) == Regime::RealB);
  CHECK(classify_regime(ModularParam(std::polar(1.0, M_PI / 5))) == Regime::UnitCircleB);
  CHECK(classify_regime(ModularParam(cplx(0.8, 0.3))) == Regime::Outside);
  CHECK(w_rapidity_in_window(0.1, kReal));
  CHECK_FALSE(w_rapidity_in_window(1.2, kReal));
}

TEST_CASE("edge weights are real and positive in the real regime") {
  const cplx w = weight_w(0.1, 0.3, -0.2, kReal);
  CHECK(w.real() > 0.0);
  CHECK(std::abs(w.imag()) < 1e-12 * w.real());
  CHECK(std::abs(weight_w(0.1, -0.3, -0.2, kReal) - w) < 1e-12 * std::abs(w));
  const cplx r = rho(0.37, kReal);
  CHECK(r.real() > 0.0);
  CHECK(std::abs(rho(0.37, kReal, RhoMode::GammaForm) / r - 1.0) < 1e-10);
}

TEST_CASE("crossing relates the two weights") {
  const cplx a(0.13, 0.02);
  CHECK(std::abs(weight_wbar(a, 0.2, 0.1, kReal) - weight_w(kReal.eta() - a, 0.2, 0.1, kReal)) < 1e-12);
}

TEST_CASE("chi depends on differences only") {
  const cplx c1 = chi(0.1, 0.25, 0.4, kReal), c2 = chi(0.3, 0.45, 0.6, kReal);
  CHECK(std::abs(c1 / c2 - 1.0) < 1e-10);
  CHECK_THROWS_AS(chi(0.1, 0.1, 0.4, kReal), PoleError);
}

TEST_CASE("star-triangle relation") {
  CHECK(check_star_triangle(0.0, 0.3, 0.6, 0.2, -0.3, 0.4, kReal) < 1e-6);
  CHECK(check_star_triangle(0.0, 0.3, 0.6, -0.2, -0.3, 0.4, kReal) < 1e-6);
  CHECK_THROWS_AS(check_star_triangle(0.3, 0.0, 0.6, 0.2, -0.3, 0.4, kReal), DomainError);
}

TEST_CASE("beta integral for the symmetric sextet") {
  BalancedSextet s;
  for (auto& g : s.g) g = -2.0 * kReal.eta() / 6.0;
  CHECK(check_beta_integral(s, kReal) < 1e-6);
  s.g[0] += 0.01;
  CHECK_THROWS_AS(s.validate(kReal), InvariantError);
}

TEST_CASE("square-cell kernel symmetries") {
  const cplx k = r_kernel(0.1, 0.05, -0.1, 0.02, 0.2, -0.1, 0.3, 0.15, kReal);
  CHECK(std::abs(r_kernel(0.1, 0.05, -0.1, 0.02, 0.2, -0.1, -0.3, 0.15, kReal) - k) < 1e-12 * std::abs(k));
  CHECK(std::abs(r_kernel(0.1, 0.05, -0.1, 0.02, 0.2, -0.1, 0.3, -0.15, kReal) - k) < 1e-12 * std::abs(k));
  CHECK(std::abs(s_operator(0.1, 0.2, -0.1, kReal) - weight_w(0.1, 0.2, -0.1, kReal)) == 0.0);
}
