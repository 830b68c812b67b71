#include <cmath>

#include "doctest.h"
#include "hmd/errors.hpp"
#include "hmd/hypgamma.hpp"

using namespace hmd;

namespace {
const cplx kI(0, 1);
const ModularParam kReal(0.8);
const ModularParam kUnit(std::polar(1.0, M_PI / 6));
}  // namespace

TEST_CASE("b22 closed forms") {
  const cplx w1(1.3, 0.2), w2(0.7, -0.1);
  CHECK(std::abs(b22(0.5 * (w1 + w2), w1, w2) + (w1 * w1 + w2 * w2) / (12.0 * w1 * w2)) < 1e-14);
  CHECK(std::abs(b22(0.0, 1.0, 1.0) - 5.0 / 6.0) < 1e-14);
}

TEST_CASE("value at the reflection fixed point") {
  CHECK(std::abs(gamma_integral(-kReal.eta(), kReal) - 1.0) < 1e-12);
  CHECK(std::abs(gamma_integral(-kUnit.eta(), kUnit) - 1.0) < 1e-12);
  CHECK(std::abs(gamma2(1.0, 1.0, 1.0) - 1.0) < 1e-12);
}

TEST_CASE("shift equations inside the strip") {
  for (const ModularParam* p : {&kReal, &kUnit}) {
    for (cplx z : {cplx(0.2, 0.4), cplx(0.55, -1.1), cplx(0.1, 2.0)}) {
      const cplx g0 = gamma_integral(z, *p);
      const cplx gb = gamma_integral(z + p->b(), *p);
      const cplx gi = gamma_integral(z + p->binv(), *p);
      CHECK(std::abs(gb / g0 - 2.0 * std::sin(M_PI * p->b() * z)) < 1e-10 * std::abs(gb / g0));
      CHECK(std::abs(gi / g0 - 2.0 * std::sin(M_PI * p->binv() * z)) < 1e-10 * std::abs(gi / g0));
    }
  }
}

TEST_CASE("integral and product agree when |q| < 1") {
  for (cplx z : {cplx(0.35, 0.3), cplx(1.2, -0.4), cplx(0.6, 1.5)})
    CHECK(std::abs(gamma_product(z, kUnit) / gamma_integral(z, kUnit) - 1.0) < 1e-9);
  CHECK_THROWS_AS(gamma_product(0.5, kReal), RegimeError);
}

TEST_CASE("product form far from the real axis") {
  for (double y : {15.0, 20.0}) {
    const cplx up = gamma_product(cplx(0.3, y), kUnit), down = gamma_product(cplx(0.3, -y), kUnit);
    REQUIRE(std::isfinite(down.real()));
    CHECK(std::abs(down - std::conj(up)) < 1e-9 * std::abs(up));
  }
}

TEST_CASE("whole-plane evaluation, zeros and poles") {
  const cplx b = kReal.b(), bi = kReal.binv();
  CHECK(gamma(b + bi, kReal) == 0.0);
  CHECK_THROWS_AS(gamma(0.0, kReal), PoleError);
  try {
    gamma(-bi, kReal);
    FAIL("expected a pole");
  } catch (const PoleError& e) {
    CHECK(e.n() == 0);
    CHECK(e.m() == 1);
  }
  const cplx z(-1.7, 0.4);
  CHECK(std::abs(gamma(z, kReal) * gamma(kReal.big_q() - z, kReal) - 1.0) < 1e-10);
  CHECK(std::abs(gamma(z + b, kReal) - 2.0 * std::sin(M_PI * b * z) * gamma(z, kReal)) <
        1e-10 * std::abs(gamma(z + b, kReal)));
  CHECK_THROWS_AS(gamma_integral(-0.1, kReal), StripError);
}

TEST_CASE("lattice classification") {
  const cplx b = kReal.b(), bi = kReal.binv();
  const auto zero = classify_site(2.0 * b + bi, kReal, 1e-8);
  CHECK(zero.kind == LatticeSite::Kind::Zero);
  CHECK(zero.n == 1);
  CHECK(zero.m == 0);
  const auto pole = classify_site(-bi, kReal, 1e-8);
  CHECK(pole.kind == LatticeSite::Kind::Pole);
  CHECK(pole.m == 1);
  CHECK(classify_site(kReal.big_q() / 3.0, kReal, 1e-8).kind == LatticeSite::Kind::Regular);
}

TEST_CASE("modular invariance") {
  const cplx z(0.4, 0.25);
  CHECK(std::abs(gamma_integral(z, kReal) / gamma_integral(z, kReal.swapped()) - 1.0) < 1e-12);
}

TEST_CASE("normalization m(alpha)") {
  for (double a : {0.1, 0.2}) {
    CHECK(std::abs(m_norm(a, kReal) * m_norm(-a, kReal) - 1.0) < 1e-7);
    CHECK(std::abs(m_norm(a + kReal.eta(), kReal) / (gamma(2.0 * a, kReal) * m_norm(-a, kReal)) - 1.0) < 1e-6);
  }
  const cplx e2 = 0.5 * kReal.eta();
  CHECK(std::abs(free_energy_per_edge(e2, kReal) + 2.0 * std::log(m_norm(e2, kReal))) < 1e-9);
}
