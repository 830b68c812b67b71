#include <cmath>

#include "doctest.h"
#include "hmd/errors.hpp"
#include "hmd/quadrature.hpp"

using namespace hmd;

TEST_CASE("gaussian on the real line") {
  const auto r = integrate_decaying([](cplx x) { return std::exp(-x * x); }, Contour::real_line(), 1e-12);
  CHECK(std::abs(r.value - std::sqrt(M_PI)) < 1e-12);
  CHECK(r.panels_used > 0);
}

TEST_CASE("algebraic tails") {
  const auto r = integrate_decaying([](cplx x) { return 1.0 / (x * x + 1.0); }, Contour::real_line(), 1e-10);
  CHECK(std::abs(r.value - M_PI) < 1e-10);
  const auto s = integrate_decaying([](cplx x) { return 1.0 / (x * x + 1.0); }, Contour::shifted_line(0.5), 1e-10);
  CHECK(std::abs(s.value - M_PI) < 1e-10);
  CHECK_THROWS_AS(integrate_decaying([](cplx x) { return 1.0 / (std::abs(x) + 1.0); }, Contour::real_line(), 1e-8),
                  NonConvergence);
}

TEST_CASE("detour above the origin picks up half a residue") {
  // e^{-t^2}/t: the principal value vanishes by oddness, the half circle above gives -i pi.
  const auto r = integrate_decaying([](cplx t) { return std::exp(-t * t) / t; },
                                    Contour::detour_above_origin(0.5), 1e-11);
  CHECK(std::abs(r.value - cplx(0, -M_PI)) < 1e-10);
}

TEST_CASE("shifted line reproduces the real line for an entire integrand") {
  auto f = [](cplx x) { return std::exp(-x * x) * std::cos(x); };
  const auto a = integrate_decaying(f, Contour::real_line(), 1e-12);
  const auto b = integrate_decaying(f, Contour::shifted_line(0.3), 1e-12);
  CHECK(std::abs(a.value - b.value) < 1e-11);
  CHECK(std::abs(a.value - std::sqrt(M_PI) * std::exp(-0.25)) < 1e-11);
}

TEST_CASE("two dimensional integrals") {
  const auto c = Contour::real_line();
  const auto g = integrate_2d_decaying([](cplx x, cplx y) { return std::exp(-x * x - y * y); }, c, c, 1e-10);
  CHECK(std::abs(g.value - M_PI) < 1e-9);
  const auto odd =
      integrate_2d_decaying([](cplx x, cplx y) { return std::exp(-x * x - y * y) * x * y; }, c, c, 1e-10);
  CHECK(std::abs(odd.value) < 1e-9);

  auto f = [](cplx x, cplx y) { return std::exp(-(x * x + y * y)) * std::cos(x * y); };
  const auto two = integrate_2d_decaying(f, c, c, 1e-10);
  const auto iterated = integrate_decaying(
      [&](cplx x) { return integrate_decaying([&](cplx y) { return f(x, y); }, c, 1e-13).value; }, c, 1e-12);
  CHECK(std::abs(two.value - iterated.value) < 1e-9);
}

TEST_CASE("contour validation") {
  CHECK_THROWS_AS(Contour::detour_above_origin(-0.1).validate(), DomainError);
  CHECK_THROWS_AS(Contour::shifted_line(0.2).validate(0.1), DomainError);
  CHECK_THROWS_AS(Contour::shifted_line(0.0).validate(), DomainError);
  CHECK_NOTHROW(Contour::shifted_line(0.05).validate(0.1));
  CHECK_NOTHROW(Contour::real_line().validate());
}

TEST_CASE("non-finite integrand is reported") {
  CHECK_THROWS_AS(integrate_decaying([](cplx) { return cplx(NAN, 0); }, Contour::real_line(), 1e-10),
                  NonConvergence);
}
