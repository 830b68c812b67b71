#include <cmath>

#include "doctest.h"
#include "hmd/errors.hpp"
#include "hmd/intertwiner.hpp"

using namespace hmd;

namespace {
const ModularParam kReal(0.8);
const ModularParam kUnit(std::polar(1.0, M_PI / 5));
const cplx kI(0, 1);
cplx gauss(cplx x) { return std::exp(-x * x); }
}  // namespace

TEST_CASE("labels") {
  const auto m = MLabel::factorized(2, 1, kReal);
  CHECK(std::abs(m.g - (0.8 + 0.5 / 0.8)) < 1e-15);
  CHECK(m.is_factorized());
  CHECK_FALSE(MLabel::integral(0.3).is_factorized());
  CHECK(MLabel::find_lattice(m.g, kReal) == std::pair{2, 1});
  CHECK(MLabel::find_lattice(0.3, kReal) == std::pair{-1, -1});
}

TEST_CASE("factorized operator intertwines") {
  for (const ModularParam* p : {&kReal, &kUnit})
    for (auto [n, m] : {std::pair{1, 0}, {0, 1}, {2, 0}, {1, 1}}) CHECK(check_intertwining(n, m, *p) < 1e-9);
}

TEST_CASE("factorized contiguous relations") {
  CHECK(check_contiguous_factorized(0, 0, kReal) < 1e-12);
  CHECK(check_contiguous_factorized(1, 1, kUnit) < 1e-10);
}

TEST_CASE("grouped shift coefficients re-sum to the factorized operator") {
  const int n = 2;
  const auto coeffs = m_shift_coeffs(n, kReal);
  REQUIRE(coeffs.size() == std::size_t(n + 1));
  DiffOp sum(kReal);
  for (std::size_t l = 1; l <= coeffs.size(); ++l) {
    CHECK(coeffs[l - 1].shift == Shift{n + 2 - 2 * int(l), 0});
    sum.add_term(coeffs[l - 1].num, coeffs[l - 1].den, coeffs[l - 1].shift);
  }
  const ZFunc a = apply_sampled(sum, gauss), b = apply_sampled(m_factorized(n, 0, kReal), gauss);
  for (const cplx z : SampleBox{}.points()) CHECK(std::abs(a(z) - b(z)) < 1e-10 * std::max(1.0, std::abs(b(z))));
}

TEST_CASE("kernel and generating function") {
  for (auto [n, m] : {std::pair{0, 0}, {1, 0}, {1, 1}, {2, 1}})
    CHECK(kernel_basis(n, m, kReal).size() == std::size_t((n + 1) * (m + 1)));
  const cplx x(0.21, 0.03), z(0.13, -0.05);
  const cplx g = RepLabel::lattice_value(2, 0, kReal);
  cplx ref = 1.0;
  for (double sx : {1.0, -1.0})
    for (double sz : {1.0, -1.0}) ref *= gamma(g + sx * kI * x + sz * kI * z, kReal);
  CHECK(std::abs(generating_function(2, 0, x, kReal).eval(z, kReal) / ref - 1.0) < 1e-9);
}

TEST_CASE("numeric operator") {
  const cplx z(0.3, 0.05);
  SUBCASE("identity at g = 0") { CHECK(std::abs(m_apply_numeric(0.0, gauss, z, kReal) - gauss(z)) < 1e-8); }
  SUBCASE("agrees with the factorized form at g = b/2") {
    const ZFunc fac = apply_sampled(m_factorized(1, 0, kReal), gauss);
    CHECK(std::abs(m_apply_numeric(0.4, gauss, z, kReal) - fac(z)) < 1e-6);
  }
  SUBCASE("odd functions are projected out") {
    const ZFunc odd = [](cplx x) { return x * std::exp(-x * x); };
    CHECK(std::abs(m_apply_numeric(0.2, odd, z, kReal)) < 1e-10);
  }
  SUBCASE("contiguous relations") {
    const std::vector<cplx> zs{cplx(0.1, 0.02), cplx(0.6, 0.01)};
    CHECK(check_contiguous_numeric(0.2, Half::Plain, gauss, zs, kReal) < 1e-5);
    CHECK(check_contiguous_numeric(-0.3, Half::Tilde, gauss, zs, kReal) < 1e-5);
    CHECK(check_contiguous_numeric(0.2, Half::Plain, gauss, zs, ModularParam(std::polar(1.0, M_PI / 6))) < 1e-5);
  }
}

TEST_CASE("inversion") {
  const auto rep = check_inversion(0.17, kReal, {0.1, 0.6});
  CHECK(rep.residual < 1e-5);
  CHECK(rep.value.size() == 2);
  CHECK_THROWS_AS(check_inversion(0.4, kReal, {0.1}), ExpectedViolation);
}
