#include <cmath>

#include "doctest.h"
#include "hmd/errors.hpp"
#include "hmd/sklyanin.hpp"

using namespace hmd;

namespace {
const ModularParam kReal(0.8);
const ModularParam kUnit(std::polar(1.0, M_PI / 5));
const cplx kI(0, 1);
}  // namespace

TEST_CASE("lowering operator annihilates the vacuum") {
  const auto gs = generators(RepLabel(0.3), kReal);
  CHECK(diffop_apply(gs.C, TrigPoly::constant(1)).norm() < 1e-14);
  CHECK(gs.unit() == Shift{1, 0});
  CHECK(generators(RepLabel(0.3), kReal, Half::Tilde).unit() == Shift{0, 1});
}

TEST_CASE("algebra relations hold in both halves") {
  for (const ModularParam* p : {&kReal, &kUnit}) {
    CHECK(check_algebra(generators(RepLabel(0.3), *p, Half::Plain)) < 1e-10);
    CHECK(check_algebra(generators(RepLabel(0.3), *p, Half::Tilde)) < 1e-10);
    CHECK(check_cross_relations(generators(RepLabel(0.3), *p, Half::Plain),
                                generators(RepLabel(0.3), *p, Half::Tilde)) < 1e-10);
  }
}

TEST_CASE("a corrupted generator is detected") {
  auto gs = generators(RepLabel(0.3), kReal);
  gs.A *= 1.01;
  CHECK(check_algebra(gs) > 1e-4);
}

TEST_CASE("degenerate parameter") {
  CHECK_THROWS_AS(generators(RepLabel(0.3), ModularParam(1.0)), DegenerateParam);
}

TEST_CASE("Casimir scalars") {
  const cplx g(0.3, 0.05);
  for (Half half : {Half::Plain, Half::Tilde}) {
    const auto gs = generators(RepLabel(g), kUnit, half);
    const cplx beta = gs.beta(), sn = std::sin(M_PI * beta * beta);
    const auto k = casimirs(gs);
    CHECK(k.residual < 1e-10);
    CHECK(std::abs(k.k0_value - std::exp(kI * M_PI * beta * beta)) < 1e-12);
    CHECK(std::abs(k.k1_value - std::cos(2.0 * M_PI * beta * g) / (2.0 * sn * sn)) < 1e-12);
  }
}

TEST_CASE("lattice labels") {
  const auto g = RepLabel::at_lattice(2, 1, kReal);
  CHECK(g.dimension() == 6);
  CHECK(std::abs(g.g - (1.5 * 0.8 + 1.0 / 0.8)) < 1e-15);
  CHECK_THROWS_AS(RepLabel(0.3).dimension(), DomainError);
  RepLabel bad = g;
  bad.g += 0.01;
  CHECK_THROWS_AS(bad.validate(kReal), DomainError);
}

TEST_CASE("Verma vectors keep the harmonic pattern") {
  const auto v = verma_vectors(RepLabel(0.37), kReal, 8);
  REQUIRE(v.size() == 9);
  for (int k = 0; k <= 8; ++k)
    for (const auto& [key, c] : v[std::size_t(k)].terms()) {
      CHECK(key.second == 0);
      CHECK(std::abs(key.first) <= k);
      CHECK((key.first - k) % 2 == 0);
    }
  const auto c = verma_coeffs(RepLabel(0.37), kReal, 8);
  CHECK(c.off_pattern < 1e-12);
  CHECK(verma_coeffs(RepLabel(0.37), kReal, 0).c.empty());
}

TEST_CASE("finite-dimensional quotient on the lattice") {
  for (int n = 0; n <= 4; ++n) {
    const auto r = finite_dim_detect(n, kReal);
    CHECK(r.is_invariant);
    if (n >= 2) CHECK(r.c_nonzero);
  }
  CHECK(finite_dim_detect(2, kUnit).is_invariant);
  CHECK_FALSE(verma_span_test(RepLabel(0.3), kReal, 1).is_invariant);
}
