#include <cmath>

#include "doctest.h"
#include "hmd/errors.hpp"
#include "hmd/intertwiner.hpp"

using namespace hmd;

namespace {
const ModularParam kP(0.8);
const cplx kI(0, 1);

TrigPoly t1() { return TrigPoly::monomial(1, 0); }
TrigPoly tm1() { return TrigPoly::monomial(-1, 0); }
}  // namespace

TEST_CASE("evaluation") {
  CHECK(std::abs(poly_eval(t1() + tm1(), 0.0, kP) - 2.0) < 1e-15);
  CHECK(std::abs(poly_eval(t1() - tm1(), 0.0, kP)) < 1e-15);
  const cplx z(0.2, 0.1);
  CHECK(std::abs(TrigPoly::s_cos(1).eval(z, kP) - 2.0 * std::cosh(2.0 * M_PI * z / 0.8)) < 1e-12);
  CHECK(TrigPoly::t_cos(2).is_even(1e-15));
  CHECK_FALSE((t1() - tm1()).is_even(1e-15));
}

TEST_CASE("shift phases") {
  const TrigPoly t2 = poly_shift(TrigPoly::monomial(2, 0), {1, 0}, kP);
  CHECK(std::abs(cplx(t2.coeff(2, 0)) - kP.q()) < 1e-15);
  const TrigPoly s = poly_shift(TrigPoly::monomial(0, 1), {1, 0}, kP);
  CHECK(std::abs(cplx(s.coeff(0, 1)) + 1.0) < 1e-15);
  // Shifting and evaluating agree.
  const TrigPoly f = TrigPoly::t_cos(3) + TrigPoly::s_cos(1) * TrigPoly::monomial(1, 0, 0.5L);
  const cplx z(0.13, -0.04);
  const Shift sh{1, -1};
  CHECK(std::abs(poly_shift(f, sh, kP).eval(z, kP) - f.eval(z + sh.offset(kP), kP)) < 1e-12);
}

TEST_CASE("exact division") {
  const TrigPoly q = poly_div_exact(TrigPoly::monomial(2, 0) - TrigPoly::monomial(-2, 0), t1() - tm1());
  CHECK((q - TrigPoly::t_cos(1)).norm() < 1e-15);
  CHECK_THROWS_AS(poly_div_exact(t1() - tm1(), t1() + tm1()), NotDivisible);
}

TEST_CASE("difference operators on polynomials") {
  const DiffOp e = m_elementary(kP, Half::Plain);
  CHECK(diffop_apply(e, TrigPoly::constant(1)).norm() < 1e-15);
  const TrigPoly img = diffop_apply(e, TrigPoly::t_cos(1));
  CHECK(std::abs(cplx(img.coeff(0, 0)) + 2.0 * std::sin(M_PI * 0.64)) < 1e-14);
  CHECK(img.terms().size() == 1);
}

TEST_CASE("composition and commutators") {
  const DiffOp sh = DiffOp::shift(kP, {1, 0});
  const DiffOp mt = DiffOp::multiply(kP, t1());
  // shift . t = q^{1/2} t . shift
  const DiffOp c = diffop_compose(sh, mt) - mt * sh * std::exp(kI * M_PI * 0.64);
  const TrigPoly f = TrigPoly::t_cos(2) + TrigPoly::s_cos(1);
  CHECK(diffop_apply(c, f).norm() < 1e-14);
  const DiffOp comm = diffop_commutator(sh, sh);
  CHECK(diffop_apply(comm, f).norm() < 1e-15);
  const DiffOp anti = diffop_anticommutator(sh, DiffOp::identity(kP));
  CHECK((diffop_apply(anti, f) - 2.0L * poly_shift(f, {1, 0}, kP)).norm() < 1e-14);
}

TEST_CASE("sampled action matches polynomial action") {
  const DiffOp e = m_elementary(kP, Half::Tilde);
  const TrigPoly f = TrigPoly::s_cos(2);
  const TrigPoly img = diffop_apply(e, f);
  const ZFunc sampled = apply_sampled(e, [&](cplx z) { return f.eval(z, kP); });
  SampleBox box;
  const auto rep = func_equal_sampled(sampled, [&](cplx z) { return img.eval(z, kP); }, box, 1e-10);
  CHECK(rep.pass);
  CHECK(rep.seed == box.seed);
}

TEST_CASE("sampled function equality") {
  SampleBox box;
  auto f = [](cplx z) { return std::pow(std::sin(2.0 * M_PI * kI * 0.8 * z), 2); };
  auto g = [](cplx z) { return 0.5 * (1.0 - std::cos(4.0 * M_PI * kI * 0.8 * z)); };
  CHECK(func_equal_sampled(f, g, box, 1e-12).pass);
  CHECK(func_equal_sampled(f, f, box, 1e-12).max_residual == 0.0);
  CHECK_FALSE(func_equal_sampled(f, [&](cplx z) { return 1.001 * g(z); }, box, 1e-8).pass);
  box.count = 4;
  CHECK_THROWS_AS(box.points(), DomainError);
}

TEST_CASE("matrices of operators") {
  const std::vector<TrigPoly> basis{TrigPoly::constant(1), TrigPoly::t_cos(1)};
  const DenseCMatrix id = matrix_of_operator(DiffOp::identity(kP), basis);
  CHECK((id - DenseCMatrix::Identity(2, 2)).norm() < 1e-15);
  const DenseCMatrix m = matrix_of_operator(m_elementary(kP, Half::Plain), basis);
  CHECK(m.col(0).norm() < 1e-15);
  CHECK(std::abs(m(0, 1) + 2.0 * std::sin(M_PI * 0.64)) < 1e-14);
  CHECK(std::abs(m(1, 1)) < 1e-15);
  const DiffOp ts = DiffOp::multiply(kP, t1()) * DiffOp::shift(kP, {1, 0});
  CHECK_THROWS_AS(matrix_of_operator(ts, {TrigPoly::constant(1)}), NotInvariant);

  double res = -1;
  const auto c = coordinates_in(TrigPoly::t_cos(1) * 3.0L + TrigPoly::constant(2), basis, &res);
  CHECK(std::abs(c(0) - 2.0) < 1e-14);
  CHECK(std::abs(c(1) - 3.0) < 1e-14);
  CHECK(res < 1e-14);
}
