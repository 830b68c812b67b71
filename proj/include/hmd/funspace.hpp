#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hmd/hypgamma.hpp"

namespace hmd {

using DenseCMatrix = Eigen::MatrixXcd;
/// Coefficient type of TrigPoly; the extra precision absorbs the cancellation
/// between shift phases of very different size when |q| < 1.
using lcplx = std::complex<long double>;

/// Laurent polynomial in t = exp(2 pi b z) and s = exp(2 pi z / b), stored as a
/// sparse map from exponent pairs (j, l) to coefficients.
class TrigPoly {
 public:
  using Key = std::pair<int, int>;

  TrigPoly() = default;
  static TrigPoly constant(lcplx c);
  static TrigPoly monomial(int j, int l, lcplx c = 1.0L);
  /// t^j + t^-j (2 cosh(2 pi b j z)); equals 2 for j = 0.
  static TrigPoly t_cos(int j);
  /// s^l + s^-l.
  static TrigPoly s_cos(int l);

  const std::map<Key, lcplx>& terms() const { return c_; }
  lcplx coeff(int j, int l) const;
  void add(int j, int l, lcplx c);
  bool empty() const { return c_.empty(); }

  /// Largest coefficient modulus (0 for the zero polynomial).
  double norm() const;
  /// Drops coefficients with modulus <= tol * norm().
  TrigPoly pruned(double rel_tol) const;
  /// coeff(j, l) == coeff(-j, -l), i.e. invariance under z -> -z.
  bool is_even(double tol) const;
  cplx eval(cplx z, const ModularParam& p) const;

  int min_j() const;
  int max_j() const;
  int min_l() const;
  int max_l() const;

  TrigPoly& operator+=(const TrigPoly& o);
  TrigPoly& operator-=(const TrigPoly& o);
  TrigPoly& operator*=(lcplx s);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
  friend TrigPoly operator*(TrigPoly a, lcplx s) { return a *= s; }
  friend TrigPoly operator*(lcplx s, TrigPoly a) { return a *= s; }
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
  friend TrigPoly operator-(TrigPoly a) { return a *= -1.0L; }

 private:
  std::map<Key, lcplx> c_;
};

/// Imaginary shift z -> z + i (a b / 2 + c / (2 b)).
struct Shift {
  int a = 0;
  int c = 0;
  friend Shift operator+(Shift x, Shift y) { return {x.a + y.a, x.c + y.c}; }
  friend Shift operator-(Shift x) { return {-x.a, -x.c}; }
  friend auto operator<=>(const Shift&, const Shift&) = default;
  cplx offset(const ModularParam& p) const;
};

cplx poly_eval(const TrigPoly& pl, cplx z, const ModularParam& p);
/// Phase action of a shift: t -> e^{i pi b^2 a} (-1)^c t, s -> (-1)^a e^{i pi c / b^2} s.
TrigPoly poly_shift(const TrigPoly& pl, Shift sh, const ModularParam& p);
/// Exact Laurent division; throws NotDivisible when the remainder exceeds
/// tol relative to the numerator.
TrigPoly poly_div_exact(const TrigPoly& num, const TrigPoly& den, double tol = 1e-9);

/// One summand (num / prod(den)) * exp(shift . d/dz) of a difference operator.
/// The denominator is kept factored so that common denominators stay small.
struct DiffTerm {
  TrigPoly num;
  std::vector<TrigPoly> den;
  Shift shift;
};

/// Finite-difference operator with Laurent-rational coefficients written to
/// the left of the shifts.
class DiffOp {
 public:
  explicit DiffOp(ModularParam p) : p_(p) {}
  static DiffOp identity(const ModularParam& p);
  static DiffOp shift(const ModularParam& p, Shift sh);
  static DiffOp multiply(const ModularParam& p, const TrigPoly& f);

  const ModularParam& param() const { return p_; }
  const std::vector<DiffTerm>& terms() const { return terms_; }
  void add_term(TrigPoly num, std::vector<TrigPoly> den, Shift sh);

  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  DiffOp& operator*=(cplx s);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(DiffOp a, cplx s) { return a *= s; }
  friend DiffOp operator*(cplx s, DiffOp a) { return a *= s; }
  /// Operator product: (a * b) f = a(b(f)).
  friend DiffOp operator*(const DiffOp& a, const DiffOp& b);

  /// Terms grouped by shift, each collapsed to a single fraction.
  std::map<Shift, std::pair<TrigPoly, std::vector<TrigPoly>>> collected(double tol = 1e-12) const;

 private:
  ModularParam p_;
  std::vector<DiffTerm> terms_;
};

DiffOp diffop_compose(const DiffOp& a, const DiffOp& b);
DiffOp diffop_commutator(const DiffOp& a, const DiffOp& b);
DiffOp diffop_anticommutator(const DiffOp& a, const DiffOp& b);
/// Applies op to a polynomial; throws NotDivisible when the image is not a
/// Laurent polynomial.
TrigPoly diffop_apply(const DiffOp& op, const TrigPoly& pl, double tol = 1e-9);

using ZFunc = std::function<cplx(cplx)>;
using MultiFunc = std::function<cplx(const std::vector<cplx>&)>;

/// Pointwise action on an arbitrary function: sum num(z)/den(z) f(z + shift).
ZFunc apply_sampled(const DiffOp& op, ZFunc f);
/// Same, acting on variable `var` of a function of several variables.
MultiFunc apply_sampled(const DiffOp& op, std::size_t var, MultiFunc f);

struct SampleBox {
  double re_min = -0.4, re_max = 0.4;
  double im_min = -0.2, im_max = 0.2;
  int count = 12;
  std::uint64_t seed = 0xFADDEE;
  double exclusion_radius = 0.05;  // around z = 0, where the 1/sin factors blow up

  /// Deterministic sample points; throws DomainError when count < 8.
  std::vector<cplx> points() const;
};

struct SampleReport {
  bool pass = false;
  double max_residual = 0.0;
  std::uint64_t seed = 0;
};

SampleReport func_equal_sampled(const ZFunc& f, const ZFunc& g, const SampleBox& box, double tol);

/// Linear combination of operator words; the word {X, Y} acts as X(Y(f)).
using Word = std::vector<const DiffOp*>;
using Combo = std::vector<std::pair<cplx, Word>>;

/// Applies the words one letter at a time with diffop_apply, so every
/// intermediate result is a Laurent polynomial. Optionally records the
/// input and every partial image, times the word coefficient.
TrigPoly apply_combo(const Combo& combo, const TrigPoly& f, std::vector<TrigPoly>* parts = nullptr);

/// Largest sampled |LHS f - RHS f| over the family, relative to the roundoff
/// scale of the word images. Falls back to sampled application of the words
/// when some letter does not map the family to Laurent polynomials.
double word_relation_residual(const Combo& lhs, const Combo& rhs, const std::vector<TrigPoly>& family,
                              const ModularParam& p, const SampleBox& box);

/// Matrix of op on span(basis): op(basis_j) = sum_i basis_i M_ij.
DenseCMatrix matrix_of_operator(const DiffOp& op, const std::vector<TrigPoly>& basis,
                                double tol = 1e-9);
/// Coordinates of v in span(basis) by least squares; returns the relative
/// residual through `residual`.
Eigen::VectorXcd coordinates_in(const TrigPoly& v, const std::vector<TrigPoly>& basis,
                                double* residual);

}  // namespace hmd
