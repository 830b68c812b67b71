#pragma once

#include <vector>

#include "hmd/sklyanin.hpp"

namespace hmd {

/// Label of the operator M(g). On the degeneration lattice
/// g = n b / 2 + m / (2 b) the operator is a finite-difference operator; note
/// that this lattice is shifted by one step from RepLabel::at_lattice.
struct MLabel {
  cplx g{};
  int n = -1;
  int m = -1;

  static MLabel integral(cplx g) { return {g, -1, -1}; }
  static MLabel factorized(int n, int m, const ModularParam& p);
  bool is_factorized() const { return n >= 0 && m >= 0; }
  /// (n, m) when g sits on the degeneration lattice within tol, else (-1, -1).
  static std::pair<int, int> find_lattice(cplx g, const ModularParam& p, double tol = 1e-9);
};

/// -i / sin(2 pi i beta z) sin((beta / 2) d/dz) for the chosen half.
DiffOp m_elementary(const ModularParam& p, Half half);

/// Product of n plain and m tilde elementary factors.
DiffOp m_factorized(int n, int m, const ModularParam& p);

struct ShiftCoeff {
  Shift shift;
  TrigPoly num;
  std::vector<TrigPoly> den;
};

/// m_factorized(n, 0) grouped by shift: entry l - 1 carries the shift
/// (n + 2 - 2 l, 0), l = 1..n+1.
std::vector<ShiftCoeff> m_shift_coeffs(int n, const ModularParam& p);

/// Value at z of M(g) applied to phi. The integral is taken
/// over the real line and continued in g by adding the residues of the poles
/// that have crossed it, so any g off the pole-on-contour set is accepted.
/// phi must be analytic near those poles and decay fast enough for the real
/// line integral to converge. Its odd part is projected out.
cplx m_apply_numeric(cplx g, const ZFunc& phi, cplx z, const ModularParam& p, double tol = 1e-10);

/// Factorized contiguous relations: E_b M(n, m) = M(n + 1, m) and
/// E_{1/b} M(n, m) = M(n, m + 1), applied to t_cos(j) s_cos(l), j, l <= 3.
double check_contiguous_factorized(int n, int m, const ModularParam& p, const SampleBox& box = {});

/// Numeric contiguous relation E_beta [M(g) phi](z) = [M(g + beta / 2) phi](z),
/// beta = b or 1/b by half; max abs difference over zs.
double check_contiguous_numeric(cplx g, Half half, const ZFunc& phi, const std::vector<cplx>& zs,
                                const ModularParam& p, double tol = 1e-10);

/// Largest residual of M X(g) = X(-g) M over the eight generators at the
/// label of m_factorized(n, m).
double check_intertwining(int n, int m, const ModularParam& p, const SampleBox& box = {});

struct InversionReport {
  std::vector<cplx> z;
  std::vector<cplx> value;  // [M(-g) M(g) phi](z)
  double residual = 0.0;
  double step = 0.0;
};

/// Numeric composition M(-g) M(g) on phi(x) = exp(-x^2) at the real points zs,
/// compared with phi. Throws ExpectedViolation on the degeneration lattice
/// and DomainError when poles come too close to the real line.
InversionReport check_inversion(cplx g, const ModularParam& p, const std::vector<cplx>& zs);

/// gamma(g_{n,m} +- i x +- i z) written as a polynomial in z via the finite
/// product of sines.
TrigPoly generating_function(int n, int m, cplx x, const ModularParam& p);

/// t_cos(j) s_cos(l), j <= n, l <= m. Checks that M(g_{n,m}) kills each
/// element and that the generating function lies in their span; SpanFailure
/// otherwise.
std::vector<TrigPoly> kernel_basis(int n, int m, const ModularParam& p, double tol = 1e-9);

}  // namespace hmd
