#pragma once

#include <array>

#include "hmd/hypgamma.hpp"

namespace hmd {

/// Parameter regimes in which the edge weights are real and positive for
/// real spins: 0 < b < 1, or |b| = 1 with Im(b^2) > 0.
enum class Regime { RealB, UnitCircleB, Outside };

Regime classify_regime(const ModularParam& p, double tol = 1e-12);
/// Positivity window eta < alpha < -eta for W (real alpha only).
bool w_rapidity_in_window(cplx alpha, const ModularParam& p);
/// Positivity window 0 < -alpha < -2 eta for the vertical weight.
bool wbar_rapidity_in_window(cplx alpha, const ModularParam& p);

/// Six parameters with positive real parts summing to b + 1/b.
struct BalancedSextet {
  std::array<cplx, 6> g{};

  /// Throws InvariantError when Re g_k <= 0 or the sum is off by > 1e-12.
  void validate(const ModularParam& p) const;
};

enum class RhoMode { GammaForm, TrigForm };

/// Horizontal edge weight gamma(alpha - eta +- i x +- i y).
cplx weight_w(cplx alpha, cplx x, cplx y, const ModularParam& p, const GammaConfig& cfg = {});
/// Vertical edge weight gamma(-alpha +- i x +- i y).
cplx weight_wbar(cplx alpha, cplx x, cplx y, const ModularParam& p, const GammaConfig& cfg = {});
/// Vertex weight 1 / (2 gamma(+-2 i z)).
cplx rho(cplx z, const ModularParam& p, RhoMode mode = RhoMode::TrigForm,
         const GammaConfig& cfg = {});
/// Star-triangle constant gamma(2b-2a) gamma(2c-2b) gamma(2a-2c-2 eta).
cplx chi(cplx alpha, cplx beta, cplx gam, const ModularParam& p, const GammaConfig& cfg = {});

/// |star / (chi * triangle) - 1| with the star side integrated numerically.
double check_star_triangle(cplx alpha, cplx beta, cplx gam, cplx x, cplx y, cplx w,
                           const ModularParam& p, double tol = 1e-9);

/// |integral / prod_{j<k} gamma(g_j + g_k) - 1| for the hyperbolic beta integral.
double check_beta_integral(const BalancedSextet& s, const ModularParam& p, double tol = 1e-9);

/// Integrand of the square-cell R-operator, measure included.
cplx r_kernel(cplx u1, cplx u2, cplx v1, cplx v2, cplx z1, cplx z2, cplx x1, cplx x2,
              const ModularParam& p, const GammaConfig& cfg = {});

/// S(u) = W(u; z1, z2), the multiplication factor of the factorised R-operator.
cplx s_operator(cplx u, cplx z1, cplx z2, const ModularParam& p, const GammaConfig& cfg = {});

}  // namespace hmd
