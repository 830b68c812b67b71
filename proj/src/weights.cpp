#include "hmd/weights.hpp"

#include <cmath>

#include "hmd/errors.hpp"

namespace hmd {
namespace {

constexpr cplx kI{0.0, 1.0};

// gamma(g +- i x +- i y) as a product of four values.
cplx gamma_pm_pm(cplx g, cplx x, cplx y, const ModularParam& p, const GammaConfig& cfg) {
  return gamma(g + kI * x + kI * y, p, cfg) * gamma(g + kI * x - kI * y, p, cfg) *
         gamma(g - kI * x + kI * y, p, cfg) * gamma(g - kI * x - kI * y, p, cfg);
}

cplx gamma_pm(cplx g, cplx x, const ModularParam& p, const GammaConfig& cfg) {
  return gamma(g + kI * x, p, cfg) * gamma(g - kI * x, p, cfg);
}

}  // namespace

Regime classify_regime(const ModularParam& p, double tol) {
  const cplx b = p.b();
  if (std::abs(b.imag()) < tol && b.real() > 0.0 && b.real() < 1.0) return Regime::RealB;
  if (std::abs(std::abs(b) - 1.0) < tol && (b * b).imag() > 0.0) return Regime::UnitCircleB;
  return Regime::Outside;
}

bool w_rapidity_in_window(cplx alpha, const ModularParam& p) {
  const double eta = p.eta().real();
  return std::abs(alpha.imag()) < 1e-14 && eta < alpha.real() && alpha.real() < -eta;
}

bool wbar_rapidity_in_window(cplx alpha, const ModularParam& p) {
  const double eta = p.eta().real();
  return std::abs(alpha.imag()) < 1e-14 && 0.0 < -alpha.real() && -alpha.real() < -2.0 * eta;
}

void BalancedSextet::validate(const ModularParam& p) const {
  cplx sum = 0.0;
  for (const auto& gk : g) {
    if (!(gk.real() > 0.0)) throw InvariantError("balanced sextet needs Re g_k > 0");
    sum += gk;
  }
  if (std::abs(sum + 2.0 * p.eta()) > 1e-12) {
    throw InvariantError("balanced sextet violates sum g_k = -2 eta");
  }
}

cplx weight_w(cplx alpha, cplx x, cplx y, const ModularParam& p, const GammaConfig& cfg) {
  return gamma_pm_pm(alpha - p.eta(), x, y, p, cfg);
}

cplx weight_wbar(cplx alpha, cplx x, cplx y, const ModularParam& p, const GammaConfig& cfg) {
  return gamma_pm_pm(-alpha, x, y, p, cfg);
}

cplx rho(cplx z, const ModularParam& p, RhoMode mode, const GammaConfig& cfg) {
  if (mode == RhoMode::GammaForm) {
    return 1.0 / (2.0 * gamma(2.0 * kI * z, p, cfg) * gamma(-2.0 * kI * z, p, cfg));
  }
  // gamma(x) gamma(-x) = -1 / (4 sin(pi b x) sin(pi x / b)) at x = 2 i z.
  const cplx x = 2.0 * kI * z;
  return -2.0 * std::sin(M_PI * p.b() * x) * std::sin(M_PI * p.binv() * x);
}

cplx chi(cplx alpha, cplx beta, cplx gam, const ModularParam& p, const GammaConfig& cfg) {
  return gamma(2.0 * beta - 2.0 * alpha, p, cfg) * gamma(2.0 * gam - 2.0 * beta, p, cfg) *
         gamma(2.0 * alpha - 2.0 * gam - 2.0 * p.eta(), p, cfg);
}

double check_star_triangle(cplx alpha, cplx beta, cplx gam, cplx x, cplx y, cplx w,
                           const ModularParam& p, double tol) {
  const cplx eta = p.eta();
  for (const cplx v : {beta - alpha + kI * x, beta - alpha - kI * x,
                       alpha - gam - eta + kI * y, alpha - gam - eta - kI * y,
                       gam - beta + kI * w, gam - beta - kI * w}) {
    if (!(v.real() > 0.0)) throw DomainError("star-triangle outside its convergence window");
  }
  const cplx rhs = chi(alpha, beta, gam, p) * weight_w(alpha - beta, y, w, p) *
                   weight_wbar(alpha - gam, x, w, p) * weight_w(beta - gam, x, y, p);
  auto f = [&](cplx z) {
    return rho(z, p) * weight_wbar(alpha - beta, x, z, p) * weight_w(alpha - gam, y, z, p) *
           weight_wbar(beta - gam, w, z, p);
  };
  const QuadResult lhs = integrate_decaying(f, Contour::real_line(), tol * std::abs(rhs));
  return std::abs(lhs.value / rhs - 1.0);
}

double check_beta_integral(const BalancedSextet& s, const ModularParam& p, double tol) {
  s.validate(p);
  cplx rhs = 1.0;
  for (int j = 0; j < 6; ++j)
    for (int k = j + 1; k < 6; ++k) rhs *= gamma(s.g[j] + s.g[k], p);
  auto f = [&](cplx z) {
    cplx v = rho(z, p);
    for (const auto& gk : s.g) v *= gamma_pm(gk, z, p, GammaConfig{});
    return v;
  };
  const QuadResult lhs = integrate_decaying(f, Contour::real_line(), tol * std::abs(rhs));
  return std::abs(lhs.value / rhs - 1.0);
}

cplx r_kernel(cplx u1, cplx u2, cplx v1, cplx v2, cplx z1, cplx z2, cplx x1, cplx x2,
              const ModularParam& p, const GammaConfig& cfg) {
  return rho(x1, p) * rho(x2, p) * weight_w(u1 - v2, z1, z2, p, cfg) *
         weight_wbar(u1 - v1, z1, x2, p, cfg) * weight_wbar(u2 - v2, z2, x1, p, cfg) *
         weight_w(u2 - v1, x1, x2, p, cfg);
}

cplx s_operator(cplx u, cplx z1, cplx z2, const ModularParam& p, const GammaConfig& cfg) {
  return weight_w(u, z1, z2, p, cfg);
}

}  // namespace hmd
