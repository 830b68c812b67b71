#include "hmd/hypgamma.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "hmd/errors.hpp"

namespace hmd {
namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = M_PI;

// Smallest imaginary part among the nonzero zeros of sinh(b t) sinh(t/b).
double sinh_pole_height(const ModularParam& p) {
  return kPi * std::min(p.b().real(), p.binv().real());
}

// -e^{t w} / (4 t sinh(bt) sinh(t/b)), written so that no intermediate
// exponential overflows for large |t|.
cplx gamma_integrand(cplx t, cplx w, const ModularParam& p) {
  const cplx b = p.b(), bi = p.binv(), q = p.big_q();
  if (t.real() >= 0.0) {
    return -std::exp(t * (w - q)) / (t * (1.0 - std::exp(-2.0 * b * t)) * (1.0 - std::exp(-2.0 * bi * t)));
  }
  return -std::exp(t * (w + q)) / (t * (1.0 - std::exp(2.0 * b * t)) * (1.0 - std::exp(2.0 * bi * t)));
}

cplx m_integrand(cplx t, cplx alpha, const ModularParam& p) {
  const cplx b = p.b(), bi = p.binv(), q = p.big_q();
  if (t.real() >= 0.0) {
    return -8.0 * std::exp((4.0 * alpha - 2.0 * q) * t) /
           (t * (1.0 - std::exp(-2.0 * b * t)) * (1.0 - std::exp(-2.0 * bi * t)) *
            (1.0 + std::exp(-2.0 * q * t)));
  }
  return -8.0 * std::exp((4.0 * alpha + 2.0 * q) * t) /
         (t * (1.0 - std::exp(2.0 * b * t)) * (1.0 - std::exp(2.0 * bi * t)) *
          (1.0 + std::exp(2.0 * q * t)));
}

// (x; q)_inf with x = exp(2 pi i a), q = exp(2 pi i c), factors formed
// directly from the exponent to avoid underflow in q^k.
cplx pochhammer(cplx a, cplx c, double tol) {
  cplx prod = 1.0;
  constexpr int kMaxFactors = 1000000;
  for (int k = 0; k < kMaxFactors; ++k) {
    const cplx term = std::exp(2.0 * kPi * kI * (a + double(k) * c));
    prod *= (1.0 - term);
    if (std::abs(term) < tol * 1e-2 && k > 0) return prod;
  }
  throw NonConvergence("q-Pochhammer product did not converge");
}

// Trapezoidal rule on the shifted line Im t = +-delta. The integrand is
// analytic in a strip of half-width delta around the line, so the rule
// converges geometrically; nodes and the w-independent factor are cached per b.
struct TrapezoidCache {
  cplx b;
  bool upper = true;
  double h = 0.0;
  double delta = 0.0;
  std::vector<cplx> pos_t, pos_f, neg_t, neg_f;  // t >= 0 and t < 0 halves
};

constexpr int kTrapMaxNodes = 4000;

cplx gamma_weight(cplx t, const ModularParam& p) {
  const cplx b = p.b(), bi = p.binv(), q = p.big_q();
  if (t.real() >= 0.0) {
    return -std::exp(-t * q) / (t * (1.0 - std::exp(-2.0 * b * t)) * (1.0 - std::exp(-2.0 * bi * t)));
  }
  return -std::exp(t * q) / (t * (1.0 - std::exp(2.0 * b * t)) * (1.0 - std::exp(2.0 * bi * t)));
}

const TrapezoidCache& trapezoid_cache(const ModularParam& p, bool upper) {
  thread_local std::vector<TrapezoidCache> caches;
  for (const auto& c : caches)
    if (c.b == p.b() && c.upper == upper) return c;
  if (caches.size() > 16) caches.erase(caches.begin());
  TrapezoidCache c;
  c.b = p.b();
  c.upper = upper;
  c.delta = 0.5 * sinh_pole_height(p);
  c.h = kPi * c.delta / 24.0;
  const double im = upper ? c.delta : -c.delta;
  for (int k = 0; k < kTrapMaxNodes; ++k) {
    const cplx tp(c.h * (k + 0.5), im), tn(-c.h * (k + 0.5), im);
    c.pos_t.push_back(tp);
    c.pos_f.push_back(c.h * gamma_weight(tp, p));
    c.neg_t.push_back(tn);
    c.neg_f.push_back(c.h * gamma_weight(tn, p));
  }
  caches.push_back(std::move(c));
  return caches.back();
}

// Trapezoidal value of the integral in the exponent of gamma; nullopt when the
// tails are too slow for the cached nodes or the step-doubling check fails.
std::optional<cplx> gamma_exponent_trapezoid(cplx w, const ModularParam& p, bool upper, double tol) {
  const TrapezoidCache& c = trapezoid_cache(p, upper);
  cplx fine = 0.0, coarse = 0.0;
  // The coarse sum keeps even nodes on the right and odd nodes on the left,
  // which is again a uniform grid, of step 2h.
  auto half = [&](const std::vector<cplx>& ts, const std::vector<cplx>& fs, int parity) {
    int quiet = 0;
    for (int k = 0; k < kTrapMaxNodes; ++k) {
      const cplx term = fs[k] * std::exp(ts[k] * w);
      fine += term;
      if (k % 2 == parity) coarse += 2.0 * term;
      if (std::abs(term) < 1e-18) {
        if (++quiet >= 4 && ts[k].real() * ts[k].real() > 4.0) return true;
      } else {
        quiet = 0;
      }
    }
    return false;
  };
  if (!half(c.pos_t, c.pos_f, 0) || !half(c.neg_t, c.neg_f, 1)) return std::nullopt;
  if (std::abs(fine - coarse) > std::max(1e-6, 1e3 * tol)) return std::nullopt;
  return fine;
}

}  // namespace

ModularParam::ModularParam(cplx b) : b_(b) {
  if (!(b.real() > 0.0)) throw DomainError("modular parameter needs Re(b) > 0");
}

cplx ModularParam::q() const { return std::exp(2.0 * kPi * kI * b_ * b_); }
cplx ModularParam::qtilde() const { return std::exp(-2.0 * kPi * kI / (b_ * b_)); }

double GammaConfig::clearance_for(const ModularParam& p) const {
  return pole_clearance > 0.0 ? pole_clearance : 1e-6 * std::abs(p.big_q());
}

cplx b22(cplx u, cplx w1, cplx w2) {
  if (w1 == 0.0 || w2 == 0.0) throw DomainError("B22 needs nonzero quasi-periods");
  const cplx s = u - 0.5 * (w1 + w2);
  return (s * s - (w1 * w1 + w2 * w2) / 12.0) / (w1 * w2);
}

cplx gamma_integral(cplx z, const ModularParam& p, double tol) {
  const cplx q = p.big_q();
  if (!(z.real() > 0.0 && z.real() < q.real())) {
    throw StripError("gamma_integral: Re z outside the fundamental strip");
  }
  const cplx w = 2.0 * z - q;
  const cplx bb = p.b() * p.b() + 1.0 / (p.b() * p.b());
  const cplx s = z - 0.5 * q;
  const double delta = 0.5 * sinh_pole_height(p);
  // For Im z < 0 the contour is moved below t = 0; the residue there flips
  // the sign of the quadratic prefactor.
  const bool upper = z.imag() >= 0.0;
  const cplx pre = -kI * kPi / 2.0 * s * s + kI * kPi / 24.0 * bb;
  if (tol >= 1e-14) {
    if (const auto v = gamma_exponent_trapezoid(w, p, upper, tol)) return std::exp((upper ? pre : -pre) + *v);
  }
  auto f = [&](cplx t) { return gamma_integrand(t, w, p); };
  const Contour c = Contour::shifted_line(upper ? delta : -delta);
  const QuadResult r = integrate_decaying(f, c, tol);
  return std::exp((upper ? pre : -pre) + r.value);
}

cplx gamma_product(cplx z, const ModularParam& p, double tol) {
  if (std::abs(p.q()) >= 1.0 - 1e-6) {
    throw RegimeError("gamma_product needs |q| < 1, i.e. Im(b^2) > 0");
  }
  const cplx b = p.b(), bi = p.binv();
  // (e^{2 pi i z/b} qt; qt) / (e^{2 pi i z b}; q), qt = e^{-2 pi i / b^2}
  auto direct = [&](cplx w) {
    const cplx num = pochhammer(w * bi - bi * bi, -bi * bi, tol);
    const cplx den = pochhammer(w * b, b * b, tol);
    return std::exp(-kI * kPi / 2.0 * b22(w, b, bi)) * num / den;
  };
  const cplx v = direct(z);
  if (std::isfinite(v.real()) && std::isfinite(v.imag())) return v;
  // The factors overflow far out on one side; reflection maps to the other.
  return 1.0 / direct(p.big_q() - z);
}

LatticeSite classify_site(cplx z, const ModularParam& p, double pole_clearance) {
  const cplx b = p.b(), bi = p.binv();
  const double rb = b.real(), rbi = bi.real();
  const double reach = std::abs(z.real()) + pole_clearance + rb + rbi;
  const int nmax = std::min(20000, int(reach / rb) + 2);
  const int mmax = std::min(20000, int(reach / rbi) + 2);
  if (z.real() > 0.5 * pole_clearance) {
    for (int n = 0; n <= nmax; ++n)
      for (int m = 0; m <= mmax; ++m)
        if (std::abs(z - (b * double(n + 1) + bi * double(m + 1))) < pole_clearance)
          return {LatticeSite::Kind::Zero, n, m};
  } else {
    for (int n = 0; n <= nmax; ++n)
      for (int m = 0; m <= mmax; ++m)
        if (std::abs(z + b * double(n) + bi * double(m)) < pole_clearance)
          return {LatticeSite::Kind::Pole, n, m};
  }
  return {};
}

cplx gamma(cplx z, const ModularParam& p, const GammaConfig& cfg) {
  const double clearance = cfg.clearance_for(p);
  const LatticeSite site = classify_site(z, p, clearance);
  if (site.kind == LatticeSite::Kind::Zero) return 0.0;
  if (site.kind == LatticeSite::Kind::Pole) throw PoleError(site.n, site.m);

  const bool use_product =
      cfg.method == GammaMethod::Product ||
      (cfg.method == GammaMethod::Auto && std::abs(p.q()) < 0.05 && std::abs(p.qtilde()) < 0.05);
  if (use_product) {
    const cplx v = gamma_product(z, p, cfg.tol);
    if (cfg.method == GammaMethod::Product || (std::isfinite(v.real()) && std::isfinite(v.imag())))
      return v;
  }

  const cplx b = p.b(), bi = p.binv();
  const double centre = 0.5 * p.big_q().real();
  const cplx big = b.real() >= bi.real() ? b : bi;
  const cplx small = b.real() >= bi.real() ? bi : b;
  cplx factor = 1.0;
  int steps = 0;
  auto step = [&](cplx beta, bool down) {
    if (++steps > 64) throw NonConvergence("gamma: more than 64 shift steps needed");
    if (down) {
      // g(z) = 2 sin(pi beta (z - beta)) g(z - beta)
      z -= beta;
      factor *= 2.0 * std::sin(kPi * beta * z);
    } else {
      // g(z) = g(z + beta) / (2 sin(pi beta z))
      const cplx s = 2.0 * std::sin(kPi * beta * z);
      if (std::abs(s) < clearance) {
        const LatticeSite hit = classify_site(z, p, clearance);
        throw PoleError(hit.n, hit.m);
      }
      factor /= s;
      z += beta;
    }
  };
  while (std::abs(z.real() - centre) > 0.5 * big.real()) step(big, z.real() > centre);
  while (std::abs(z.real() - centre) > 0.5 * small.real() + 1e-12) {
    const double before = std::abs(z.real() - centre);
    const double after = std::abs(std::abs(z.real() - centre) - small.real());
    if (after >= before) break;
    step(small, z.real() > centre);
  }
  if (factor == 0.0) return 0.0;
  return factor * gamma_integral(z, p, cfg.tol);
}

cplx gamma2(cplx u, cplx w1, cplx w2, const GammaConfig& cfg) {
  if (!(w1.real() > 0.0 && w2.real() > 0.0)) {
    throw DomainError("gamma2 needs Re(w1), Re(w2) > 0");
  }
  const ModularParam p(std::sqrt(w1 / w2));
  return gamma(u / std::sqrt(w1 * w2), p, cfg);
}

cplx m_norm(cplx alpha, const ModularParam& p, double tol) {
  const cplx q = p.big_q();
  if (std::abs((4.0 * alpha).real()) >= 2.0 * q.real()) {
    throw DomainError("m_norm: |Re 4 alpha| exceeds the decay of the integrand");
  }
  const double cosh_height = 0.5 * kPi * (1.0 / q).real();
  const double delta = 0.5 * std::min(sinh_pole_height(p), cosh_height);
  auto f = [&](cplx t) { return m_integrand(t, alpha, p); };
  const QuadResult r = integrate_decaying(f, Contour::shifted_line(delta), tol);
  const cplx pre = -kI * kPi * (alpha * alpha + (1.0 - 2.0 * q * q) / 24.0);
  return std::exp(pre + r.value / 8.0);
}

cplx free_energy_per_edge(cplx alpha, const ModularParam& p, double tol) {
  return -std::log(m_norm(alpha, p, tol) * m_norm(p.eta() - alpha, p, tol));
}

}  // namespace hmd
