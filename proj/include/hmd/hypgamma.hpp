#pragma once

#include <complex>

#include "hmd/quadrature.hpp"

namespace hmd {

/// The modular parameter b (Re b > 0) together with the quantities derived
/// from it. Only b is stored; everything else is recomputed on demand.
class ModularParam {
 public:
  explicit ModularParam(cplx b);

  cplx b() const { return b_; }
  cplx binv() const { return 1.0 / b_; }
  /// b + 1/b, the width of the fundamental strip.
  cplx big_q() const { return b_ + 1.0 / b_; }
  /// Crossing parameter -(b + 1/b)/2.
  cplx eta() const { return -0.5 * big_q(); }
  cplx q() const;
  cplx qtilde() const;
  /// The same parameter with b replaced by 1/b.
  ModularParam swapped() const { return ModularParam(1.0 / b_); }

 private:
  cplx b_;
};

enum class GammaMethod { Integral, Product, Auto };

struct GammaConfig {
  GammaMethod method = GammaMethod::Auto;
  double tol = 1e-13;
  /// Distance below which a point is identified with a lattice site.
  /// Zero selects the default 1e-6 |b + 1/b|.
  double pole_clearance = 0.0;

  double clearance_for(const ModularParam& p) const;
};

struct LatticeSite {
  enum class Kind { Regular, Zero, Pole };
  Kind kind = Kind::Regular;
  int n = 0;
  int m = 0;
};

/// Second order multiple Bernoulli polynomial B_{2,2}(u; w1, w2).
cplx b22(cplx u, cplx w1, cplx w2);

/// Integral representation, valid on the strip 0 < Re z < Re(b + 1/b).
/// Throws StripError outside the strip.
cplx gamma_integral(cplx z, const ModularParam& p, double tol = 1e-13);

/// Ratio of q-Pochhammer symbols; requires Im(b^2) > 0 so that |q| < 1.
cplx gamma_product(cplx z, const ModularParam& p, double tol = 1e-13);

/// Hyperbolic gamma function on the whole plane. Arguments are moved towards
/// the centre of the fundamental strip with the shift equations
/// g(z + b) = 2 sin(pi b z) g(z) and its 1/b twin. Returns exactly zero on the
/// zero lattice and throws PoleError on the pole lattice.
cplx gamma(cplx z, const ModularParam& p, const GammaConfig& cfg = {});

/// Barnes-normalised form gamma^(2)(u; w1, w2) = gamma(u/sqrt(w1 w2); sqrt(w1/w2)).
cplx gamma2(cplx u, cplx w1, cplx w2, const GammaConfig& cfg = {});

LatticeSite classify_site(cplx z, const ModularParam& p, double pole_clearance);

/// Normalisation m(alpha) removing the star-triangle constant.
cplx m_norm(cplx alpha, const ModularParam& p, double tol = 1e-13);

/// -log(m(alpha) m(eta - alpha)), principal branch.
cplx free_energy_per_edge(cplx alpha, const ModularParam& p, double tol = 1e-13);

}  // namespace hmd
