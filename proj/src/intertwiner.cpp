#include "hmd/intertwiner.hpp"

#include <algorithm>
#include <cmath>

#include "hmd/errors.hpp"

namespace hmd {
namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kContourClearance = 1e-3;

// gamma(w + n b + m / b) / gamma(w) as a finite product of sines.
cplx gamma_ratio(cplx w, int n, int m, const ModularParam& p) {
  const cplx b = p.b(), bi = p.binv();
  cplx r = 1.0;
  for (int j = 0; j < n; ++j) r *= 2.0 * std::sin(M_PI * b * (w + double(j) * b));
  for (int l = 0; l < m; ++l) r *= 2.0 * std::sin(M_PI * bi * (w + double(n) * b + double(l) * bi));
  return r;
}

cplx inv_gamma(cplx w, const ModularParam& p) {
  try {
    return 1.0 / gamma(w, p);
  } catch (const PoleError&) {
    return 0.0;
  }
}

// 1 / gamma(+-2 i x).
cplx measure(cplx x, const ModularParam& p) {
  return -4.0 * std::sin(2.0 * M_PI * kI * p.b() * x) * std::sin(2.0 * M_PI * kI * x * p.binv());
}

cplx kernel(cplx g, cplx z, cplx x, const ModularParam& p) {
  return 0.5 * gamma(-g + kI * z + kI * x, p) * gamma(-g + kI * z - kI * x, p) *
         gamma(-g - kI * z + kI * x, p) * gamma(-g - kI * z - kI * x, p) * measure(x, p);
}

// Poles -i g - sigma z + i k, k = n b + m / b, that sit below the real line,
// i.e. have crossed it on the way from Re g < -|Im z|.
std::vector<std::pair<int, int>> crossed_poles(cplx g, double im_z, const ModularParam& p) {
  const double rb = p.b().real(), rbi = p.binv().real();
  std::vector<std::pair<int, int>> out;
  for (int n = 0; n * rb < g.real() + std::abs(im_z) + 1.0; ++n)
    for (int m = 0; n * rb + m * rbi < g.real() + std::abs(im_z) + 1.0; ++m) {
      const cplx k = double(n) * p.b() + double(m) * p.binv();
      const double im_p = -g.real() - im_z + k.real();
      if (std::abs(im_p) < kContourClearance)
        throw DomainError("pole at distance " + sci(std::abs(im_p)) + " from the contour");
      if (im_p < 0.0) out.emplace_back(n, m);
    }
  return out;
}

// Residue terms of the crossed poles of both families and of their mirror
// images, with the 1 / gamma(-2 g) normalisation already absorbed. Only the
// even part of phi survives the pairing of p with -p.
cplx residue_sum(cplx g, const ZFunc& phi, cplx z, const ModularParam& p) {
  cplx total = 0.0;
  for (double sigma : {1.0, -1.0}) {
    const cplx zs = sigma * z;
    for (auto [n, m] : crossed_poles(g, zs.imag(), p)) {
      const cplx k = double(n) * p.b() + double(m) * p.binv();
      const cplx pole = -kI * g - zs + kI * k;
      const cplx ratio = gamma_ratio(-2.0 * g, n, m, p) / gamma_ratio(-k, n, m, p);
      total += gamma(-2.0 * g + 2.0 * kI * zs + k, p) * gamma(-2.0 * kI * zs - k, p) * ratio *
               measure(pole, p) * 0.5 * (phi(pole) + phi(-pole));
    }
  }
  return total;
}

std::vector<TrigPoly> product_family() {
  std::vector<TrigPoly> family;
  for (int j = 0; j <= 3; ++j)
    for (int l = 0; l <= 3; ++l) family.push_back(TrigPoly::t_cos(j) * TrigPoly::s_cos(l));
  return family;
}

}  // namespace

MLabel MLabel::factorized(int n, int m, const ModularParam& p) {
  if (n < 0 || m < 0) throw DomainError("lattice indices must be non-negative");
  return {0.5 * double(n) * p.b() + 0.5 * double(m) * p.binv(), n, m};
}

std::pair<int, int> MLabel::find_lattice(cplx g, const ModularParam& p, double tol) {
  for (int n = 0; n <= 64; ++n)
    for (int m = 0; m <= 64; ++m)
      if (std::abs(g - factorized(n, m, p).g) < tol * std::max(1.0, std::abs(g))) return {n, m};
  return {-1, -1};
}

DiffOp m_elementary(const ModularParam& p, Half half) {
  const Shift up = half == Half::Plain ? Shift{1, 0} : Shift{0, 1};
  const TrigPoly x = half == Half::Plain ? TrigPoly::monomial(1, 0) : TrigPoly::monomial(0, 1);
  const TrigPoly xi = half == Half::Plain ? TrigPoly::monomial(-1, 0) : TrigPoly::monomial(0, -1);
  DiffOp e(p);
  e.add_term(TrigPoly::constant(lcplx(0.0L, 1.0L)), {x - xi}, up);
  e.add_term(TrigPoly::constant(lcplx(0.0L, -1.0L)), {x - xi}, -up);
  return e;
}

DiffOp m_factorized(int n, int m, const ModularParam& p) {
  if (n < 0 || m < 0) throw DomainError("lattice indices must be non-negative");
  DiffOp out = DiffOp::identity(p);
  const DiffOp eb = m_elementary(p, Half::Plain), et = m_elementary(p, Half::Tilde);
  for (int i = 0; i < m; ++i) out = et * out;
  for (int i = 0; i < n; ++i) out = eb * out;
  return out;
}

std::vector<ShiftCoeff> m_shift_coeffs(int n, const ModularParam& p) {
  if (n < 0) throw DomainError("n must be non-negative");
  const auto grouped = m_factorized(n, 0, p).collected();
  std::vector<ShiftCoeff> out;
  for (int l = 1; l <= n + 1; ++l) {
    const Shift sh{n + 2 - 2 * l, 0};
    auto it = grouped.find(sh);
    if (it == grouped.end())
      out.push_back({sh, TrigPoly{}, {}});
    else
      out.push_back({sh, it->second.first, it->second.second});
  }
  return out;
}

cplx m_apply_numeric(cplx g, const ZFunc& phi, cplx z, const ModularParam& p, double tol) {
  cplx total = residue_sum(g, phi, z, p);
  const cplx norm = inv_gamma(-2.0 * g, p);
  if (norm != 0.0) {
    auto f = [&](cplx x) { return kernel(g, z, x, p) * phi(x); };
    QuadOptions opt;
    opt.max_panels = 4000;
    const QuadResult r = integrate_decaying(f, Contour::real_line(4.0), tol / std::max(1.0, std::abs(norm)), opt);
    total += norm * r.value;
  }
  return total;
}

double check_contiguous_factorized(int n, int m, const ModularParam& p, const SampleBox& box) {
  const DiffOp eb = m_elementary(p, Half::Plain), et = m_elementary(p, Half::Tilde);
  const DiffOp base = m_factorized(n, m, p);
  const DiffOp up_n = m_factorized(n + 1, m, p), up_m = m_factorized(n, m + 1, p);
  const auto family = product_family();
  return std::max(word_relation_residual({{1.0, {&eb, &base}}}, {{1.0, {&up_n}}}, family, p, box),
                  word_relation_residual({{1.0, {&et, &base}}}, {{1.0, {&up_m}}}, family, p, box));
}

double check_contiguous_numeric(cplx g, Half half, const ZFunc& phi, const std::vector<cplx>& zs,
                                const ModularParam& p, double tol) {
  const cplx beta = half == Half::Plain ? p.b() : p.binv();
  double worst = 0.0;
  for (cplx z : zs) {
    const cplx x = std::exp(2.0 * M_PI * beta * z);
    const cplx lhs = kI *
                     (m_apply_numeric(g, phi, z + 0.5 * kI * beta, p, tol) -
                      m_apply_numeric(g, phi, z - 0.5 * kI * beta, p, tol)) /
                     (x - 1.0 / x);
    const cplx rhs = m_apply_numeric(g + 0.5 * beta, phi, z, p, tol);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double check_intertwining(int n, int m, const ModularParam& p, const SampleBox& box) {
  const DiffOp M = m_factorized(n, m, p);
  const cplx g = MLabel::factorized(n, m, p).g;
  const auto family = product_family();
  double worst = 0.0;
  for (Half half : {Half::Plain, Half::Tilde}) {
    const GeneratorSet at = generators(RepLabel(g), p, half);
    const GeneratorSet neg = generators(RepLabel(-g), p, half);
    const std::pair<const DiffOp*, const DiffOp*> pairs[] = {
        {&at.A, &neg.A}, {&at.B, &neg.B}, {&at.C, &neg.C}, {&at.D, &neg.D}};
    for (auto [x, y] : pairs)
      worst = std::max(worst, word_relation_residual({{1.0, {&M, x}}}, {{1.0, {y, &M}}}, family, p, box));
  }
  return worst;
}

InversionReport check_inversion(cplx g, const ModularParam& p, const std::vector<cplx>& zs) {
  if (g.real() < 0.0) g = -g;
  if (auto [n, m] = MLabel::find_lattice(g, p, 1e-6); n >= 0 && (n > 0 || m > 0))
    throw ExpectedViolation("g = " + sci(n) + " b/2 + " + sci(m) + " /(2b) lies on the degeneration lattice");

  // Distance from the real line of the poles of both integrands.
  double d = g.real();
  for (int n = 0; n <= 64; ++n)
    for (int m = 0; m <= 64; ++m) {
      const cplx k = double(n) * p.b() + double(m) * p.binv();
      d = std::min(d, std::abs(k.real() - g.real()));
    }
  if (d < 0.02) throw DomainError("poles within " + sci(d) + " of the real line");
  for (cplx z : zs)
    if (std::abs(z.imag()) > 0.5 * g.real()) throw DomainError("sample point too far from the real line");

  // Midpoint rule on a uniform grid: x_i +- y_j land on the grid, so the
  // gamma factors of the inner kernel come from a single table.
  const double h = std::min(0.05, d / 6.0);
  const double a = 2.0 * M_PI * g.real();
  const double L = a + std::sqrt(a * a + 40.0);
  const int N = int(std::ceil(L / h));
  auto node = [&](int i) { return (double(i) + 0.5) * h; };
  const ZFunc phi = [](cplx x) { return std::exp(-x * x); };

  std::vector<cplx> table(4 * N + 1);
  for (int k = -2 * N; k <= 2 * N; ++k) table[k + 2 * N] = gamma(-g + kI * h * double(k), p);
  auto G = [&](int k) { return table[k + 2 * N]; };

  std::vector<cplx> weight(2 * N);  // mu(y_j) phi(y_j), j = -N..N-1
  for (int j = -N; j < N; ++j) weight[j + N] = measure(node(j), p) * phi(node(j));

  const cplx norm_in = inv_gamma(-2.0 * g, p);
  std::vector<cplx> psi(N);
  for (int i = 0; i < N; ++i) {
    cplx s = 0.0;
    for (int j = -N; j < N; ++j)
      s += G(i + j + 1) * G(i - j) * G(-i + j) * G(-i - j - 1) * weight[j + N];
    psi[i] = norm_in * 0.5 * h * s + residue_sum(g, phi, node(i), p);
  }

  const cplx norm_out = inv_gamma(2.0 * g, p);
  InversionReport rep;
  rep.step = h;
  for (cplx z : zs) {
    cplx s = 0.0;
    double tail = 0.0;
    for (int i = 0; i < N; ++i) {
      const cplx term = kernel(-g, z, node(i), p) * psi[i];
      s += term;
      if (i == N - 1) tail = std::abs(term);
    }
    const cplx value = norm_out * 2.0 * h * s;
    if (std::abs(norm_out) * 2.0 * h * tail > 1e-9) throw NonConvergence("outer integrand not decayed at the cutoff");
    rep.z.push_back(z);
    rep.value.push_back(value);
    rep.residual = std::max(rep.residual, std::abs(value - phi(z)));
  }
  return rep;
}

TrigPoly generating_function(int n, int m, cplx x, const ModularParam& p) {
  if (n < 0 || m < 0) throw DomainError("lattice indices must be non-negative");
  const cplx b2 = p.b() * p.b();
  const lcplx xb = 2.0 * std::cos(2.0 * M_PI * kI * p.b() * x);
  const lcplx xt = 2.0 * std::cos(2.0 * M_PI * kI * x * p.binv());
  const long double sign_t = (m % 2 == 0) ? -1.0L : 1.0L;  // (-1)^(m+1)
  const long double sign_s = (n % 2 == 0) ? -1.0L : 1.0L;  // (-1)^(n+1)
  TrigPoly out = TrigPoly::constant(1.0L);
  for (int r = 0; r < n; ++r) {
    const lcplx e = std::exp(kI * M_PI * b2 * double(n - 1 - 2 * r));
    out = out * (TrigPoly::constant(xb) - TrigPoly::monomial(-1, 0, sign_t * e) -
                 TrigPoly::monomial(1, 0, sign_t / e));
  }
  for (int s = 0; s < m; ++s) {
    const lcplx e = std::exp(kI * M_PI * double(m - 1 - 2 * s) / b2);
    out = out * (TrigPoly::constant(xt) - TrigPoly::monomial(0, -1, sign_s * e) -
                 TrigPoly::monomial(0, 1, sign_s / e));
  }
  return out;
}

std::vector<TrigPoly> kernel_basis(int n, int m, const ModularParam& p, double tol) {
  if (n < 0 || m < 0) throw DomainError("lattice indices must be non-negative");
  std::vector<TrigPoly> basis;
  for (int j = 0; j <= n; ++j)
    for (int l = 0; l <= m; ++l) basis.push_back(TrigPoly::t_cos(j) * TrigPoly::s_cos(l));

  const DiffOp eb = m_elementary(p, Half::Plain), et = m_elementary(p, Half::Tilde);
  Word word(n + 1, &eb);
  word.insert(word.end(), m + 1, &et);
  for (const auto& f : basis) {
    TrigPoly image;
    try {
      image = apply_combo({{1.0, word}}, f);
    } catch (const NotDivisible&) {
      throw SpanFailure("M(g_{n,m}) image of a basis vector is not polynomial");
    }
    if (image.norm() > tol * f.norm()) throw SpanFailure("basis vector not annihilated, |image| = " + sci(image.norm()));
  }

  double residual = 0.0;
  coordinates_in(generating_function(n, m, cplx(0.31, 0.07), p), basis, &residual);
  if (residual > tol) throw SpanFailure("generating function outside the basis span, residual " + sci(residual));
  return basis;
}

}  // namespace hmd
