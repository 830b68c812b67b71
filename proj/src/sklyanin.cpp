#include "hmd/sklyanin.hpp"

#include <algorithm>
#include <cmath>

#include "hmd/errors.hpp"

namespace hmd {
namespace {

constexpr cplx kI{0.0, 1.0};

TrigPoly mono(Half half, int k, cplx c = 1.0) {
  return half == Half::Plain ? TrigPoly::monomial(k, 0, c) : TrigPoly::monomial(0, k, c);
}

double poly_l2(const TrigPoly& f) {
  double s = 0.0;
  for (const auto& [k, v] : f.terms()) s += std::norm(v);
  return std::sqrt(s);
}

std::vector<TrigPoly> half_family(Half half) {
  std::vector<TrigPoly> out;
  for (int j = 0; j <= 6; ++j) out.push_back(half_cos(half, j));
  return out;
}

}  // namespace

cplx RepLabel::lattice_value(int n, int m, const ModularParam& p) {
  return 0.5 * p.b() * double(n + 1) + 0.5 * p.binv() * double(m + 1);
}

RepLabel RepLabel::at_lattice(int n, int m, const ModularParam& p) {
  if (n < 0 || m < 0) throw DomainError("lattice indices must be non-negative");
  RepLabel r(lattice_value(n, m, p));
  r.lattice = std::make_pair(n, m);
  return r;
}

int RepLabel::dimension() const {
  if (!lattice) throw DomainError("label is not on the lattice");
  return (lattice->first + 1) * (lattice->second + 1);
}

void RepLabel::validate(const ModularParam& p, double clearance) const {
  if (lattice && std::abs(g - lattice_value(lattice->first, lattice->second, p)) >= clearance)
    throw DomainError("label does not match its lattice point");
}

TrigPoly half_cos(Half half, int j) { return mono(half, j) + mono(half, -j); }

GeneratorSet generators(const RepLabel& g, const ModularParam& p, Half half) {
  g.validate(p);
  const cplx beta = half == Half::Plain ? p.b() : p.binv();
  const cplx b2 = beta * beta;
  const cplx sn = std::sin(M_PI * b2);
  if (std::abs(sn) < 1e-9) throw DegenerateParam("sin(pi beta^2) vanishes");
  const Shift up = half == Half::Plain ? Shift{1, 0} : Shift{0, 1};
  const Shift dn = -up;
  // Common denominator x - 1/x; sin(2 pi i beta z) = i (x - 1/x) / 2.
  const std::vector<TrigPoly> den{mono(half, 1) - mono(half, -1)};

  DiffOp A(p), B(p), C(p), D(p);
  const cplx ca = std::exp(kI * M_PI * b2 / 2.0) * std::exp(-kI * M_PI * beta * g.g);
  A.add_term(mono(half, 1, ca), den, up);
  A.add_term(mono(half, -1, -ca), den, dn);

  const cplx cd = -std::exp(-kI * M_PI * b2 / 2.0) * std::exp(kI * M_PI * beta * g.g);
  D.add_term(mono(half, -1, cd), den, up);
  D.add_term(mono(half, 1, -cd), den, dn);

  const cplx cc = -kI / sn;
  C.add_term(TrigPoly::constant(cc), den, up);
  C.add_term(TrigPoly::constant(-cc), den, dn);

  const cplx ph = std::exp(kI * M_PI * beta * (2.0 * g.g - beta));
  const cplx cb = kI / (2.0 * sn);
  const TrigPoly cos_up = mono(half, -2, 0.5 * ph) + mono(half, 2, 0.5 / ph);
  const TrigPoly cos_dn = mono(half, 2, 0.5 * ph) + mono(half, -2, 0.5 / ph);
  B = C * (-0.5 * std::cos(M_PI * b2));
  B.add_term(cos_up * cb, den, up);
  B.add_term(cos_dn * (-cb), den, dn);

  return GeneratorSet{std::move(A), std::move(B), std::move(C), std::move(D), half, g, p};
}

double check_algebra(const GeneratorSet& gs, const SampleBox& box) {
  const auto& [A, B, C, D, half, g, p] = gs;
  const cplx b2 = gs.beta() * gs.beta();
  const cplx q = std::exp(kI * M_PI * b2);
  const cplx sn = std::sin(M_PI * b2);
  const auto family = half_family(half);
  const cplx k = 0.5 * kI * std::sin(2.0 * M_PI * b2);
  const Combo rhs_ab{{k, {&C, &A}}, {-k, {&D, &C}}};
  double worst = 0.0;
  auto check = [&](const Combo& l, const Combo& r) {
    worst = std::max(worst, word_relation_residual(l, r, family, p, box));
  };
  check({{1.0, {&C, &A}}}, {{q, {&A, &C}}});
  check({{1.0, {&D, &C}}}, {{q, {&C, &D}}});
  check({{1.0, {&A, &D}}, {-1.0, {&D, &A}}}, {{-2.0 * kI * sn * sn * sn, {&C, &C}}});
  const cplx h = 1.0 / (2.0 * kI * sn);
  check({{1.0, {&B, &C}}, {-1.0, {&C, &B}}}, {{h, {&A, &A}}, {-h, {&D, &D}}});
  check({{1.0, {&A, &B}}, {-q, {&B, &A}}}, rhs_ab);
  check({{q, {&D, &B}}, {-1.0, {&B, &D}}}, rhs_ab);
  return worst;
}

double check_cross_relations(const GeneratorSet& plain, const GeneratorSet& tilde,
                             const SampleBox& box) {
  if (plain.half != Half::Plain || tilde.half != Half::Tilde)
    throw DomainError("expected a plain and a tilde generator set");
  const ModularParam& p = plain.p;
  std::vector<TrigPoly> family;
  for (int j = 0; j <= 3; ++j)
    for (int l = 0; l <= 3; ++l) family.push_back(TrigPoly::t_cos(j) * TrigPoly::s_cos(l));
  const std::vector<const DiffOp*> ad{&plain.A, &plain.D}, bc{&plain.B, &plain.C};
  const std::vector<const DiffOp*> tad{&tilde.A, &tilde.D}, tbc{&tilde.B, &tilde.C};
  double worst = 0.0;
  auto run = [&](const std::vector<const DiffOp*>& xs, const std::vector<const DiffOp*>& ys,
                 double sign) {
    for (const auto* x : xs)
      for (const auto* y : ys) worst = std::max(worst, word_relation_residual({{1.0, {x, y}}}, {{sign, {y, x}}}, family, p, box));
  };
  run(ad, tbc, -1.0);
  run(bc, tad, -1.0);
  run(ad, tad, 1.0);
  run(bc, tbc, 1.0);
  return worst;
}

Casimirs casimirs(const GeneratorSet& gs, double tol, const SampleBox& box) {
  const auto& [A, B, C, D, half, g, p] = gs;
  const cplx beta = gs.beta();
  const cplx b2 = beta * beta;
  const cplx q = std::exp(kI * M_PI * b2);
  const cplx sn = std::sin(M_PI * b2);
  Casimirs out{(A * D) * q - (C * C) * (sn * sn),
               (A * A) * (1.0 / (4.0 * sn * sn * q)) + (D * D) * (q / (4.0 * sn * sn)) - B * C -
                   (C * C) * (0.5 * std::cos(M_PI * b2)),
               q, std::cos(2.0 * M_PI * beta * g.g) / (2.0 * sn * sn), 0.0};
  const cplx c2 = 1.0 / (4.0 * sn * sn);
  const Combo k0{{q, {&A, &D}}, {-sn * sn, {&C, &C}}};
  const Combo k1{{c2 / q, {&A, &A}}, {c2 * q, {&D, &D}}, {-1.0, {&B, &C}},
                 {-0.5 * std::cos(M_PI * b2), {&C, &C}}};
  const auto family = half_family(half);
  out.residual = std::max(word_relation_residual(k0, {{out.k0_value, {}}}, family, p, box),
                          word_relation_residual(k1, {{out.k1_value, {}}}, family, p, box));
  if (!(out.residual < tol))
    throw ScalarMismatch("Casimir action is not the expected scalar (residual " +
                         sci(out.residual) + ")");
  return out;
}

std::vector<TrigPoly> verma_vectors(const RepLabel& g, const ModularParam& p, int k_max) {
  if (k_max < 0 || k_max > 12) throw DomainError("k_max must lie in 0..12");
  const GeneratorSet gs = generators(g, p, Half::Plain);
  std::vector<TrigPoly> out{TrigPoly::constant(1.0)};
  for (int k = 1; k <= k_max; ++k) out.push_back(diffop_apply(gs.B, out.back()).pruned(1e-14));
  return out;
}

VermaCoeffs verma_coeffs(const RepLabel& g, const ModularParam& p, int k) {
  const auto vecs = verma_vectors(g, p, k);
  const GeneratorSet gs = generators(g, p, Half::Plain);
  VermaCoeffs out;
  auto expand = [&](const DiffOp& op, int top, std::vector<cplx>& dst) {
    const TrigPoly img = diffop_apply(op, vecs[std::size_t(k)]);
    if (img.pruned(1e-12).empty() && top < 0) return;
    double res = 0.0;
    const Eigen::VectorXcd x = coordinates_in(img, vecs, &res);
    if (res > 1e-8) throw SingularBasis("image is outside the span of the Verma vectors");
    const double scale = std::max(1e-300, x.cwiseAbs().maxCoeff());
    for (int j = 0; j <= k; ++j) {
      const bool in_pattern = j <= top && (top - j) % 2 == 0;
      if (in_pattern) continue;
      out.off_pattern = std::max(out.off_pattern, std::abs(x(j)) / scale);
    }
    for (int j = top; j >= 0; j -= 2) dst.push_back(x(j));
  };
  expand(gs.A, k, out.a);
  expand(gs.D, k, out.d);
  expand(gs.C, k - 1, out.c);
  return out;
}

FiniteDimResult verma_span_test(const RepLabel& g, const ModularParam& p, int n, double tol) {
  if (n < 0 || n > 11) throw DomainError("n must lie in 0..11");
  const auto vecs = verma_vectors(g, p, n + 1);
  const std::vector<TrigPoly> lower(vecs.begin(), vecs.end() - 1);
  FiniteDimResult out;
  out.expansion = coordinates_in(vecs.back(), lower, &out.residual);
  // Residual measured against the largest vector of the chain.
  double scale = 0.0;
  for (const auto& v : vecs) scale = std::max(scale, v.norm());
  out.residual = out.residual * std::max(1.0, poly_l2(vecs.back())) / scale;
  out.is_invariant = out.residual < tol;
  const GeneratorSet gs = generators(g, p, Half::Plain);
  const TrigPoly cv = diffop_apply(gs.C, vecs.back());
  out.c_nonzero = cv.norm() > tol * std::max(1.0, vecs.back().norm());
  return out;
}

FiniteDimResult finite_dim_detect(int n, const ModularParam& p, double tol) {
  auto out = verma_span_test(RepLabel(0.5 * double(n + 1) * p.b()), p, n, tol);
  if (!out.is_invariant)
    throw SpanFailure("|n+1> is not in the span of lower vectors (residual " +
                      sci(out.residual) + ")");
  return out;
}

}  // namespace hmd
