#include "hmd/rmatrix.hpp"

#include <algorithm>
#include <cmath>

#include "hmd/errors.hpp"

namespace hmd {
namespace {

constexpr cplx kI{0.0, 1.0};

TrigPoly tpow(int k, lcplx c) { return TrigPoly::monomial(k, 0, c); }

// c0 t^-1 + c1 t.
TrigPoly cos_pair(lcplx c0, lcplx c1) { return tpow(-1, c0) + tpow(1, c1); }

// Coefficients of prod (X + a_k) in powers of X.
std::vector<TrigPoly> expand_in_x(const std::vector<TrigPoly>& a) {
  std::vector<TrigPoly> c{TrigPoly::constant(1.0L)};
  for (const auto& ak : a) {
    std::vector<TrigPoly> next(c.size() + 1);
    for (std::size_t d = 0; d < c.size(); ++d) {
      next[d + 1] += c[d];
      next[d] += ak * c[d];
    }
    c = std::move(next);
  }
  return c;
}

TrigPoly x_power(int k) {
  TrigPoly out = TrigPoly::constant(1.0L);
  for (int i = 0; i < k; ++i) out = out * TrigPoly::t_cos(1);
  return out;
}

cplx gnm(int n, int m, const ModularParam& p) { return RepLabel::lattice_value(n, m, p); }

// An operator acting on one variable of a function of several.
struct Letter {
  const DiffOp* op;
  std::size_t var;
};
using SWord = std::vector<Letter>;
using SExpr = std::vector<SWord>;

MultiFunc apply_word(const SWord& w, MultiFunc f) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) f = apply_sampled(*it->op, it->var, std::move(f));
  return f;
}

// Entry (i, k) of the monodromy L_0 L_1 ... as a sum of words.
SExpr monodromy_entry(const std::vector<OperatorMatrix>& sites, int i, int k) {
  SExpr paths{{}};
  std::vector<int> ends{i};
  for (std::size_t s = 0; s < sites.size(); ++s) {
    SExpr next_paths;
    std::vector<int> next_ends;
    const int d = sites[s].cols();
    for (std::size_t a = 0; a < paths.size(); ++a)
      for (int m = 0; m < d; ++m) {
        if (s + 1 == sites.size() && m != k) continue;
        const DiffOp& op = sites[s].at(ends[a], m);
        if (op.terms().empty()) continue;
        SWord w = paths[a];
        w.push_back({&op, s});
        next_paths.push_back(std::move(w));
        next_ends.push_back(m);
      }
    paths = std::move(next_paths);
    ends = std::move(next_ends);
  }
  return paths;
}

cplx eval_product(const SExpr& left, const SExpr& right, const MultiFunc& f, const std::vector<cplx>& z) {
  cplx s = 0.0;
  for (const auto& a : left)
    for (const auto& b : right) {
      SWord w = a;
      w.insert(w.end(), b.begin(), b.end());
      s += apply_word(w, f)(z);
    }
  return s;
}

cplx eval_expr(const SExpr& e, const MultiFunc& f, const std::vector<cplx>& z) {
  cplx s = 0.0;
  for (const auto& w : e) s += apply_word(w, f)(z);
  return s;
}

std::vector<std::vector<cplx>> sample_tuples(std::size_t vars, const SampleBox& box) {
  SampleBox b = box;
  b.count = std::max(box.count, 16);
  const auto pts = b.points();
  std::vector<std::vector<cplx>> out;
  for (std::size_t i = 0; i < 16; ++i) {
    std::vector<cplx> z(vars);
    for (std::size_t k = 0; k < vars; ++k) z[k] = pts[(i + 5 * k) % pts.size()];
    out.push_back(std::move(z));
  }
  return out;
}

MultiFunc test_function(const ModularParam& p) {
  return [p](const std::vector<cplx>& z) {
    cplx f = 1.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      const cplx t = std::exp(2.0 * M_PI * p.b() * z[k]);
      f *= std::exp(-(z[k] - 0.1 * double(k)) * (z[k] - 0.1 * double(k))) * (t + 1.0 / t + 0.3 + 0.2 * double(k));
    }
    return f;
  };
}

}  // namespace

OperatorMatrix::OperatorMatrix(int rows, int cols, const ModularParam& p)
    : rows_(rows), cols_(cols), p_(p), e_(std::size_t(rows * cols), DiffOp(p)) {}

OperatorMatrix OperatorMatrix::multiplication(const std::vector<std::vector<TrigPoly>>& entries,
                                              const ModularParam& p) {
  const int r = int(entries.size()), c = r ? int(entries[0].size()) : 0;
  OperatorMatrix m(r, c, p);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) m.at(i, k) = DiffOp::multiply(p, entries[std::size_t(i)][std::size_t(k)]);
  return m;
}

OperatorMatrix OperatorMatrix::constant(const DenseCMatrix& a, const ModularParam& p) {
  OperatorMatrix m(int(a.rows()), int(a.cols()), p);
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k)
      m.at(i, k) = DiffOp::multiply(p, TrigPoly::constant(lcplx(a(i, k))));
  return m;
}

OperatorMatrix OperatorMatrix::transposed() const {
  OperatorMatrix t(cols_, rows_, p_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) t.at(k, i) = at(i, k);
  return t;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("operator matrix product: inner sizes differ");
  OperatorMatrix out(a.rows(), b.cols(), a.param());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < b.cols(); ++k)
      for (int j = 0; j < a.cols(); ++j) {
        if (a.at(i, j).terms().empty() || b.at(j, k).terms().empty()) continue;
        out.at(i, k) += a.at(i, j) * b.at(j, k);
      }
  return out;
}

DenseCMatrix restrict_operator_matrix(const OperatorMatrix& m, const std::vector<TrigPoly>& basis,
                                      double tol) {
  const Eigen::Index d = Eigen::Index(basis.size());
  DenseCMatrix out = DenseCMatrix::Zero(m.rows() * d, m.cols() * d);
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k)
      out.block(i * d, k * d, d, d) = matrix_of_operator(m.at(i, k), basis, tol);
  return out;
}

cplx gen_function(int n, int m, cplx x, cplx z, const ModularParam& p) {
  return generating_function(n, m, x, p).eval(z, p);
}

DualBases bases_phi_psi(int n, const ModularParam& p, double tol) {
  if (n < 0) throw DomainError("n must be non-negative");
  const cplx b2 = p.b() * p.b();
  std::vector<TrigPoly> c;
  for (int r = 0; r < n; ++r) {
    const lcplx e = std::exp(kI * M_PI * b2 * double(n - 1 - 2 * r));
    c.push_back(cos_pair(e, 1.0L / e));
  }
  const auto coeffs = expand_in_x(c);  // coefficient of X^(j-1) is psi_{n+2-j}
  DualBases out;
  for (int j = 1; j <= n + 1; ++j) out.phi.push_back(x_power(j - 1));
  for (int i = 1; i <= n + 1; ++i) out.psi.push_back(coeffs[std::size_t(n + 1 - i)]);

  const cplx xs[] = {{0.23, 0.05}, {-0.17, 0.11}, {0.31, -0.08}};
  const cplx zs[] = {{0.12, -0.04}, {0.29, 0.07}, {-0.21, 0.02}};
  for (cplx x : xs)
    for (cplx z : zs) {
      cplx s = 0.0;
      for (int j = 1; j <= n + 1; ++j)
        s += out.psi[std::size_t(n + 1 - j)].eval(x, p) * out.phi[std::size_t(j - 1)].eval(z, p);
      const cplx ref = gen_function(n, 0, x, z, p);
      if (std::abs(s - ref) > tol * std::max(1.0, std::abs(ref)))
        throw SpanFailure("dual basis expansion misses the generating function by " + sci(std::abs(s - ref)));
    }

  out.gram = DenseCMatrix(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    double res = 0.0;
    out.gram.col(j) = coordinates_in(out.psi[std::size_t(j)], out.phi, &res);
    if (res > tol) throw SpanFailure("psi outside span(phi), residual " + sci(res));
  }
  return out;
}

std::vector<std::vector<TrigPoly>> v_matrix(cplx u, int n, const ModularParam& p) {
  if (n < 0) throw DomainError("n must be non-negative");
  const cplx b = p.b();
  const cplx w0 = -u - 2.0 * p.eta() - gnm(n, 0, p);
  std::vector<std::vector<TrigPoly>> v(std::size_t(n + 1), std::vector<TrigPoly>(std::size_t(n + 1)));
  for (int l = 1; l <= n + 1; ++l) {
    std::vector<TrigPoly> roots;  // factors X - a are stored as X + (-a)
    for (int r = 0; r <= l - 2; ++r) {
      const lcplx e = std::exp(kI * M_PI * b * (w0 + 2.0 * b * double(r)));
      roots.push_back(-cos_pair(e, 1.0L / e));
    }
    for (int r = 0; r <= n - l; ++r) {
      const lcplx e = std::exp(kI * M_PI * b * (w0 + 2.0 * b * double(r)));
      roots.push_back(-cos_pair(1.0L / e, e));
    }
    const auto c = expand_in_x(roots);
    for (int j = 1; j <= n + 1; ++j) v[std::size_t(j - 1)][std::size_t(l - 1)] = c[std::size_t(j - 1)];
  }
  return v;
}

OperatorMatrix l_fundamental(cplx u, cplx g, const ModularParam& p) {
  const auto [u1, u2] = RapidityPair::from(u, g);
  const cplx b = p.b();
  const lcplx e1 = std::exp(2.0 * M_PI * kI * b * u1), e2 = std::exp(2.0 * M_PI * kI * b * u2);
  const std::vector<TrigPoly> den{tpow(1, 1.0L) - tpow(-1, 1.0L)};
  const lcplx pref(0.0L, -2.0L);  // 1 / sin(2 pi i b z) = -2i / (t - 1/t)

  OperatorMatrix left(2, 2, p);
  auto put = [&](int i, int k, const TrigPoly& f) { left.at(i, k).add_term(f * pref, den, {0, 0}); };
  put(0, 0, -cos_pair(e1, 1.0L / e1));
  put(0, 1, -cos_pair(1.0L / e1, e1));
  put(1, 0, TrigPoly::constant(1.0L));
  put(1, 1, TrigPoly::constant(1.0L));

  OperatorMatrix mid(2, 2, p);
  mid.at(0, 0) = DiffOp::shift(p, {1, 0});
  mid.at(1, 1) = DiffOp::shift(p, {-1, 0}) * cplx(-1.0);

  const auto right = OperatorMatrix::multiplication(
      {{TrigPoly::constant(1.0L), -cos_pair(1.0L / e2, e2)}, {TrigPoly::constant(1.0L), -cos_pair(e2, 1.0L / e2)}}, p);
  return left * mid * right;
}

OperatorMatrix l_from_generators(cplx u, cplx g, const ModularParam& p) {
  const GeneratorSet gs = generators(RepLabel(g), p, Half::Plain);
  const cplx b = p.b();
  const cplx sn = std::sin(M_PI * b * b);
  const cplx em = std::exp(-kI * M_PI * b * u), ep = std::exp(kI * M_PI * b * u);
  OperatorMatrix l(2, 2, p);
  l.at(0, 0) = (gs.A * (-em) - gs.D * ep) * 2.0;
  l.at(0, 1) = (gs.B * (-4.0 * sn) - gs.C * (2.0 * sn * (std::cos(2.0 * M_PI * b * u) + std::cos(M_PI * b * b)))) * 2.0;
  l.at(1, 0) = gs.C * (2.0 * sn);
  l.at(1, 1) = (gs.A * ep + gs.D * em) * 2.0;
  return l;
}

OperatorMatrix r_finite(cplx u, int n, cplx g, const ModularParam& p) {
  if (n < 0) throw DomainError("n must be non-negative");
  const int d = n + 1;
  const auto left = OperatorMatrix::multiplication(v_matrix(u + g, n, p), p);
  OperatorMatrix diag(d, d, p);
  const auto beta = m_shift_coeffs(n, p);
  for (int l = 0; l < d; ++l)
    if (!beta[std::size_t(l)].num.empty())
      diag.at(l, l).add_term(beta[std::size_t(l)].num, beta[std::size_t(l)].den, beta[std::size_t(l)].shift);
  DenseCMatrix cm = DenseCMatrix::Zero(d, d);
  for (int l = 0; l < d; ++l) cm(l, d - 1 - l) = 1.0;
  const auto c = OperatorMatrix::constant(cm, p);
  const auto right = OperatorMatrix::multiplication(v_matrix(u - g, n, p), p).transposed();
  return left * diag * c * right * c;
}

std::vector<TrigPoly> quantum_basis(int n, int m) {
  if (n < 0 || m < 0) throw DomainError("lattice indices must be non-negative");
  std::vector<TrigPoly> out;
  for (int j = 0; j <= n; ++j) {
    TrigPoly xs = TrigPoly::constant(1.0L);
    for (int l = 0; l <= m; ++l) {
      out.push_back(x_power(j) * xs);
      xs = xs * TrigPoly::s_cos(1);
    }
  }
  return out;
}

RDense r_dense(cplx u, int n, int n2, int m2, const ModularParam& p) {
  const auto basis = quantum_basis(n2, m2);
  const Eigen::Index d = Eigen::Index(basis.size());
  const DenseCMatrix mixed = restrict_operator_matrix(r_finite(u, n, gnm(n2, m2, p), p), basis);
  const DualBases bases = bases_phi_psi(n, p);
  const DenseCMatrix ginv = bases.gram.inverse();
  DenseCMatrix conv = DenseCMatrix::Zero(mixed.rows(), mixed.cols());
  for (int j = 0; j <= n; ++j)
    for (int k = 0; k <= n; ++k)
      conv.block(j * d, k * d, d, d) = ginv(j, k) * DenseCMatrix::Identity(d, d);
  RDense out;
  out.raw = mixed * conv;
  if (std::abs(out.raw(0, 0)) < 1e-300) throw DomainError("leading entry vanishes; cannot normalize");
  out.normalized = out.raw / out.raw(0, 0);
  return out;
}

DenseCMatrix seven_vertex(cplx u, const ModularParam& p) {
  return restrict_operator_matrix(l_fundamental(u - 0.5 * p.binv(), gnm(1, 0, p), p), quantum_basis(1, 0));
}

double check_ybe(const DenseCMatrix& r12, const DenseCMatrix& r13, const DenseCMatrix& r23, int d1,
                 int d2, int d3) {
  if (r12.rows() != d1 * d2 || r12.cols() != d1 * d2 || r13.rows() != d1 * d3 || r13.cols() != d1 * d3 ||
      r23.rows() != d2 * d3 || r23.cols() != d2 * d3)
    throw DimensionMismatch("R-matrix sizes do not match the space dimensions");
  const int n = d1 * d2 * d3;
  DenseCMatrix a = DenseCMatrix::Zero(n, n), b = a, c = a;
  auto idx = [&](int i1, int i2, int i3) { return (i1 * d2 + i2) * d3 + i3; };
  for (int i1 = 0; i1 < d1; ++i1)
    for (int i2 = 0; i2 < d2; ++i2)
      for (int i3 = 0; i3 < d3; ++i3)
        for (int j1 = 0; j1 < d1; ++j1)
          for (int j2 = 0; j2 < d2; ++j2)
            for (int j3 = 0; j3 < d3; ++j3) {
              const int r = idx(i1, i2, i3), s = idx(j1, j2, j3);
              if (i3 == j3) a(r, s) = r12(i1 * d2 + i2, j1 * d2 + j2);
              if (i2 == j2) b(r, s) = r13(i1 * d3 + i3, j1 * d3 + j3);
              if (i1 == j1) c(r, s) = r23(i2 * d3 + i3, j2 * d3 + j3);
            }
  return (a * b * c - c * b * a).cwiseAbs().maxCoeff();
}

UnitarityFit check_unitarity(const DenseCMatrix& rp, const DenseCMatrix& rm) {
  if (rp.cols() != rm.rows() || rp.rows() != rm.cols() || rp.rows() != rp.cols())
    throw DimensionMismatch("unitarity needs square matrices of equal size");
  const DenseCMatrix prod = rp * rm;
  const cplx lambda = prod.trace() / double(prod.rows());
  const DenseCMatrix diff = prod - lambda * DenseCMatrix::Identity(prod.rows(), prod.cols());
  const double scale = std::max(std::abs(lambda), prod.cwiseAbs().maxCoeff());
  return {lambda, scale > 0.0 ? diff.cwiseAbs().maxCoeff() / scale : 0.0};
}

double check_rll(const DenseCMatrix& r, const std::vector<OperatorMatrix>& lu,
                 const std::vector<OperatorMatrix>& lv, const SampleBox& box) {
  if (lu.empty() || lu.size() != lv.size()) throw DimensionMismatch("need the same nonzero number of sites");
  const int d = lu.front().rows();
  if (r.rows() != d * d || r.cols() != d * d) throw DimensionMismatch("R does not act on the auxiliary square");
  const ModularParam& p = lu.front().param();
  using Grid = std::vector<std::vector<SExpr>>;
  Grid tu(std::size_t(d), Grid::value_type(static_cast<std::size_t>(d)));
  Grid tv = tu;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      tu[std::size_t(i)][std::size_t(k)] = monodromy_entry(lu, i, k);
      tv[std::size_t(i)][std::size_t(k)] = monodromy_entry(lv, i, k);
    }
  const MultiFunc f = test_function(p);
  double worst = 0.0, scale = 1e-300;
  for (const auto& z : sample_tuples(lu.size(), box)) {
    // uv(i k, j l) = T_ik(u) T_jl(v) f, vu(j l, i k) = T_jl(v) T_ik(u) f.
    DenseCMatrix uv(d * d, d * d), vu(d * d, d * d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j)
          for (int l = 0; l < d; ++l) {
            const auto& a = tu[std::size_t(i)][std::size_t(k)];
            const auto& c = tv[std::size_t(j)][std::size_t(l)];
            uv(i * d + k, j * d + l) = eval_product(a, c, f, z);
            vu(j * d + l, i * d + k) = eval_product(c, a, f, z);
          }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            cplx lhs = 0.0, rhs = 0.0;
            for (int a = 0; a < d; ++a)
              for (int c = 0; c < d; ++c) {
                lhs += r(i * d + j, a * d + c) * uv(a * d + k, c * d + l);
                rhs += vu(j * d + c, i * d + a) * r(a * d + c, k * d + l);
              }
            worst = std::max(worst, std::abs(lhs - rhs));
            scale = std::max(scale, std::max(std::abs(lhs), std::abs(rhs)));
          }
  }
  return worst / scale;
}

double check_s_permutation(RapidityPair u, RapidityPair v, const ModularParam& p, const SampleBox& box) {
  const cplx w = u.u2 - v.u1 - p.eta();
  const MultiFunc s = [w, p](const std::vector<cplx>& z) {
    cplx out = 1.0;
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0}) out *= gamma(s1 * kI * z[0] + s2 * kI * z[1] + w, p);
    return out;
  };
  const MultiFunc f = test_function(p);
  const MultiFunc sf = [s, f](const std::vector<cplx>& z) { return s(z) * f(z); };
  const std::vector<OperatorMatrix> before{l_fundamental(u.u(), u.g(), p), l_fundamental(v.u(), v.g(), p)};
  const auto a = RapidityPair{u.u1, v.u1}, c = RapidityPair{u.u2, v.u2};
  const std::vector<OperatorMatrix> after{l_fundamental(a.u(), a.g(), p), l_fundamental(c.u(), c.g(), p)};
  double worst = 0.0, scale = 1e-300;
  for (const auto& z : sample_tuples(2, box))
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        const cplx lhs = s(z) * eval_expr(monodromy_entry(before, i, k), f, z);
        const cplx rhs = eval_expr(monodromy_entry(after, i, k), sf, z);
        worst = std::max(worst, std::abs(lhs - rhs));
        scale = std::max(scale, std::max(std::abs(lhs), std::abs(rhs)));
      }
  return worst / scale;
}

}  // namespace hmd
