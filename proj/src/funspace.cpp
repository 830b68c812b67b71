#include "hmd/funspace.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hmd/errors.hpp"

namespace hmd {
namespace {

constexpr cplx kI{0.0, 1.0};

bool same_poly(const TrigPoly& a, const TrigPoly& b, double tol) {
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() <= tol * scale;
}

// Scales f so that its lexicographically leading coefficient is 1 and returns
// the removed factor.
lcplx normalize_factor(TrigPoly& f) {
  const TrigPoly pr = f.pruned(1e-17);
  if (pr.empty()) throw DomainError("zero denominator factor");
  const lcplx lead = pr.terms().rbegin()->second;
  f = pr * (1.0L / lead);
  return lead;
}

// Multiset helpers over factor lists, matching factors approximately.
int find_factor(const std::vector<TrigPoly>& list, const TrigPoly& f, const std::vector<bool>& used,
                double tol) {
  for (std::size_t i = 0; i < list.size(); ++i)
    if (!used[i] && same_poly(list[i], f, tol)) return int(i);
  return -1;
}

bool same_multiset(const std::vector<TrigPoly>& a, const std::vector<TrigPoly>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& f : a) {
    const int k = find_factor(b, f, used, tol);
    if (k < 0) return false;
    used[k] = true;
  }
  return true;
}

// Least common multiple of factor multisets.
std::vector<TrigPoly> lcm_factors(const std::vector<const std::vector<TrigPoly>*>& lists,
                                  double tol) {
  std::vector<TrigPoly> out;
  for (const auto* list : lists) {
    std::vector<bool> used(out.size(), false);
    for (const auto& f : *list) {
      const int k = find_factor(out, f, used, tol);
      if (k >= 0) {
        used[k] = true;
      } else {
        out.push_back(f);
        used.push_back(true);
      }
    }
  }
  return out;
}

// Factors of `all` not matched by `part`.
std::vector<TrigPoly> complement(const std::vector<TrigPoly>& all, const std::vector<TrigPoly>& part,
                                 double tol) {
  std::vector<bool> used(all.size(), false);
  for (const auto& f : part) {
    const int k = find_factor(all, f, used, tol);
    if (k < 0) throw DomainError("factor missing from common denominator");
    used[k] = true;
  }
  std::vector<TrigPoly> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (!used[i]) out.push_back(all[i]);
  return out;
}

TrigPoly product(const std::vector<TrigPoly>& fs) {
  TrigPoly r = TrigPoly::constant(1.0);
  for (const auto& f : fs) r = r * f;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- TrigPoly

TrigPoly TrigPoly::constant(lcplx c) { return monomial(0, 0, c); }

TrigPoly TrigPoly::monomial(int j, int l, lcplx c) {
  TrigPoly p;
  p.add(j, l, c);
  return p;
}

TrigPoly TrigPoly::t_cos(int j) { return monomial(j, 0) + monomial(-j, 0); }
TrigPoly TrigPoly::s_cos(int l) { return monomial(0, l) + monomial(0, -l); }

lcplx TrigPoly::coeff(int j, int l) const {
  auto it = c_.find({j, l});
  return it == c_.end() ? lcplx{} : it->second;
}

void TrigPoly::add(int j, int l, lcplx c) {
  if (c == 0.0L) return;
  auto [it, inserted] = c_.try_emplace({j, l}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0L) c_.erase(it);
  }
}

double TrigPoly::norm() const {
  double m = 0.0;
  for (const auto& [k, v] : c_) m = std::max(m, double(std::abs(v)));
  return m;
}

TrigPoly TrigPoly::pruned(double rel_tol) const {
  const double thr = rel_tol * norm();
  TrigPoly r;
  for (const auto& [k, v] : c_)
    if (std::abs(v) > thr) r.c_.emplace(k, v);
  return r;
}

bool TrigPoly::is_even(double tol) const {
  const double scale = std::max(norm(), 1e-300);
  for (const auto& [k, v] : c_)
    if (std::abs(v - coeff(-k.first, -k.second)) > tol * scale) return false;
  return true;
}

cplx TrigPoly::eval(cplx z, const ModularParam& p) const {
  const lcplx et = 2.0L * lcplx(M_PI * p.b()) * lcplx(z);
  const lcplx es = 2.0L * lcplx(M_PI * p.binv()) * lcplx(z);
  lcplx sum{};
  for (const auto& [k, v] : c_)
    sum += v * std::exp((long double)k.first * et + (long double)k.second * es);
  return cplx(sum);
}

int TrigPoly::min_j() const {
  int m = 0;
  bool first = true;
  for (const auto& [k, v] : c_) {
    if (first || k.first < m) m = k.first;
    first = false;
  }
  return m;
}
int TrigPoly::max_j() const { return c_.empty() ? 0 : c_.rbegin()->first.first; }
int TrigPoly::min_l() const {
  int m = 0;
  bool first = true;
  for (const auto& [k, v] : c_) {
    if (first || k.second < m) m = k.second;
    first = false;
  }
  return m;
}
int TrigPoly::max_l() const {
  int m = 0;
  bool first = true;
  for (const auto& [k, v] : c_) {
    if (first || k.second > m) m = k.second;
    first = false;
  }
  return m;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  for (const auto& [k, v] : o.c_) add(k.first, k.second, v);
  return *this;
}
TrigPoly& TrigPoly::operator-=(const TrigPoly& o) {
  for (const auto& [k, v] : o.c_) add(k.first, k.second, -v);
  return *this;
}
TrigPoly& TrigPoly::operator*=(lcplx s) {
  if (s == 0.0L) {
    c_.clear();
    return *this;
  }
  for (auto& [k, v] : c_) v *= s;
  return *this;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly r;
  for (const auto& [ka, va] : a.c_)
    for (const auto& [kb, vb] : b.c_) r.add(ka.first + kb.first, ka.second + kb.second, va * vb);
  return r;
}

// ---------------------------------------------------------------- shifts

cplx Shift::offset(const ModularParam& p) const {
  return kI * (0.5 * double(a) * p.b() + 0.5 * double(c) * p.binv());
}

cplx poly_eval(const TrigPoly& pl, cplx z, const ModularParam& p) { return pl.eval(z, p); }

TrigPoly poly_shift(const TrigPoly& pl, Shift sh, const ModularParam& p) {
  if (sh.a == 0 && sh.c == 0) return pl;
  const lcplx b = lcplx(p.b());
  const lcplx b2 = b * b;
  const long double pi = std::acos(-1.0L);
  TrigPoly r;
  for (const auto& [k, v] : pl.terms()) {
    const int j = k.first, l = k.second;
    const long double sign = ((j * sh.c + l * sh.a) % 2 == 0) ? 1.0L : -1.0L;
    const lcplx phase = std::exp(lcplx(0.0L, pi) * (b2 * (long double)(j * sh.a) +
                                                     (long double)(l * sh.c) / b2));
    r.add(j, l, sign * phase * v);
  }
  return r;
}

namespace {

// Lexicographic long division from the leading term; returns the quotient and
// stores the remainder size relative to the largest term met on the way.
TrigPoly divide_from_top(const TrigPoly& num, const TrigPoly& den, double& rel_rem) {
  const double scale = num.norm();
  TrigPoly rem = num;
  const auto [dkey, dlead] = *den.terms().rbegin();
  const int jlo = num.min_j() - den.min_j(), jhi = num.max_j() - den.max_j();
  const int llo = num.min_l() - den.min_l(), lhi = num.max_l() - den.max_l();
  const double drop = 1e-16 * scale;
  TrigPoly quot;
  double peak = scale;
  while (true) {
    // Discard roundoff-sized leading terms.
    while (!rem.empty() && std::abs(rem.terms().rbegin()->second) <= drop) {
      const auto k = rem.terms().rbegin()->first;
      rem.add(k.first, k.second, -rem.terms().rbegin()->second);
    }
    if (rem.empty()) break;
    const auto [rkey, rlead] = *rem.terms().rbegin();
    const int qj = rkey.first - dkey.first, ql = rkey.second - dkey.second;
    if (qj < jlo || qj > jhi || ql < llo || ql > lhi) break;
    const lcplx coef = rlead / dlead;
    quot.add(qj, ql, coef);
    peak = std::max(peak, double(std::abs(coef)) * den.norm());
    for (const auto& [k, v] : den.terms()) rem.add(k.first + qj, k.second + ql, -coef * v);
    // The leading key cancels exactly by construction.
    const lcplx left = rem.coeff(rkey.first, rkey.second);
    if (left != 0.0L) rem.add(rkey.first, rkey.second, -left);
  }
  rel_rem = rem.norm() / peak;
  return quot;
}

TrigPoly reflected(const TrigPoly& p) {
  TrigPoly r;
  for (const auto& [k, v] : p.terms()) r.add(-k.first, -k.second, v);
  return r;
}

}  // namespace

TrigPoly poly_div_exact(const TrigPoly& num, const TrigPoly& den_in, double tol) {
  const TrigPoly den = den_in.pruned(1e-17);
  if (den.empty()) throw DomainError("division by the zero polynomial");
  if (num.empty()) return {};
  // Elimination from either end; the stable direction depends on where the
  // roots of the divisor lie, so keep whichever leaves the smaller remainder.
  double rem_top = 0.0, rem_bottom = 0.0;
  TrigPoly q = divide_from_top(num, den, rem_top);
  if (rem_top > 1e-17) {
    TrigPoly qb = reflected(divide_from_top(reflected(num), reflected(den), rem_bottom));
    if (rem_bottom < rem_top) {
      q = std::move(qb);
      rem_top = rem_bottom;
    }
  }
  if (rem_top > tol) {
    throw NotDivisible("Laurent division leaves a remainder of relative size " +
                       sci(rem_top));
  }
  return q;
}

// ---------------------------------------------------------------- DiffOp

DiffOp DiffOp::identity(const ModularParam& p) { return shift(p, {0, 0}); }

DiffOp DiffOp::shift(const ModularParam& p, Shift sh) {
  DiffOp op(p);
  op.add_term(TrigPoly::constant(1.0), {}, sh);
  return op;
}

DiffOp DiffOp::multiply(const ModularParam& p, const TrigPoly& f) {
  DiffOp op(p);
  op.add_term(f, {}, {0, 0});
  return op;
}

void DiffOp::add_term(TrigPoly num, std::vector<TrigPoly> den, Shift sh) {
  for (auto& f : den) {
    if (f.pruned(1e-17).terms().size() == 1) {
      // Monomial factors are units: fold them into the numerator.
      const auto [k, v] = *f.pruned(1e-17).terms().begin();
      num = num * TrigPoly::monomial(-k.first, -k.second, 1.0L / v);
      f = TrigPoly::constant(1.0);
      continue;
    }
    num *= 1.0L / normalize_factor(f);
  }
  std::erase_if(den, [](const TrigPoly& f) {
    return f.terms().size() == 1 && f.terms().begin()->first == TrigPoly::Key{0, 0};
  });
  if (num.empty()) return;
  for (auto& t : terms_) {
    if (t.shift == sh && same_multiset(t.den, den, 1e-12)) {
      t.num += num;
      return;
    }
  }
  terms_.push_back(DiffTerm{std::move(num), std::move(den), sh});
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  for (const auto& t : o.terms_) add_term(t.num, t.den, t.shift);
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
  for (const auto& t : o.terms_) add_term(-t.num, t.den, t.shift);
  return *this;
}

DiffOp& DiffOp::operator*=(cplx s) {
  for (auto& t : terms_) t.num *= s;
  if (s == 0.0) terms_.clear();
  return *this;
}

DiffOp operator*(const DiffOp& a, const DiffOp& b) {
  const ModularParam& p = a.param();
  DiffOp r(p);
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      std::vector<TrigPoly> den = ta.den;
      for (const auto& f : tb.den) den.push_back(poly_shift(f, ta.shift, p));
      r.add_term(ta.num * poly_shift(tb.num, ta.shift, p), std::move(den), ta.shift + tb.shift);
    }
  }
  return r;
}

std::map<Shift, std::pair<TrigPoly, std::vector<TrigPoly>>> DiffOp::collected(double tol) const {
  std::map<Shift, std::vector<const DiffTerm*>> groups;
  for (const auto& t : terms_) groups[t.shift].push_back(&t);
  std::map<Shift, std::pair<TrigPoly, std::vector<TrigPoly>>> out;
  for (const auto& [sh, ts] : groups) {
    std::vector<const std::vector<TrigPoly>*> lists;
    for (const auto* t : ts) lists.push_back(&t->den);
    auto lcm = lcm_factors(lists, tol);
    TrigPoly num;
    for (const auto* t : ts) num += t->num * product(complement(lcm, t->den, tol));
    out[sh] = {num, lcm};
  }
  return out;
}

DiffOp diffop_compose(const DiffOp& a, const DiffOp& b) { return a * b; }
DiffOp diffop_commutator(const DiffOp& a, const DiffOp& b) { return a * b - b * a; }
DiffOp diffop_anticommutator(const DiffOp& a, const DiffOp& b) { return a * b + b * a; }

TrigPoly diffop_apply(const DiffOp& op, const TrigPoly& pl, double tol) {
  const ModularParam& p = op.param();
  std::vector<const std::vector<TrigPoly>*> lists;
  for (const auto& t : op.terms()) lists.push_back(&t.den);
  const auto lcm = lcm_factors(lists, 1e-12);
  TrigPoly sum;
  double mag = 0.0;
  for (const auto& t : op.terms()) {
    const TrigPoly part = t.num * poly_shift(pl, t.shift, p) * product(complement(lcm, t.den, 1e-12));
    mag = std::max(mag, part.norm());
    sum += part;
  }
  // Cancellation residue relative to the summands. Coefficients built from
  // double precision phases carry ~1e-15 noise, which is left undividable
  // when the exact image vanishes; the coarser cut handles that case.
  auto divide = [&](double cut) {
    TrigPoly clean;
    for (const auto& [k, v] : sum.terms())
      if (std::abs(v) > cut * mag) clean.add(k.first, k.second, v);
    for (const auto& f : lcm) clean = poly_div_exact(clean, f, tol);
    return clean;
  };
  try {
    return divide(1e-16);
  } catch (const NotDivisible&) {
    return divide(1e-13);
  }
}

ZFunc apply_sampled(const DiffOp& op, ZFunc f) {
  return [op, f = std::move(f)](cplx z) {
    const ModularParam& p = op.param();
    cplx sum{};
    for (const auto& t : op.terms()) {
      cplx c = t.num.eval(z, p);
      for (const auto& d : t.den) c /= d.eval(z, p);
      sum += c * f(z + t.shift.offset(p));
    }
    return sum;
  };
}

MultiFunc apply_sampled(const DiffOp& op, std::size_t var, MultiFunc f) {
  return [op, var, f = std::move(f)](const std::vector<cplx>& zs) {
    const ModularParam& p = op.param();
    cplx sum{};
    std::vector<cplx> shifted = zs;
    for (const auto& t : op.terms()) {
      cplx c = t.num.eval(zs[var], p);
      for (const auto& d : t.den) c /= d.eval(zs[var], p);
      shifted[var] = zs[var] + t.shift.offset(p);
      sum += c * f(shifted);
    }
    return sum;
  };
}

// ---------------------------------------------------------------- sampling

std::vector<cplx> SampleBox::points() const {
  if (count < 8) throw DomainError("SampleBox needs at least 8 points");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(re_min, re_max), im(im_min, im_max);
  std::vector<cplx> out;
  out.reserve(count);
  while (int(out.size()) < count) {
    const cplx z(re(rng), im(rng));
    if (std::abs(z) >= exclusion_radius) out.push_back(z);
  }
  return out;
}

SampleReport func_equal_sampled(const ZFunc& f, const ZFunc& g, const SampleBox& box, double tol) {
  double max_res = 0.0, max_f = 0.0;
  for (const cplx z : box.points()) {
    const cplx fv = f(z);
    max_res = std::max(max_res, std::abs(fv - g(z)));
    max_f = std::max(max_f, std::abs(fv));
  }
  return SampleReport{max_res < tol * std::max(1.0, max_f), max_res, box.seed};
}

// ---------------------------------------------------------------- words

namespace {

// Roundoff scale of f at z: coefficient errors are uniform at the level of the
// largest coefficient, so weight every monomial of the support by it.
double abs_eval(const TrigPoly& f, cplx z, const ModularParam& p) {
  const double rt = (2.0 * M_PI * p.b() * z).real(), rs = (2.0 * M_PI * p.binv() * z).real();
  double s = 0.0;
  for (const auto& [k, v] : f.terms()) s += std::exp(k.first * rt + k.second * rs);
  return s * f.norm();
}

ZFunc sampled_word(const Word& word, const TrigPoly& f, const ModularParam& p) {
  ZFunc v = [f, p](cplx z) { return f.eval(z, p); };
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = apply_sampled(**it, v);
  return v;
}

double sampled_residual(const Combo& lhs, const Combo& rhs, const TrigPoly& f, const ModularParam& p,
                        const SampleBox& box) {
  std::vector<std::pair<cplx, ZFunc>> ls, rs;
  for (const auto& [c, w] : lhs) ls.emplace_back(c, sampled_word(w, f, p));
  for (const auto& [c, w] : rhs) rs.emplace_back(c, sampled_word(w, f, p));
  double res = 0.0, scale = 1e-300;
  for (const cplx z : box.points()) {
    cplx d = 0.0;
    for (const auto& [c, g] : ls) {
      const cplx v = c * g(z);
      d += v;
      scale = std::max(scale, std::abs(v));
    }
    for (const auto& [c, g] : rs) {
      const cplx v = c * g(z);
      d -= v;
      scale = std::max(scale, std::abs(v));
    }
    res = std::max(res, std::abs(d));
  }
  return res / scale;
}

}  // namespace

TrigPoly apply_combo(const Combo& combo, const TrigPoly& f, std::vector<TrigPoly>* parts) {
  TrigPoly out;
  for (const auto& [c, word] : combo) {
    TrigPoly v = f;
    if (parts) parts->push_back(v * c);
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      v = diffop_apply(**it, v);
      if (parts) parts->push_back(v * c);
    }
    out += v * c;
  }
  return out;
}

double word_relation_residual(const Combo& lhs, const Combo& rhs, const std::vector<TrigPoly>& family,
                              const ModularParam& p, const SampleBox& box) {
  double worst = 0.0;
  for (const auto& f : family) {
    std::vector<TrigPoly> parts;
    TrigPoly l, r;
    try {
      l = apply_combo(lhs, f, &parts);
      r = apply_combo(rhs, f, &parts);
    } catch (const NotDivisible&) {
      worst = std::max(worst, sampled_residual(lhs, rhs, f, p, box));
      continue;
    }
    ZFunc lz = [l, p](cplx z) { return l.eval(z, p); };
    ZFunc rz = [r, p](cplx z) { return r.eval(z, p); };
    const auto rep = func_equal_sampled(lz, rz, box, 1.0);
    double scale = 1e-300;
    for (const cplx z : box.points())
      for (const auto& w : parts) scale = std::max(scale, abs_eval(w, z, p));
    worst = std::max(worst, rep.max_residual / scale);
  }
  return worst;
}

// ---------------------------------------------------------------- matrices

namespace {

struct CoefficientTable {
  std::map<TrigPoly::Key, int> index;
  void add_keys(const TrigPoly& p) {
    for (const auto& [k, v] : p.terms()) index.try_emplace(k, 0);
  }
  void finalize() {
    int i = 0;
    for (auto& [k, v] : index) v = i++;
  }
  Eigen::VectorXcd vec(const TrigPoly& p) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index(index.size()));
    for (const auto& [k, c] : p.terms()) v(index.at(k)) = cplx(c);
    return v;
  }
};

}  // namespace

Eigen::VectorXcd coordinates_in(const TrigPoly& v, const std::vector<TrigPoly>& basis,
                                double* residual) {
  CoefficientTable tab;
  for (const auto& b : basis) tab.add_keys(b);
  tab.add_keys(v);
  tab.finalize();
  const Eigen::Index rows = Eigen::Index(tab.index.size());
  Eigen::MatrixXcd B(rows, Eigen::Index(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) B.col(Eigen::Index(j)) = tab.vec(basis[j]);
  const Eigen::VectorXcd y = tab.vec(v);
  // Column equilibration: basis vectors may differ in size by many orders.
  Eigen::VectorXd colscale(B.cols());
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    colscale(j) = B.col(j).norm();
    if (colscale(j) == 0.0) throw SingularBasis("basis contains the zero polynomial");
  }
  const Eigen::MatrixXcd Bs = B * colscale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(Bs);
  qr.setThreshold(1e-12);
  if (qr.rank() < Eigen::Index(basis.size())) throw SingularBasis("basis is linearly dependent");
  Eigen::VectorXcd x = colscale.cwiseInverse().asDiagonal() * qr.solve(y);
  if (residual) *residual = (B * x - y).norm() / std::max(1.0, y.norm());
  return x;
}

DenseCMatrix matrix_of_operator(const DiffOp& op, const std::vector<TrigPoly>& basis, double tol) {
  const Eigen::Index n = Eigen::Index(basis.size());
  DenseCMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    TrigPoly img;
    try {
      img = diffop_apply(op, basis[std::size_t(j)], tol);
    } catch (const NotDivisible&) {
      throw NotInvariant("operator image is not a Laurent polynomial");
    }
    double res = 0.0;
    m.col(j) = coordinates_in(img, basis, &res);
    if (res >= tol) {
      throw NotInvariant("operator leaves the span of the basis (residual " +
                         sci(res) + ")");
    }
  }
  return m;
}

}  // namespace hmd
