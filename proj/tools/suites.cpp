#include "suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "hmd/errors.hpp"
#include "hmd/intertwiner.hpp"
#include "hmd/rmatrix.hpp"
#include "hmd/weights.hpp"
#include "json.hpp"

namespace hmd::cli {

void SessionConfig::validate() const {
  if (!(b.real() > 0.0)) throw DomainError("Re b must be positive");
  if (tol && !(*tol > 1e-14 && *tol < 1e-2)) throw DomainError("tol must lie in (1e-14, 1e-2)");
}

double Sampler::uniform(double lo, double hi) {
  const double unit = double(rng_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

cplx Sampler::box(double re_lo, double re_hi, double im_lo, double im_hi) {
  const double re = uniform(re_lo, re_hi);
  return {re, uniform(im_lo, im_hi)};
}

bool SuiteReport::pass() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass(); });
}

const Row* SuiteReport::worst() const {
  const Row* out = nullptr;
  auto key = [](const Row& r) {
    if (!r.pass()) return std::make_pair(1, std::isnan(r.residual) ? HUGE_VAL : r.residual);
    return std::make_pair(0, r.limit > 0.0 ? r.residual / r.limit : r.residual);
  };
  for (const auto& r : rows)
    if (!out || key(r) > key(*out)) out = &r;
  return out;
}

namespace {

const cplx kI(0.0, 1.0);

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string zstr(cplx z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g%+.4gi", z.real(), z.imag());
  return buf;
}

class Out {
 public:
  Out(const SessionConfig& cfg, SuiteReport& rep) : cfg_(cfg), rep_(rep) {}
  void num(std::string label, double residual, double limit) {
    rep_.rows.push_back({std::move(label), residual, cfg_.tol.value_or(limit), false});
  }
  /// Zero when the expected outcome was observed.
  void count(std::string label, double mismatch) {
    rep_.rows.push_back({std::move(label), mismatch, 0.0, true});
  }
  /// Runs fn; a library error becomes a failing row carrying its message.
  void guarded(const std::string& label, double limit, const std::function<double()>& fn) {
    try {
      num(label, fn(), limit);
    } catch (const Error& e) {
      num(label + " [" + e.what() + "]", NAN, limit);
    }
  }

 private:
  const SessionConfig& cfg_;
  SuiteReport& rep_;
};

double max_abs(const DenseCMatrix& m) { return m.cwiseAbs().maxCoeff(); }

cplx test_fn(cplx z) { return std::exp(-z * z) * (1.0 + 0.3 * z); }

/// max |a_ik f - c b_ik f| over entries and sample points, relative to max |a_ik f|.
double entry_diff(const OperatorMatrix& a, const OperatorMatrix& b, cplx c) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("entry_diff");
  double worst = 0.0, scale = 0.0;
  const auto pts = SampleBox{}.points();
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const ZFunc fa = apply_sampled(a.at(i, k), test_fn), fb = apply_sampled(b.at(i, k), test_fn);
      for (const cplx z : pts) {
        const cplx va = fa(z);
        worst = std::max(worst, std::abs(va - c * fb(z)));
        scale = std::max(scale, std::abs(va));
      }
    }
  return worst / scale;
}

double ybe_rel(const DenseCMatrix& r12, const DenseCMatrix& r13, const DenseCMatrix& r23, int d1,
               int d2, int d3) {
  return check_ybe(r12, r13, r23, d1, d2, d3) / (max_abs(r12) * max_abs(r13) * max_abs(r23));
}

// ---------------------------------------------------------------- suites

void suite_gamma(Out& out, const ModularParam& p, Sampler& s) {
  const cplx b = p.b(), bi = p.binv();
  const double w = std::min(b.real(), bi.real());
  double shift_b = 0, shift_bi = 0, refl = 0, modular = 0;
  for (int i = 0; i < 20; ++i) {
    const cplx z = s.box(0.05, w - 0.05, -1.5, 1.5);
    const cplx g0 = gamma_integral(z, p);
    const cplx gb = gamma_integral(z + b, p), gbi = gamma_integral(z + bi, p);
    shift_b = std::max(shift_b, std::abs(gb - 2.0 * std::sin(M_PI * b * z) * g0) / std::abs(gb));
    shift_bi = std::max(shift_bi, std::abs(gbi - 2.0 * std::sin(M_PI * bi * z) * g0) / std::abs(gbi));
    refl = std::max(refl, std::abs(g0 * gamma_integral(p.big_q() - z, p) - 1.0));
    modular = std::max(modular, std::abs(gamma_integral(z, p.swapped()) / g0 - 1.0));
  }
  out.num("shift by b, 20 strip points", shift_b, 1e-9);
  out.num("shift by 1/b, 20 strip points", shift_bi, 1e-9);
  out.num("reflection gamma(z) gamma(Q - z) = 1", refl, 1e-9);
  out.num("modular invariance b -> 1/b", modular, 1e-9);
  if ((b * b).imag() > 0.0) {
    double cross = 0;
    for (int i = 0; i < 10; ++i) {
      const cplx z = s.box(0.1, p.big_q().real() - 0.1, -1.0, 1.0);
      cross = std::max(cross, std::abs(gamma_product(z, p) / gamma_integral(z, p) - 1.0));
    }
    out.num("integral vs product, 10 points", cross, 1e-7);
  }
}

void suite_weights(Out& out, const ModularParam& p, Sampler& s) {
  for (double a : {0.1, 0.2}) {
    out.guarded(fmt("m(a) m(-a) = 1, a = %g", a), 1e-7,
                [&] { return std::abs(m_norm(a, p) * m_norm(-a, p) - 1.0); });
    out.guarded(fmt("m(a + eta) = gamma(2a) m(-a), a = %g", a), 1e-6, [&] {
      return std::abs(m_norm(a + p.eta(), p) / (gamma(2.0 * a, p) * m_norm(-a, p)) - 1.0);
    });
  }
  double rho_diff = 0;
  for (int i = 0; i < 5; ++i) {
    const cplx z = s.box(0.1, 1.0, -0.2, 0.2);
    rho_diff = std::max(rho_diff, std::abs(rho(z, p, RhoMode::GammaForm) / rho(z, p) - 1.0));
  }
  out.num("rho gamma form vs trigonometric form", rho_diff, 1e-9);
  if (classify_regime(p) != Regime::Outside) {
    const cplx w = weight_w(0.1, 0.3, -0.2, p);
    out.num("W real positive in its regime", w.real() > 0 ? std::abs(w.imag()) / std::abs(w) : 1.0,
            1e-9);
  }
}

void suite_star_triangle(Out& out, const ModularParam& p, Sampler& s) {
  const double width = -p.eta().real();
  for (int i = 0; i < 3; ++i) {
    const double al = s.uniform(-0.1, 0.1);
    const double be = al + width * s.uniform(0.15, 0.35);
    const double ga = be + width * s.uniform(0.15, 0.35);
    const double x = s.uniform(-0.5, 0.5), y = s.uniform(-0.5, 0.5), w = s.uniform(-0.5, 0.5);
    char buf[128];
    std::snprintf(buf, sizeof buf, "alpha, beta, gamma = %.3f, %.3f, %.3f", al, be, ga);
    out.guarded(buf, 1e-6, [&] { return check_star_triangle(al, be, ga, x, y, w, p); });
  }
}

BalancedSextet random_sextet(const ModularParam& p, Sampler& s) {
  const cplx q = p.big_q();
  for (;;) {
    BalancedSextet out;
    cplx sum = 0.0;
    for (int k = 0; k < 5; ++k) sum += out.g[k] = s.box(0.05, 0.6, -0.1, 0.1);
    out.g[5] = q - sum;
    if (out.g[5].real() > 0.05 && out.g[5].real() < 0.6) return out;
  }
}

void suite_beta_integral(Out& out, const ModularParam& p, Sampler& s) {
  for (int i = 0; i < 5; ++i) {
    const BalancedSextet sx = random_sextet(p, s);
    out.guarded("sextet " + std::to_string(i + 1) + ", g6 = " + zstr(sx.g[5]), 1e-6,
                [&] { return check_beta_integral(sx, p); });
  }
}

std::vector<cplx> random_labels(Sampler& s, int n) {
  std::vector<cplx> out;
  for (int i = 0; i < n; ++i) out.push_back(s.box(0.1, 0.6, -0.1, 0.1));
  return out;
}

void suite_algebra(Out& out, const ModularParam& p, Sampler& s) {
  for (const cplx g : random_labels(s, 3)) {
    out.num("plain relations, g = " + zstr(g), check_algebra(generators(g, p, Half::Plain)), 1e-10);
    out.num("tilde relations, g = " + zstr(g), check_algebra(generators(g, p, Half::Tilde)), 1e-10);
  }
}

void suite_cross(Out& out, const ModularParam& p, Sampler& s) {
  for (const cplx g : random_labels(s, 3))
    out.num("plain vs tilde, g = " + zstr(g),
            check_cross_relations(generators(g, p, Half::Plain), generators(g, p, Half::Tilde)), 1e-10);
}

void suite_casimir(Out& out, const ModularParam& p, Sampler& s) {
  for (const cplx g : random_labels(s, 3)) {
    out.num("plain Casimirs, g = " + zstr(g), casimirs(generators(g, p, Half::Plain), HUGE_VAL).residual,
            1e-10);
    out.num("tilde Casimirs, g = " + zstr(g), casimirs(generators(g, p, Half::Tilde), HUGE_VAL).residual,
            1e-10);
  }
}

void suite_intertwine(Out& out, const ModularParam& p, Sampler&) {
  for (auto [n, m] : {std::pair{1, 0}, {0, 1}, {2, 0}, {1, 1}}) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "M X(g) = X(-g) M at (%d, %d)", n, m);
    out.guarded(buf, 1e-9, [&, n = n, m = m] { return check_intertwining(n, m, p); });
  }
  for (auto [n, m] : {std::pair{0, 0}, {1, 0}}) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "contiguous, factorized (%d, %d)", n, m);
    out.guarded(buf, 1e-9, [&, n = n, m = m] { return check_contiguous_factorized(n, m, p); });
  }
}

void suite_inversion(Out& out, const ModularParam& p, Sampler& s) {
  const ZFunc phi = [](cplx x) { return std::exp(-x * x); };
  std::vector<cplx> zs;
  for (int i = 0; i < 4; ++i) zs.push_back(s.box(0.05, 0.9, -0.03, 0.03));

  out.guarded("M(0) = 1", 1e-8, [&] {
    double w = 0;
    for (const cplx z : zs) w = std::max(w, std::abs(m_apply_numeric(0.0, phi, z, p) - phi(z)));
    return w;
  });
  const double g1 = s.uniform(0.1, 0.3), g2 = -s.uniform(0.2, 0.35);
  for (const double g : {g1, g2}) {
    out.guarded(fmt("contiguous in b, g = %.4f", g), 1e-5,
                [&] { return check_contiguous_numeric(g, Half::Plain, phi, zs, p); });
    out.guarded(fmt("contiguous in 1/b, g = %.4f", g), 1e-5,
                [&] { return check_contiguous_numeric(g, Half::Tilde, phi, zs, p); });
  }
  out.guarded("integral vs factorized at g = b/2", 1e-6, [&] {
    const ZFunc fac = apply_sampled(m_factorized(1, 0, p), phi);
    double w = 0;
    for (const cplx z : zs) w = std::max(w, std::abs(m_apply_numeric(0.5 * p.b(), phi, z, p) - fac(z)));
    return w;
  });
  const double gi = s.uniform(0.12, 0.3);
  out.guarded(fmt("M(-g) M(g) = 1, g = %.4f", gi), 1e-5, [&] {
    std::vector<cplx> real_zs;
    for (const cplx z : zs) real_zs.push_back(z.real());
    return check_inversion(gi, p, real_zs).residual;
  });
  double violated = 1.0;
  try {
    check_inversion(0.5 * p.b(), p, {0.3});
  } catch (const ExpectedViolation&) {
    violated = 0.0;
  }
  out.count("inversion flagged at g = b/2", violated);
}

void suite_lax(Out& out, const ModularParam& p, Sampler& s) {
  for (int i = 0; i < 3; ++i) {
    const cplx u = s.box(-0.3, 0.3, -0.2, 0.2), g = s.box(0.1, 0.5, -0.1, 0.1);
    const std::string at = ", u = " + zstr(u) + ", g = " + zstr(g);
    const OperatorMatrix l = l_fundamental(u, g, p);
    out.num("L(u) = L_gen(u - eta)" + at, entry_diff(l, l_from_generators(u - p.eta(), g, p), 1.0), 1e-10);
    out.num("r_finite(u + 1/(2b), 1) = -L(u)/2" + at,
            entry_diff(r_finite(u + 0.5 * p.binv(), 1, g, p), l, -0.5), 1e-10);
  }
}

std::pair<cplx, cplx> random_uv(Sampler& s) {
  return {s.box(-0.4, 0.4, -0.25, 0.25), s.box(-0.4, 0.4, -0.25, 0.25)};
}

void suite_ybe(Out& out, const ModularParam& p, Sampler& s) {
  const DenseCMatrix r0 = seven_vertex(s.box(0.1, 0.4, -0.2, 0.2), p);
  int nz = 0;
  for (Eigen::Index i = 0; i < r0.size(); ++i) nz += std::abs(r0(i)) > 1e-12 * max_abs(r0);
  out.count("seven-vertex pattern, " + std::to_string(nz) + " nonzero entries", std::abs(nz - 7));
  double w7 = 0, wd = 0;
  for (int i = 0; i < 5; ++i) {
    const auto [u, v] = random_uv(s);
    w7 = std::max(w7, ybe_rel(seven_vertex(u - v, p), seven_vertex(u, p), seven_vertex(v, p), 2, 2, 2));
    auto rd = [&](cplx x) { return r_dense(x, 1, 1, 0, p).raw; };
    wd = std::max(wd, ybe_rel(rd(u - v), rd(u), rd(v), 2, 2, 2));
  }
  out.num("seven-vertex YBE, 5 pairs (u, v)", w7, 1e-12);
  out.num("factorized R (n = 1) YBE, 5 pairs (u, v)", wd, 1e-12);
}

void suite_unitarity(Out& out, const ModularParam& p, Sampler& s) {
  double w7 = 0, w1 = 0, w2 = 0;
  for (int i = 0; i < 5; ++i) {
    const cplx u = s.box(-0.4, 0.4, -0.25, 0.25);
    w7 = std::max(w7, check_unitarity(seven_vertex(u, p), seven_vertex(-u, p)).residual);
    w1 = std::max(w1, check_unitarity(r_dense(u, 1, 1, 0, p).raw, r_dense(-u, 1, 1, 0, p).raw).residual);
    w2 = std::max(w2, check_unitarity(r_dense(u, 2, 1, 0, p).raw, r_dense(-u, 2, 1, 0, p).raw).residual);
  }
  out.num("seven-vertex R(u) R(-u), 5 values of u", w7, 1e-12);
  out.num("factorized R (n = 1) R(u) R(-u)", w1, 1e-12);
  out.num("factorized R (n = 2) R(u) R(-u)", w2, 1e-10);
}

void suite_factorization(Out& out, const ModularParam& p, Sampler& s) {
  for (int n : {1, 2}) {
    const cplx u = s.box(-0.4, 0.4, -0.2, 0.2), z = s.box(-0.3, 0.3, -0.1, 0.1);
    const auto v = v_matrix(u, n, p);
    double diff = 0, scale = 0;
    for (int j = 0; j <= n; ++j)
      for (int l = 0; l <= n; ++l) {
        diff = std::max(diff, std::abs(v[j][l].eval(-z, p) - v[j][n - l].eval(z, p)));
        scale = std::max(scale, std::abs(v[j][l].eval(z, p)));
      }
    out.num("V(u, -z) = V(u, z) C, n = " + std::to_string(n), diff / scale, 1e-14);
  }
  double w1 = 0, w2 = 0;
  for (int i = 0; i < 3; ++i) {
    const auto [u, v] = random_uv(s);
    auto r = [&](cplx x, int n, int n2) { return r_dense(x, n, n2, 0, p).raw; };
    w1 = std::max(w1, ybe_rel(r(u - v, 2, 1), r(u, 2, 1), r(v, 1, 1), 3, 2, 2));
    w2 = std::max(w2, ybe_rel(r(u - v, 2, 2), r(u, 2, 1), r(v, 2, 1), 3, 3, 2));
  }
  out.num("spin-1 YBE on C3 C2 C2, 3 pairs (u, v)", w1, 1e-10);
  out.num("spin-1 YBE on C3 C3 C2, 3 pairs (u, v)", w2, 1e-10);
  for (auto [n, m] : {std::pair{2, 0}, {1, 1}}) {
    const cplx x = s.box(0.05, 0.3, -0.05, 0.05), z = s.box(0.05, 0.3, -0.05, 0.05);
    const cplx g = RepLabel::lattice_value(n, m, p);
    cplx ref = 1.0;
    for (double sx : {1.0, -1.0})
      for (double sz : {1.0, -1.0}) ref *= gamma(g + sx * kI * x + sz * kI * z, p);
    char buf[80];
    std::snprintf(buf, sizeof buf, "generating function at (%d, %d) vs gamma", n, m);
    out.num(buf, std::abs(generating_function(n, m, x, p).eval(z, p) / ref - 1.0), 1e-9);
    std::snprintf(buf, sizeof buf, "kernel of M at (%d, %d) has dimension %d", n, m, (n + 1) * (m + 1));
    out.count(buf, std::abs(int(kernel_basis(n, m, p).size()) - (n + 1) * (m + 1)));
  }
}

void suite_rll(Out& out, const ModularParam& p, Sampler& s) {
  const auto [u, v] = random_uv(s);
  const cplx g1 = s.box(0.15, 0.5, -0.1, 0.1), g2 = s.box(0.15, 0.5, -0.1, 0.1);
  const DenseCMatrix r = seven_vertex(u - v, p);
  const cplx sh = 0.5 * p.binv();
  auto l = [&](cplx w, cplx g) { return l_fundamental(w - sh, g, p); };
  out.num("RLL one site, g = " + zstr(g1), check_rll(r, {l(u, g1)}, {l(v, g1)}), 1e-9);
  out.num("RLL two sites, g = " + zstr(g1) + ", " + zstr(g2),
          check_rll(r, {l(u, g1), l(u, g2)}, {l(v, g1), l(v, g2)}), 1e-9);
  const RapidityPair a{s.box(-0.25, 0.25, -0.05, 0.05), s.box(-0.25, 0.25, -0.05, 0.05)};
  const RapidityPair c{s.box(-0.25, 0.25, -0.05, 0.05), s.box(-0.25, 0.25, -0.05, 0.05)};
  out.guarded("S permutes rapidities", 1e-10, [&] { return check_s_permutation(a, c, p); });
}

using SuiteFn = void (*)(Out&, const ModularParam&, Sampler&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"gamma", suite_gamma},
      {"weights", suite_weights},
      {"star-triangle", suite_star_triangle},
      {"beta-integral", suite_beta_integral},
      {"algebra", suite_algebra},
      {"cross", suite_cross},
      {"casimir", suite_casimir},
      {"intertwine", suite_intertwine},
      {"inversion", suite_inversion},
      {"lax", suite_lax},
      {"ybe", suite_ybe},
      {"rll", suite_rll},
      {"unitarity", suite_unitarity},
      {"factorization", suite_factorization},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const SessionConfig& cfg) {
  cfg.validate();
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.first == name; });
  if (it == reg.end()) throw DomainError("unknown suite " + name);
  SuiteReport rep{name, {}, 0.0};
  Out out(cfg, rep);
  Sampler sampler(cfg.seed);
  const ModularParam p(cfg.b);
  const auto t0 = std::chrono::steady_clock::now();
  it->second(out, p, sampler);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string report_human(const SuiteReport& r, const SessionConfig& cfg) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "suite %s (version %s)  b = %s  seed = %llu", r.suite.c_str(),
                kSuiteVersion, zstr(cfg.b).c_str(), static_cast<unsigned long long>(cfg.seed));
  os << buf;
  if (cfg.tol) os << "  tol = " << sci(*cfg.tol);
  os << '\n';
  for (const auto& row : r.rows) {
    if (row.counted)
      std::snprintf(buf, sizeof buf, "  %-4s %-72s %s\n", row.pass() ? "ok" : "FAIL", row.label.c_str(),
                    row.pass() ? "as expected" : "unexpected");
    else
      std::snprintf(buf, sizeof buf, "  %-4s %-72s %10.3e  (limit %.1e)\n", row.pass() ? "ok" : "FAIL",
                    row.label.c_str(), row.residual, row.limit);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%s in %.2f s\n", r.pass() ? "PASS" : "FAIL", r.seconds);
  os << buf;
  if (!r.pass())
    if (const Row* w = r.worst()) os << "worst: " << w->label << '\n';
  return os.str();
}

std::string report_json(const SuiteReport& r, const SessionConfig& cfg) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["version"] = kSuiteVersion;
  j["b"] = {cfg.b.real(), cfg.b.imag()};
  j["tol"] = cfg.tol ? nlohmann::ordered_json(*cfg.tol) : nlohmann::ordered_json(nullptr);
  j["seed"] = cfg.seed;
  j["pass"] = r.pass();
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json e;
    e["label"] = row.label;
    e["residual"] = std::isnan(row.residual) ? nlohmann::ordered_json(nullptr)
                                             : nlohmann::ordered_json(row.residual);
    e["limit"] = row.limit;
    e["kind"] = row.counted ? "exact" : "tolerance";
    e["pass"] = row.pass();
    rows.push_back(std::move(e));
  }
  if (!r.pass())
    if (const Row* w = r.worst()) j["worst"] = w->label;
  return j.dump(2) + "\n";
}

}  // namespace hmd::cli
