// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hmd/errors.hpp"
#include "hmd/sklyanin.hpp"
#include "suites.hpp"

using namespace hmd;
using namespace hmd::cli;

namespace {

using Clock = std::chrono::steady_clock;

const cplx kB08(0.8, 0.0);
const cplx kB6 = std::polar(1.0, M_PI / 6);
const cplx kB5 = std::polar(1.0, M_PI / 5);
constexpr std::uint64_t kSeed = 20261019;

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " (FAILED)");
  }
};

struct Record {
  std::string suite;
  SessionConfig cfg;
  std::string json;
};
std::vector<Record> g_runs;  // first-run reports, for the determinism check

SuiteReport run(const std::string& suite, cplx b, std::uint64_t seed = kSeed) {
  SessionConfig c;
  c.b = b;
  c.seed = seed;
  SuiteReport r = run_suite(suite, c);
  g_runs.push_back({suite, c, report_json(r, c)});
  return r;
}

/// Largest residual over rows whose label starts with prefix; NaN if a row failed
/// to evaluate, -1 if no row matched.
double worst(const SuiteReport& r, const std::string& prefix) {
  double w = -1.0;
  for (const auto& row : r.rows)
    if (row.label.rfind(prefix, 0) == 0) {
      if (std::isnan(row.residual)) return NAN;
      w = std::max(w, row.residual);
    }
  return w;
}

bool below(double v, double lim) { return v >= 0.0 && v < lim; }

std::string bstr(cplx b) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "b=%.3g%+.3gi", b.real(), b.imag());
  return buf;
}

void require_below(Verdict& v, const std::string& what, double value, double lim) {
  v.require(below(value, lim), what + " " + sci(value) + " < " + sci(lim));
}

void require_all_pass(Verdict& v, const std::string& what, const SuiteReport& r, double lim) {
  double w = 0.0;
  bool ok = !r.rows.empty();
  for (const auto& row : r.rows) {
    if (row.counted) {
      ok = ok && row.pass();
      continue;
    }
    if (std::isnan(row.residual) || row.residual >= lim) ok = false;
    if (!std::isnan(row.residual)) w = std::max(w, row.residual);
  }
  v.require(ok, what + " worst " + sci(w) + " < " + sci(lim));
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Verdict c1() {
  Verdict v;
  const auto t0 = Clock::now();
  for (cplx b : {kB08, kB6}) {
    const auto r = run("gamma", b);
    require_below(v, bstr(b) + " shift b", worst(r, "shift by b"), 1e-9);
    require_below(v, "shift 1/b", worst(r, "shift by 1/b"), 1e-9);
  }
  const double t = seconds_since(t0);
  v.require(t < 60.0, "runtime " + sci(t) + " s");
  return v;
}

Verdict c2() {
  Verdict v;
  for (cplx b : {kB08, kB6}) {
    const auto r = run("gamma", b);
    require_below(v, bstr(b) + " reflection", worst(r, "reflection"), 1e-9);
    require_below(v, "modular", worst(r, "modular"), 1e-9);
  }
  return v;
}

Verdict c3() {
  Verdict v;
  require_below(v, "integral vs product at " + bstr(kB6), worst(run("gamma", kB6), "integral vs product"), 1e-7);
  return v;
}

Verdict c4() {
  Verdict v;
  const auto t0 = Clock::now();
  require_all_pass(v, "5 sextets", run("beta-integral", kB08), 1e-6);
  const double t = seconds_since(t0);
  v.require(t < 180.0, "runtime " + sci(t) + " s");
  return v;
}

Verdict c5() {
  Verdict v;
  const auto t0 = Clock::now();
  require_all_pass(v, "3 regime-1 sets", run("star-triangle", kB08), 1e-6);
  const double t = seconds_since(t0);
  v.require(t < 180.0, "runtime " + sci(t) + " s");
  return v;
}

Verdict c6() {
  Verdict v;
  const auto r = run("weights", kB08);
  require_below(v, "m(a) m(-a) - 1", worst(r, "m(a) m(-a)"), 1e-7);
  require_below(v, "m(a + eta) relation", worst(r, "m(a + eta)"), 1e-6);
  return v;
}

/// Three seeded moduli b, each paired with the suite's seeded labels g.
std::vector<cplx> random_moduli() {
  Sampler s(kSeed);
  std::vector<cplx> out;
  for (int i = 0; i < 3; ++i) out.push_back(std::polar(s.uniform(0.7, 1.0), s.uniform(0.0, 0.6)));
  return out;
}

Verdict c7() {
  Verdict v;
  const auto t0 = Clock::now();
  int k = 0;
  for (cplx b : random_moduli()) {
    const std::uint64_t seed = kSeed + std::uint64_t(++k);
    // One label per modulus: the first g the suite draws.
    const auto a = run("algebra", b, seed), c = run("cross", b, seed);
    require_below(v, bstr(b) + " relations", std::max(a.rows.at(0).residual, a.rows.at(1).residual), 1e-10);
    require_below(v, "cross", c.rows.at(0).residual, 1e-10);
  }
  const double t = seconds_since(t0);
  v.require(t < 30.0, "runtime " + sci(t) + " s");
  return v;
}

Verdict c8() {
  Verdict v;
  for (cplx b : {kB08, kB5}) require_all_pass(v, bstr(b) + " Casimirs", run("casimir", b), 1e-10);
  return v;
}

Verdict c9() {
  Verdict v;
  for (cplx b : {kB08, kB5}) {
    const ModularParam p(b);
    const auto vec = verma_vectors(RepLabel(0.37), p, 8);
    bool pattern = vec.size() == 9;
    for (std::size_t k = 0; k < vec.size(); ++k)
      for (const auto& [key, c] : vec[k].terms())
        if (key.second != 0 || std::abs(key.first) > int(k) || (key.first - int(k)) % 2 != 0) pattern = false;
    const double off = verma_coeffs(RepLabel(0.37), p, 8).off_pattern;
    v.require(pattern && off < 1e-12, bstr(b) + " harmonic support k <= 8, off-pattern " + sci(off));
    bool finite = true, c_ok = true;
    for (int n = 0; n <= 4; ++n) {
      try {
        const auto r = finite_dim_detect(n, p);
        finite = finite && r.is_invariant;
        if (n >= 2) c_ok = c_ok && r.c_nonzero;
      } catch (const Error&) {
        finite = false;
      }
    }
    v.require(finite, "finite dimension at g = (n+1)b/2, n <= 4");
    v.require(c_ok, "C|n+1> != 0 for n >= 2");
  }
  return v;
}

Verdict c10() {
  Verdict v;
  for (cplx b : {kB08, kB5}) require_below(v, bstr(b) + " intertwining", worst(run("intertwine", b), "M X(g)"), 1e-9);
  return v;
}

Verdict c11() {
  Verdict v;
  const auto r = run("inversion", kB08);
  require_below(v, "M(0) = 1", worst(r, "M(0)"), 1e-8);
  require_below(v, "contiguous", worst(r, "contiguous"), 1e-5);
  require_below(v, "integral vs factorized", worst(r, "integral vs factorized"), 1e-6);
  require_below(v, "inversion", worst(r, "M(-g) M(g)"), 1e-5);
  v.require(worst(r, "inversion flagged") == 0.0, "ExpectedViolation at g = b/2");
  return v;
}

Verdict c12() {
  Verdict v;
  for (cplx b : {kB08, kB5}) {
    const auto r = run("lax", b);
    require_below(v, bstr(b) + " L = L_gen", worst(r, "L(u) = L_gen"), 1e-10);
    require_below(v, "r_finite(n=1) shifted", worst(r, "r_finite"), 1e-10);
  }
  return v;
}

Verdict c13() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto y = run("ybe", kB08);
  v.require(worst(y, "seven-vertex pattern") == 0.0, "7 nonzero entries");
  require_below(v, "YBE over 5 (u, v)", worst(y, "seven-vertex YBE"), 1e-12);
  require_below(v, "unitarity", worst(run("unitarity", kB08), "seven-vertex"), 1e-12);
  const double t = seconds_since(t0);
  v.require(t < 10.0, "runtime " + sci(t) + " s");
  return v;
}

Verdict c14() {
  Verdict v;
  const auto r = run("factorization", kB08);
  require_below(v, "V symmetry", worst(r, "V(u, -z)"), 1e-14);
  require_below(v, "spin-1 YBE", worst(r, "spin-1"), 1e-10);
  return v;
}

Verdict c15() {
  Verdict v;
  for (cplx b : {kB08, kB5}) {
    const auto r = run("rll", b);
    require_below(v, bstr(b) + " RLL", worst(r, "RLL"), 1e-9);
    require_below(v, "S-permutation", worst(r, "S permutes"), 1e-10);
  }
  return v;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"gamma difference equations", c1},
      {"reflection and modular invariance", c2},
      {"integral vs product", c3},
      {"hyperbolic beta integral", c4},
      {"star-triangle relation", c5},
      {"normalization m(alpha)", c6},
      {"degenerate Sklyanin relations", c7},
      {"Casimir scalars", c8},
      {"Verma structure", c9},
      {"intertwining", c10},
      {"M-operator", c11},
      {"L-operator", c12},
      {"seven-vertex R-matrix", c13},
      {"spin-1 factorized R", c14},
      {"RLL and S-permutation", c15},
  };
  int failed = 0, k = 0;
  for (const auto& [name, fn] : criteria) {
    ++k;
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failed += !v.pass;
    std::printf("criterion %2d %s: %s  [%s]\n", k, v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
  }

  // 16: total time and determinism, by re-running every suite and comparing reports.
  const double first = seconds_since(t0);
  bool same = true;
  for (const auto& rec : g_runs) same = same && report_json(run_suite(rec.suite, rec.cfg), rec.cfg) == rec.json;
  const std::size_t compared = g_runs.size();
  const double total = seconds_since(t0);
  const bool ok16 = same && total < 600.0;
  failed += !ok16;
  std::printf("criterion 16 %s: full suite and determinism  [first pass %.1f s, total %.1f s < 600 s; %zu reports %s]\n",
              ok16 ? "PASS" : "FAIL", first, total, compared, same ? "byte-identical on rerun" : "DIFFER on rerun");
  return failed == 0 ? 0 : 1;
}
