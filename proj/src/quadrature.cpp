#include "hmd/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <limits>
#include <string>
#include <tuple>

#include "hmd/errors.hpp"

namespace hmd {
namespace {

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// 15 abscissae on [-1,1] in ascending order with Kronrod and Gauss weights
// (Gauss weight zero where the node is Kronrod-only).
struct Rule15 {
  std::array<double, 15> x{};
  std::array<double, 15> wk{};
  std::array<double, 15> wg{};
};

Rule15 make_rule() {
  Rule15 r;
  for (int i = 0; i < 7; ++i) {
    r.x[i] = -kXgk[i];
    r.x[14 - i] = kXgk[i];
    r.wk[i] = r.wk[14 - i] = kWgk[i];
    if (i % 2 == 1) r.wg[i] = r.wg[14 - i] = kWg[i / 2];
  }
  r.x[7] = 0.0;
  r.wk[7] = kWgk[7];
  r.wg[7] = kWg[3];
  return r;
}

const Rule15& rule() {
  static const Rule15 r = make_rule();
  return r;
}

// A parametrized piece of a contour: the horizontal line t = s + i*offset,
// the arc t = radius * exp(i s), or, when `inverse` is nonzero, the tail
// t = inverse / s + i*offset for s in (0, 1].
struct Segment {
  double a = 0.0;
  double b = 0.0;
  bool arc = false;
  double offset = 0.0;
  double inverse = 0.0;

  cplx point(double s) const {
    if (inverse != 0.0) return cplx(inverse / s, offset);
    return arc ? std::polar(offset, s) : cplx(s, offset);
  }
  cplx jacobian(double s) const {
    if (inverse != 0.0) return std::abs(inverse) / (s * s);
    return arc ? cplx(0.0, 1.0) * std::polar(offset, s) : cplx(1.0, 0.0);
  }
};

double line_offset(const Contour& c) {
  return c.kind == Contour::Kind::ShiftedLine ? c.offset : 0.0;
}

std::vector<Segment> core_segments(const Contour& c, double T) {
  if (c.kind == Contour::Kind::DetourAboveOrigin) {
    const double r = c.offset;
    return {Segment{-T, -r, false, 0.0}, Segment{M_PI, 0.0, true, r},
            Segment{r, T, false, 0.0}};
  }
  return {Segment{-T, T, false, line_offset(c)}};
}

std::vector<Segment> tail_segments(const Contour& c, double T) {
  const double d = line_offset(c);
  return {Segment{-2.0 * T, -T, false, d}, Segment{T, 2.0 * T, false, d}};
}

// Everything beyond |Re t| = T, for tails that decay only algebraically.
std::vector<Segment> infinite_tails(const Contour& c, double T) {
  const double d = line_offset(c);
  return {Segment{0.0, 1.0, false, d, -T}, Segment{0.0, 1.0, false, d, T}};
}

struct Panel1d {
  Segment seg;
  double a, b;
  cplx value;
  double err;
  bool at_floor;
  bool operator<(const Panel1d& o) const { return err < o.err; }
};

Panel1d gk15(const Integrand1d& f, const Segment& seg, double a, double b) {
  const auto& r = rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  std::array<cplx, 15> vals;
  cplx k{}, g{};
  for (int i = 0; i < 15; ++i) {
    const double s = mid + half * r.x[i];
    vals[i] = f(seg.point(s)) * seg.jacobian(s);
    k += r.wk[i] * vals[i];
    g += r.wg[i] * vals[i];
  }
  const cplx mean = k * 0.5;
  double resasc = 0.0;
  for (int i = 0; i < 15; ++i) resasc += r.wk[i] * std::abs(vals[i] - mean);
  resasc *= std::abs(half);
  k *= half;
  g *= half;
  double err = std::abs(k - g);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(k);
  const bool at_floor = err <= roundoff;
  err = std::max(err, roundoff);
  if (!std::isfinite(std::abs(k))) {
    throw NonConvergence("integrand is not finite on the contour");
  }
  return Panel1d{seg, a, b, k, err, at_floor};
}

// Adaptive refinement over a fixed set of segments to absolute tolerance tol.
QuadResult adapt_1d(const Integrand1d& f, const std::vector<Segment>& segs, double tol,
                    int& budget) {
  std::priority_queue<Panel1d> heap;
  cplx total{};
  double err = 0.0;
  int panels = 0;
  for (const auto& s : segs) {
    auto p = gk15(f, s, s.a, s.b);
    total += p.value;
    err += p.err;
    heap.push(p);
    ++panels;
  }
  while (err > tol) {
    if (budget-- <= 0) {
      throw NonConvergence("panel budget exhausted (error " + sci(err) +
                           ", tolerance " + sci(tol) + ")");
    }
    Panel1d worst = heap.top();
    // Nothing left to gain once the largest error is pure roundoff.
    if (worst.at_floor) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (std::abs(worst.b - worst.a) < 1e-12) {
      throw NonConvergence("panel width underflow");
    }
    auto left = gk15(f, worst.seg, worst.a, mid);
    auto right = gk15(f, worst.seg, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum in a fixed order so the result is independent of heap history.
  std::vector<Panel1d> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel1d& x, const Panel1d& y) {
    if (x.seg.arc != y.seg.arc) return x.seg.arc < y.seg.arc;
    if (x.seg.inverse != y.seg.inverse) return x.seg.inverse < y.seg.inverse;
    return std::min(x.a, x.b) < std::min(y.a, y.b);
  });
  total = {};
  err = 0.0;
  for (const auto& p : all) {
    total += p.value;
    err += p.err;
  }
  return QuadResult{total, err, panels};
}

// Product rule on a rectangle in the parameter planes of two segments.
struct Panel2d {
  Segment s1, s2;
  double a1, b1, a2, b2;
  cplx value;
  double err, err1, err2;
  bool at_floor;
  bool operator<(const Panel2d& o) const { return err < o.err; }
};

Panel2d gk15x15(const Integrand2d& f, const Segment& s1, double a1, double b1,
                const Segment& s2, double a2, double b2) {
  const auto& r = rule();
  const double h1 = 0.5 * (b1 - a1), m1 = 0.5 * (a1 + b1);
  const double h2 = 0.5 * (b2 - a2), m2 = 0.5 * (a2 + b2);
  std::array<cplx, 15> t1, j1, t2, j2;
  for (int i = 0; i < 15; ++i) {
    const double x = m1 + h1 * r.x[i];
    const double y = m2 + h2 * r.x[i];
    t1[i] = s1.point(x);
    j1[i] = s1.jacobian(x);
    t2[i] = s2.point(y);
    j2[i] = s2.jacobian(y);
  }
  cplx kk{}, gk{}, kg{};
  for (int i = 0; i < 15; ++i) {
    cplx rowk{}, rowg{};
    for (int j = 0; j < 15; ++j) {
      const cplx v = f(t1[i], t2[j]) * j2[j];
      rowk += r.wk[j] * v;
      rowg += r.wg[j] * v;
    }
    kk += r.wk[i] * j1[i] * rowk;
    gk += r.wg[i] * j1[i] * rowk;
    kg += r.wk[i] * j1[i] * rowg;
  }
  const double scale = h1 * h2;
  kk *= scale;
  gk *= scale;
  kg *= scale;
  if (!std::isfinite(std::abs(kk))) {
    throw NonConvergence("integrand is not finite on the contour");
  }
  const double e1 = std::abs(kk - gk);
  const double e2 = std::abs(kk - kg);
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kk);
  return Panel2d{s1, s2, a1, b1, a2, b2, kk, std::max(e1 + e2, roundoff), e1, e2,
                 e1 + e2 <= roundoff};
}

QuadResult adapt_2d(const Integrand2d& f, const std::vector<std::pair<Segment, Segment>>& rects,
                    double tol, int& budget) {
  std::priority_queue<Panel2d> heap;
  cplx total{};
  double err = 0.0;
  int panels = 0;
  for (const auto& [s1, s2] : rects) {
    auto p = gk15x15(f, s1, s1.a, s1.b, s2, s2.a, s2.b);
    total += p.value;
    err += p.err;
    heap.push(p);
    ++panels;
  }
  while (err > tol) {
    if (budget-- <= 0) throw NonConvergence("2d panel budget exhausted");
    Panel2d w = heap.top();
    if (w.at_floor) break;
    heap.pop();
    Panel2d p, q;
    if (w.err1 >= w.err2) {
      const double mid = 0.5 * (w.a1 + w.b1);
      p = gk15x15(f, w.s1, w.a1, mid, w.s2, w.a2, w.b2);
      q = gk15x15(f, w.s1, mid, w.b1, w.s2, w.a2, w.b2);
    } else {
      const double mid = 0.5 * (w.a2 + w.b2);
      p = gk15x15(f, w.s1, w.a1, w.b1, w.s2, w.a2, mid);
      q = gk15x15(f, w.s1, w.a1, w.b1, w.s2, mid, w.b2);
    }
    total += p.value + q.value - w.value;
    err += p.err + q.err - w.err;
    heap.push(p);
    heap.push(q);
    ++panels;
  }
  std::vector<Panel2d> all;
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel2d& x, const Panel2d& y) {
    const auto kx = std::make_tuple(x.s1.arc, std::min(x.a1, x.b1), x.s2.arc, std::min(x.a2, x.b2));
    const auto ky = std::make_tuple(y.s1.arc, std::min(y.a1, y.b1), y.s2.arc, std::min(y.a2, y.b2));
    return kx < ky;
  });
  total = {};
  err = 0.0;
  for (const auto& p : all) {
    total += p.value;
    err += p.err;
  }
  return QuadResult{total, err, panels};
}

}  // namespace

Contour Contour::real_line(double truncation) {
  return Contour{Kind::RealLine, 0.0, truncation};
}
Contour Contour::shifted_line(double delta, double truncation) {
  return Contour{Kind::ShiftedLine, delta, truncation};
}
Contour Contour::detour_above_origin(double radius, double truncation) {
  return Contour{Kind::DetourAboveOrigin, radius, truncation};
}

void Contour::validate(double pole_distance) const {
  if (!(truncation >= 1.0)) throw DomainError("contour truncation must be >= 1");
  switch (kind) {
    case Kind::RealLine:
      break;
    case Kind::ShiftedLine:
      if (offset == 0.0) throw DomainError("shifted line needs a nonzero offset");
      if (pole_distance > 0.0 && std::abs(offset) >= pole_distance) {
        throw DomainError("line offset reaches the nearest pole");
      }
      break;
    case Kind::DetourAboveOrigin:
      if (!(offset > 0.0)) throw DomainError("detour radius must be positive");
      if (offset >= truncation) throw DomainError("detour radius exceeds truncation");
      if (pole_distance > 0.0 && offset >= pole_distance) {
        throw DomainError("detour radius reaches the nearest pole");
      }
      break;
  }
}

QuadResult integrate_decaying(const Integrand1d& f, const Contour& c, double tol,
                              const QuadOptions& opt) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  c.validate(opt.pole_distance);
  int budget = opt.max_panels;
  double T = c.truncation;
  QuadResult res = adapt_1d(f, core_segments(c, T), 0.5 * tol, budget);
  for (int k = 0; k < opt.max_doublings; ++k) {
    QuadResult tail = adapt_1d(f, tail_segments(c, T), 0.05 * tol, budget);
    res.value += tail.value;
    res.err_estimate += tail.err_estimate;
    res.panels_used += tail.panels_used;
    T *= 2.0;
    if (std::abs(tail.value) + tail.err_estimate < 0.1 * tol) return res;
  }
  QuadResult rest;
  try {
    rest = adapt_1d(f, infinite_tails(c, T), 0.05 * tol, budget);
  } catch (const NonConvergence&) {
    throw NonConvergence("tail of the integrand does not decay below tolerance");
  }
  res.value += rest.value;
  res.err_estimate += rest.err_estimate;
  res.panels_used += rest.panels_used;
  return res;
}

QuadResult integrate_2d_decaying(const Integrand2d& f, const Contour& c1, const Contour& c2,
                                 double tol, const QuadOptions& opt) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  c1.validate(opt.pole_distance);
  c2.validate(opt.pole_distance);
  int budget = opt.max_panels;
  double T1 = c1.truncation, T2 = c2.truncation;
  auto product = [](const std::vector<Segment>& x, const std::vector<Segment>& y,
                    std::vector<std::pair<Segment, Segment>>& out) {
    for (const auto& a : x)
      for (const auto& b : y) out.emplace_back(a, b);
  };
  std::vector<std::pair<Segment, Segment>> rects;
  product(core_segments(c1, T1), core_segments(c2, T2), rects);
  QuadResult res = adapt_2d(f, rects, 0.5 * tol, budget);
  for (int k = 0; k < opt.max_doublings; ++k) {
    std::vector<std::pair<Segment, Segment>> ring;
    const auto core1 = core_segments(c1, T1), core2 = core_segments(c2, T2);
    const auto tail1 = tail_segments(c1, T1), tail2 = tail_segments(c2, T2);
    product(core1, tail2, ring);
    product(tail1, core2, ring);
    product(tail1, tail2, ring);
    QuadResult tail = adapt_2d(f, ring, 0.05 * tol, budget);
    res.value += tail.value;
    res.err_estimate += tail.err_estimate;
    res.panels_used += tail.panels_used;
    T1 *= 2.0;
    T2 *= 2.0;
    if (std::abs(tail.value) + tail.err_estimate < 0.1 * tol) return res;
  }
  throw NonConvergence("tail of the 2d integrand does not decay below tolerance");
}

}  // namespace hmd
