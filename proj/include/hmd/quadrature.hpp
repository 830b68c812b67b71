#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace hmd {

using cplx = std::complex<double>;

/// Integration path for integrands that decay exponentially along the
/// real direction. The path is the real line, the line Im t = offset, or
/// the real line with a half circle of radius `offset` passing above t = 0.
struct Contour {
  enum class Kind { RealLine, ShiftedLine, DetourAboveOrigin };

  Kind kind = Kind::RealLine;
  double offset = 0.0;      // imaginary shift, or detour radius
  double truncation = 4.0;  // initial half-width; doubled while the tail matters

  static Contour real_line(double truncation = 4.0);
  static Contour shifted_line(double delta, double truncation = 4.0);
  static Contour detour_above_origin(double radius, double truncation = 4.0);

  /// Throws DomainError when the parameters are inconsistent or closer than
  /// `pole_distance` to the nearest declared singularity.
  void validate(double pole_distance = 0.0) const;
};

struct QuadResult {
  cplx value{};
  double err_estimate = 0.0;
  int panels_used = 0;
};

struct QuadOptions {
  int max_panels = 40000;
  int max_doublings = 12;
  double pole_distance = 0.0;  // caller-declared clearance, 0 = unchecked
};

using Integrand1d = std::function<cplx(cplx)>;
using Integrand2d = std::function<cplx(cplx, cplx)>;

/// Adaptive Gauss-Kronrod (7/15) integration along `c`. `tol` is an absolute
/// tolerance on the returned value.
QuadResult integrate_decaying(const Integrand1d& f, const Contour& c, double tol,
                              const QuadOptions& opt = {});

/// Two dimensional version on the product of two contours, using product
/// Gauss-Kronrod panels refined adaptively over rectangles.
QuadResult integrate_2d_decaying(const Integrand2d& f, const Contour& c1, const Contour& c2,
                                 double tol, const QuadOptions& opt = {});

}  // namespace hmd
