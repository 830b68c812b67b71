#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace hmd {

/// Compact %.3g rendering for error messages.
inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class StripError : public Error { using Error::Error; };
class RegimeError : public Error { using Error::Error; };
class InvariantError : public Error { using Error::Error; };
class NotDivisible : public Error { using Error::Error; };
class NotInvariant : public Error { using Error::Error; };
class SingularBasis : public Error { using Error::Error; };
class SpanFailure : public Error { using Error::Error; };
class DegenerateParam : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class ScalarMismatch : public Error { using Error::Error; };
/// Raised where an identity is known to fail, e.g. inverting M(g) on its
/// degeneration lattice.
class ExpectedViolation : public Error { using Error::Error; };

/// Raised when an argument sits on the pole lattice -b n - m/b of the
/// hyperbolic gamma function.
class PoleError : public Error {
 public:
  PoleError(int n, int m)
      : Error("pole(" + std::to_string(n) + "," + std::to_string(m) + ")"),
        n_(n),
        m_(m) {}
  int n() const { return n_; }
  int m() const { return m_; }

 private:
  int n_;
  int m_;
};

}  // namespace hmd
