#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hmd/funspace.hpp"

namespace hmd {

enum class Half { Plain, Tilde };

/// Representation label g, optionally pinned to the lattice point
/// g_{n,m} = b (n + 1) / 2 + (m + 1) / (2 b).
struct RepLabel {
  cplx g{};
  std::optional<std::pair<int, int>> lattice;

  RepLabel() = default;
  RepLabel(cplx value) : g(value) {}
  static RepLabel at_lattice(int n, int m, const ModularParam& p);
  static cplx lattice_value(int n, int m, const ModularParam& p);
  /// (n + 1)(m + 1) on the lattice; throws DomainError otherwise.
  int dimension() const;
  /// Throws DomainError if the stored lattice point does not match g.
  void validate(const ModularParam& p, double clearance = 1e-9) const;
};

struct GeneratorSet {
  DiffOp A, B, C, D;
  Half half;
  RepLabel g;
  ModularParam p;

  /// b for the plain half, 1/b for the tilde half.
  cplx beta() const { return half == Half::Plain ? p.b() : p.binv(); }
  /// Unit shift of the half: (1, 0) or (0, 1).
  Shift unit() const { return half == Half::Plain ? Shift{1, 0} : Shift{0, 1}; }
};

GeneratorSet generators(const RepLabel& g, const ModularParam& p, Half half = Half::Plain);

/// Degree-j spanning element of the half: t^j + t^-j or s^j + s^-j.
TrigPoly half_cos(Half half, int j);

/// Max sampled residual over the six defining relations applied to
/// half_cos(0..6).
double check_algebra(const GeneratorSet& gs, const SampleBox& box = {});

/// Max sampled residual of the (anti)commutation pattern between the halves,
/// applied to products t_cos(j) s_cos(l), j, l = 0..3.
double check_cross_relations(const GeneratorSet& plain, const GeneratorSet& tilde,
                             const SampleBox& box = {});

struct Casimirs {
  DiffOp K0, K1;
  cplx k0_value, k1_value;
  double residual;
};

/// Builds both Casimirs and checks on samples that they act as the expected
/// scalars; ScalarMismatch when the residual reaches tol.
Casimirs casimirs(const GeneratorSet& gs, double tol = 1e-9, const SampleBox& box = {});

/// |0> = 1, |k> = B^k |0> for k = 0..k_max (k_max <= 12), plain half.
std::vector<TrigPoly> verma_vectors(const RepLabel& g, const ModularParam& p, int k_max);

struct VermaCoeffs {
  std::vector<cplx> a, d, c;
  /// Largest coefficient found outside the descending-weight pattern.
  double off_pattern = 0.0;
};

VermaCoeffs verma_coeffs(const RepLabel& g, const ModularParam& p, int k);

struct FiniteDimResult {
  bool is_invariant = false;
  Eigen::VectorXcd expansion;
  double residual = 0.0;
  bool c_nonzero = false;
};

/// Tests whether |n+1> lies in span{|0>..|n>} at an arbitrary label.
FiniteDimResult verma_span_test(const RepLabel& g, const ModularParam& p, int n, double tol = 1e-9);

/// Same test at g = (n+1) b / 2; SpanFailure when the residual reaches tol.
FiniteDimResult finite_dim_detect(int n, const ModularParam& p, double tol = 1e-9);

}  // namespace hmd
