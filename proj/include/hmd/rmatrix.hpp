#pragma once

#include <vector>

#include "hmd/intertwiner.hpp"

namespace hmd {

/// Matrix whose entries are difference operators in one variable. Entry
/// (i, k) acts on the quantum space and is the coefficient of e_i in L e_k.
class OperatorMatrix {
 public:
  OperatorMatrix(int rows, int cols, const ModularParam& p);
  /// Entries multiply by the given polynomials.
  static OperatorMatrix multiplication(const std::vector<std::vector<TrigPoly>>& entries,
                                       const ModularParam& p);
  /// Constant matrix.
  static OperatorMatrix constant(const DenseCMatrix& m, const ModularParam& p);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const ModularParam& param() const { return p_; }
  DiffOp& at(int i, int k) { return e_[std::size_t(i * cols_ + k)]; }
  const DiffOp& at(int i, int k) const { return e_[std::size_t(i * cols_ + k)]; }

  OperatorMatrix transposed() const;
  /// Throws DimensionMismatch.
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

 private:
  int rows_, cols_;
  ModularParam p_;
  std::vector<DiffOp> e_;
};

/// Block matrix of the entries restricted to span(basis): row (i, a) and
/// column (k, c) sit at i * d + a and k * d + c, d = basis size.
DenseCMatrix restrict_operator_matrix(const OperatorMatrix& m, const std::vector<TrigPoly>& basis,
                                      double tol = 1e-9);

/// Rapidities u1 = (u + g) / 2, u2 = (u - g) / 2.
struct RapidityPair {
  cplx u1, u2;
  static RapidityPair from(cplx u, cplx g) { return {0.5 * (u + g), 0.5 * (u - g)}; }
  cplx u() const { return u1 + u2; }
  cplx g() const { return u1 - u2; }
};

/// gamma(g_{n,m} +- i x +- i z) through its finite product form.
cplx gen_function(int n, int m, cplx x, cplx z, const ModularParam& p);

struct DualBases {
  std::vector<TrigPoly> phi;  // (t + 1/t)^(j-1)
  std::vector<TrigPoly> psi;
  /// psi_j = sum_l phi_l G(l, j).
  DenseCMatrix gram;
};

/// Both bases of the (n+1)-dimensional plain representation read off the
/// generating function; SpanFailure when the expansion does not reproduce it.
DualBases bases_phi_psi(int n, const ModularParam& p, double tol = 1e-9);

/// Lateral matrix V^{(n)}(u, z), entries as polynomials in z.
std::vector<std::vector<TrigPoly>> v_matrix(cplx u, int n, const ModularParam& p);

/// Fundamental L-operator as the triple product of a left matrix, diag(T+, -T-)
/// and a right matrix.
OperatorMatrix l_fundamental(cplx u, cplx g, const ModularParam& p);

/// The L-operator written with the plain generators at label g, as printed
/// next to the triple product. The two forms agree only after a shift:
/// l_fundamental(u, g) = l_from_generators(u - eta, g).
OperatorMatrix l_from_generators(cplx u, cplx g, const ModularParam& p);

/// Five-factor product V(u + g) D C V^T(u - g) C for the first-space label
/// g_{n,0}; maps psi_j to sum_l phi_l R_lj.
OperatorMatrix r_finite(cplx u, int n, cplx g, const ModularParam& p);

/// X_t^j X_s^l, j <= n, l <= m, with X_t = t + 1/t and X_s = s + 1/s.
std::vector<TrigPoly> quantum_basis(int n, int m);

struct RDense {
  DenseCMatrix raw;
  DenseCMatrix normalized;  // raw / raw(0, 0)
};

/// r_finite with second label g_{n2,m2}, restricted to quantum_basis(n2, m2),
/// first space rewritten in the phi basis on both sides.
RDense r_dense(cplx u, int n, int n2, int m2, const ModularParam& p);

/// 4x4 matrix of l_fundamental(u - 1/(2b), g_{1,0}) on {1, t + 1/t}. In
/// this convention it equals -2 r_dense(u, 1, 1, 0).raw and solves the YBE in
/// difference form.
DenseCMatrix seven_vertex(cplx u, const ModularParam& p);

/// max |R12 R13 R23 - R23 R13 R12| on C^d1 x C^d2 x C^d3.
double check_ybe(const DenseCMatrix& r12, const DenseCMatrix& r13, const DenseCMatrix& r23, int d1,
                 int d2, int d3);

struct UnitarityFit {
  cplx lambda;
  double residual;
};

/// Least-squares lambda in rp rm = lambda Id, residual relative to |lambda|.
UnitarityFit check_unitarity(const DenseCMatrix& rp, const DenseCMatrix& rm);

/// R (T(u) x 1)(1 x T(v)) = (1 x T(v))(T(u) x 1) R with monodromies
/// T = L_0 L_1 ..., site k acting on variable z_k. R acts on C^d x C^d where d
/// is the size of the L's. Sampled on Gaussian times polynomial functions;
/// the result is relative to the size of the two sides.
double check_rll(const DenseCMatrix& r, const std::vector<OperatorMatrix>& lu,
                 const std::vector<OperatorMatrix>& lv, const SampleBox& box = {});

/// Residual of S(u2 - v1) L_1(u1, u2) L_2(v1, v2) = L_1(u1, v1) L_2(u2, v2) S(u2 - v1),
/// with S the multiplication by gamma(+-i z1 +- i z2 + u - eta).
double check_s_permutation(RapidityPair u, RapidityPair v, const ModularParam& p,
                           const SampleBox& box = {});

}  // namespace hmd
