#pragma once

#include <string>

#include "hmd/funspace.hpp"

namespace hmd::cli {

struct ExportedMatrix {
  DenseCMatrix entries;
  cplx b, u, g;
  bool projective = false;  // divided by the (0, 0) entry
};

/// Fixed schema: rows, cols, b, u, g, entries (row-major [re, im] pairs),
/// normalization ("raw" or "projective").
std::string to_json(const ExportedMatrix& m);
/// Inverse of to_json; DomainError on a malformed document.
ExportedMatrix from_json(const std::string& text);

/// seven_vertex(u) with g = g_{1,0}.
ExportedMatrix export_seven_vertex(cplx u, const ModularParam& p);
/// r_dense(u, n, n2, m2); g is the label of the quantum space.
ExportedMatrix export_r_dense(cplx u, int n, int n2, int m2, bool projective, const ModularParam& p);
/// Entries [L_ik f](z) of the fundamental L-operator on f(x) = exp(-x^2).
ExportedMatrix export_l_sampled(cplx u, cplx g, cplx z, const ModularParam& p);

}  // namespace hmd::cli
