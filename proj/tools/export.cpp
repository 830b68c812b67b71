#include "export.hpp"

#include "hmd/errors.hpp"
#include "hmd/rmatrix.hpp"
#include "json.hpp"

namespace hmd::cli {

namespace {

using json = nlohmann::ordered_json;

json pair(cplx z) { return json::array({z.real(), z.imag()}); }

cplx unpair(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw DomainError("expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string to_json(const ExportedMatrix& m) {
  json j;
  j["rows"] = m.entries.rows();
  j["cols"] = m.entries.cols();
  j["b"] = pair(m.b);
  j["u"] = pair(m.u);
  j["g"] = pair(m.g);
  json e = json::array();
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i)
    for (Eigen::Index k = 0; k < m.entries.cols(); ++k) e.push_back(pair(m.entries(i, k)));
  j["entries"] = std::move(e);
  j["normalization"] = m.projective ? "projective" : "raw";
  return j.dump() + "\n";
}

ExportedMatrix from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("not JSON: ") + e.what());
  }
  for (const char* key : {"rows", "cols", "b", "u", "g", "entries", "normalization"})
    if (!j.contains(key)) throw DomainError(std::string("missing field ") + key);
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw DomainError("rows and cols must be integers");
  const auto rows = j["rows"].get<Eigen::Index>(), cols = j["cols"].get<Eigen::Index>();
  if (rows < 0 || cols < 0) throw DomainError("negative dimension");
  const json& e = j["entries"];
  if (!e.is_array() || Eigen::Index(e.size()) != rows * cols) throw DomainError("entry count mismatch");
  if (!j["normalization"].is_string()) throw DomainError("normalization must be a string");
  const std::string norm = j["normalization"].get<std::string>();
  if (norm != "raw" && norm != "projective") throw DomainError("unknown normalization " + norm);

  ExportedMatrix m{DenseCMatrix(rows, cols), unpair(j["b"]), unpair(j["u"]), unpair(j["g"]),
                   norm == "projective"};
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) m.entries(i, k) = unpair(e[std::size_t(i * cols + k)]);
  return m;
}

ExportedMatrix export_seven_vertex(cplx u, const ModularParam& p) {
  return {seven_vertex(u, p), p.b(), u, RepLabel::lattice_value(1, 0, p), false};
}

ExportedMatrix export_r_dense(cplx u, int n, int n2, int m2, bool projective, const ModularParam& p) {
  const RDense r = r_dense(u, n, n2, m2, p);
  return {projective ? r.normalized : r.raw, p.b(), u, RepLabel::lattice_value(n2, m2, p), projective};
}

ExportedMatrix export_l_sampled(cplx u, cplx g, cplx z, const ModularParam& p) {
  const OperatorMatrix l = l_fundamental(u, g, p);
  const ZFunc f = [](cplx x) { return std::exp(-x * x); };
  DenseCMatrix m(l.rows(), l.cols());
  for (int i = 0; i < l.rows(); ++i)
    for (int k = 0; k < l.cols(); ++k) m(i, k) = apply_sampled(l.at(i, k), f)(z);
  return {m, p.b(), u, g, false};
}

}  // namespace hmd::cli
