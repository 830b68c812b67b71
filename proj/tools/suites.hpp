#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hmd/hypgamma.hpp"

namespace hmd::cli {

inline constexpr const char* kSuiteVersion = "1";

struct SessionConfig {
  cplx b{0.8, 0.0};
  /// Replaces the per-row limits of numeric checks when set.
  std::optional<double> tol;
  std::uint64_t seed = 1;
  bool json = false;

  /// Re b > 0 and tol in (1e-14, 1e-2); throws DomainError.
  void validate() const;
};

/// Uniform draws that do not depend on the standard library's distributions,
/// so a seed reproduces the same numbers everywhere.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi);
  cplx box(double re_lo, double re_hi, double im_lo, double im_hi);

 private:
  std::mt19937_64 rng_;
};

struct Row {
  std::string label;
  double residual = 0.0;
  double limit = 0.0;
  bool counted = false;  // exact count or yes/no check, not a tolerance
  bool pass() const { return residual <= limit; }
};

struct SuiteReport {
  std::string suite;
  std::vector<Row> rows;
  double seconds = 0.0;

  bool pass() const;
  /// Row with the largest residual / limit ratio, failing rows first.
  const Row* worst() const;
};

const std::vector<std::string>& suite_names();

/// Runs one named suite. Library errors raised while building the objects
/// under test (DegenerateParam, PoleError, ...) propagate; failures of the
/// identities themselves become failing rows.
SuiteReport run_suite(const std::string& name, const SessionConfig& cfg);

std::string report_human(const SuiteReport& r, const SessionConfig& cfg);
std::string report_json(const SuiteReport& r, const SessionConfig& cfg);

}  // namespace hmd::cli
