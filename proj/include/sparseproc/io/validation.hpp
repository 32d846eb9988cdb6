#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sparseproc/io/config.hpp"

namespace sparseproc::io {

struct CheckResult {
  std::string name;
  bool passed = true;
  bool skipped = false;
  double value = 0.0;      ///< observed statistic
  double threshold = 0.0;  ///< pass iff value <= threshold
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  nlohmann::json to_json() const;
};

/// Config-driven checks on the primary system and a realization of the
/// configured process: factorization residuals, Green function / B-spline
/// identity, inverse algebra, boundary conditions, increment recovery,
/// increment autocorrelation, K = 1 and K = 2 characteristic functions,
/// whiteness of the recovered innovation and determinism. Checks that do not
/// apply to the configuration are reported as skipped.
ValidationReport run_validation(const RunConfig& cfg, std::uint64_t seed);

/// Frequencies for characteristic-function checks, scaled to the spread of u:
/// w_i = 0.15 i / s for i = 1 .. count, s being the median of the nonzero |u|.
std::vector<double> charfn_frequencies(const Sequence& u, int count = 10);

}  // namespace sparseproc::io
