#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sparseproc/generators.hpp"
#include "sparseproc/sequence.hpp"

namespace sparseproc::io {

/// Shortest round-trip text for a double ("%.17g").
std::string format_double(double v);

/// "# config_hash=<hex> seed=<seed|none>"
void write_provenance(std::ostream& os, const std::string& hash, std::optional<std::uint64_t> seed);

/// Columns k, re, im; k is the sample index, time is k * step.
void write_signal_csv(std::ostream& os, const Sequence& s);

/// Columns t, a with t in physical time (knot position times the step).
void write_knots_csv(std::ostream& os, const std::vector<Knot>& knots, double step);

/// One row per point: series, x, re, im.
struct LongRow {
  std::string series;
  double x = 0.0;
  cplx value;
};
void write_long_csv(std::ostream& os, const std::vector<LongRow>& rows);

/// Reads a k, re, im CSV (comment lines starting with '#' and the header are
/// skipped). A missing im column reads as zero. Throws std::runtime_error on
/// malformed rows or non-consecutive indices.
Sequence read_signal_csv(const std::string& path);

}  // namespace sparseproc::io
