#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sparseproc {

using cplx = std::complex<double>;
using index_t = std::ptrdiff_t;

/// Finite discrete signal with an explicit index origin: values[i] is the
/// sample at index first + i. The origin matters because the shift-variant
/// inverses pin boundary conditions to index 0.
struct Sequence {
  index_t first = 0;
  std::vector<cplx> values;

  Sequence() = default;
  Sequence(index_t first_index, std::vector<cplx> v) : first(first_index), values(std::move(v)) {}
  Sequence(index_t first_index, std::size_t n) : first(first_index), values(n) {}

  static Sequence impulse(index_t first_index, std::size_t n, index_t at = 0) {
    Sequence s(first_index, n);
    if (s.contains(at)) s[at] = 1.0;
    return s;
  }

  std::size_t size() const noexcept { return values.size(); }
  bool empty() const noexcept { return values.empty(); }
  index_t last() const noexcept { return first + static_cast<index_t>(values.size()) - 1; }
  bool contains(index_t k) const noexcept { return k >= first && k <= last(); }

  cplx& operator[](index_t k) { return values[static_cast<std::size_t>(k - first)]; }
  const cplx& operator[](index_t k) const { return values[static_cast<std::size_t>(k - first)]; }

  /// Zero outside the stored range.
  cplx at_or_zero(index_t k) const { return contains(k) ? (*this)[k] : cplx{}; }

  /// Sub-range [lo, hi], clipped to the stored range.
  Sequence slice(index_t lo, index_t hi) const {
    lo = std::max(lo, first);
    hi = std::min(hi, last());
    if (hi < lo) return Sequence(lo, 0);
    return Sequence(lo, std::vector<cplx>(values.begin() + (lo - first), values.begin() + (hi - first) + 1));
  }

  std::vector<double> real_part() const {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].real();
    return out;
  }
};

}  // namespace sparseproc
