#include "sparseproc/inverse_operators.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "sparseproc/discrete_filters.hpp"
#include "sparseproc/errors.hpp"

namespace sparseproc {

namespace {

// Recursions run in extended precision: the right-inverse identity is checked
// after re-applying the localization filter, which amplifies rounding in s by
// up to prod(1 + |e^alpha|).
using wide = std::complex<long double>;

std::vector<wide> widen(const Sequence& x) { return {x.values.begin(), x.values.end()}; }

Sequence narrow(index_t first, const std::vector<wide>& v) {
  Sequence out(first, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.values[i] = cplx(v[i]);
  return out;
}

void first_order_in_place(cplx alpha, std::vector<wide>& v) {
  const std::size_t n = v.size();
  if (n == 0) return;
  if (alpha.real() <= 0.0) {
    const wide z = std::exp(wide(alpha));
    wide prev = 0.0L;
    for (std::size_t k = 0; k < n; ++k) {
      prev = z * prev + v[k];
      v[k] = prev;
    }
  } else {
    const wide zinv = std::exp(-wide(alpha));
    wide next = 0.0L;  // y[k], with y[n - 1] = 0
    wide xk = v[n - 1];
    v[n - 1] = 0.0L;
    for (std::size_t k = n - 1; k > 0; --k) {
      next = zinv * (next - xk);
      xk = v[k - 1];
      v[k - 1] = next;
    }
  }
}

void regularized_in_place(double omega0, index_t first, std::vector<wide>& v) {
  first_order_in_place(cplx(0.0, omega0), v);  // causal (h * x)[k]
  if (v.empty()) return;
  // (h * x)[0]: zero before the signal starts, carried forward past its end.
  const index_t last = first + static_cast<index_t>(v.size()) - 1;
  wide at_origin = 0.0L;
  if (first <= 0 && last >= 0) {
    at_origin = v[static_cast<std::size_t>(-first)];
  } else if (last < 0) {
    at_origin = v.back() * std::polar(1.0L, static_cast<long double>(omega0) * static_cast<long double>(-last));
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto k = static_cast<long double>(first + static_cast<index_t>(i));
    v[i] -= std::polar(1.0L, static_cast<long double>(omega0) * k) * at_origin;
  }
}

}  // namespace

Sequence first_order_inverse(cplx alpha, const Sequence& x) {
  std::vector<wide> v = widen(x);
  first_order_in_place(alpha, v);
  return narrow(x.first, v);
}

Sequence regularized_inverse(double omega0, const Sequence& x) {
  std::vector<wide> v = widen(x);
  regularized_in_place(omega0, x.first, v);
  return narrow(x.first, v);
}

CompositeInverse apply_inverse_composite(const PoleZeroSystem& sys, const Sequence& x) {
  const PoleZeroSystem u = unit_step(sys);
  index_t first = x.first;
  std::vector<wide> v = widen(x);
  if (u.n0 > 0 && !x.empty()) {
    const index_t lo = std::min<index_t>(x.first, -u.n0);
    const index_t hi = std::max<index_t>(x.last(), 0);
    v.insert(v.begin(), static_cast<std::size_t>(x.first - lo), wide{});
    v.resize(static_cast<std::size_t>(hi - lo + 1));
    first = lo;
  }
  for (const cplx& a : u.lsi_poles()) first_order_in_place(a, v);
  for (const cplx& a : u.imaginary_poles()) regularized_in_place(a.imag(), first, v);
  Sequence s = narrow(first, v);

  CompositeInverse out;
  if (u.n0 > 0 && !s.empty()) out.boundary = boundary_residuals(u, s);
  out.signal = std::move(s);
  return out;
}

Sequence apply_localization(const PoleZeroSystem& sys, const Sequence& s) {
  const PoleZeroSystem u = unit_step(sys);
  const auto N = static_cast<std::size_t>(u.order());
  if (s.size() <= N) {
    std::ostringstream msg;
    msg << "localization of order " << N << " needs more than " << N << " samples, got " << s.size();
    throw SignalTooShort(msg.str());
  }
  return fir_filter_valid(localization_coeffs(u.poles), s);
}

BoundaryReport boundary_residuals(const PoleZeroSystem& sys, const Sequence& s) {
  const PoleZeroSystem u = unit_step(sys);
  BoundaryReport report;
  if (u.n0 == 0) return report;
  if (!s.contains(0) || !s.contains(-(u.n0 - 1))) {
    throw SignalTooShort("boundary conditions need samples on [-(n0 - 1), 0]");
  }
  const auto imag = u.imaginary_poles();
  // Apply Delta_{j w_n0}, Delta_{j w_(n0-1)}, ... one at a time and read index 0.
  Sequence v = s.slice(-(u.n0 - 1), 0);
  report.residuals.push_back(v[0]);
  for (int m = u.n0 - 1; m >= 1; --m) {
    const cplx z = std::exp(imag[static_cast<std::size_t>(m)]);
    Sequence w(v.first + 1, v.size() - 1);
    for (index_t k = w.first; k <= w.last(); ++k) w[k] = v[k] - z * v[k - 1];
    v = std::move(w);
    report.residuals.push_back(v[0]);
  }
  return report;
}

}  // namespace sparseproc
