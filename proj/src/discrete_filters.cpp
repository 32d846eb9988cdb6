#include "sparseproc/discrete_filters.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sparseproc/errors.hpp"

namespace sparseproc {

namespace {

constexpr double kUnitCircleGuard = 1e-8;
constexpr double kFactorResidual = 1e-9;

// First-order inverse sections on a finite buffer with zero boundary state.
// inverse of (1 - c z^-1)
void invert_backward_factor(std::vector<cplx>& y, cplx c) {
  const std::size_t n = y.size();
  if (std::abs(c) < 1.0) {
    for (std::size_t k = 1; k < n; ++k) y[k] += c * y[k - 1];
  } else {
    // y[k-1] = (y[k] - x[k]) / c, anti-causal
    std::vector<cplx> x = y;
    y[n - 1] = 0.0;
    for (std::size_t k = n - 1; k > 0; --k) y[k - 1] = (y[k] - x[k]) / c;
  }
}

// inverse of (1 - c z)
void invert_forward_factor(std::vector<cplx>& y, cplx c) {
  const std::size_t n = y.size();
  if (std::abs(c) < 1.0) {
    for (std::size_t k = n - 1; k > 0; --k) y[k - 1] += c * y[k];
  } else {
    std::vector<cplx> x = y;
    y[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) y[k] = (y[k - 1] - x[k - 1]) / c;
  }
}

cplx poly_eval(const std::vector<cplx>& c, cplx z) {
  cplx v = 0.0;
  for (const cplx& a : c) v = v * z + a;
  return v;
}

cplx poly_deriv_eval(const std::vector<cplx>& c, cplx z) {
  cplx v = 0.0;
  const std::size_t deg = c.size() - 1;
  for (std::size_t i = 0; i < deg; ++i) v = v * z + c[i] * double(deg - i);
  return v;
}

}  // namespace

cplx FilterSpec::response(double omega) const {
  cplx v = 0.0;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    v += taps[i] * std::polar(1.0, -omega * double(offset + static_cast<index_t>(i)));
  }
  return v;
}

std::pair<double, double> response_bounds(const FilterSpec& h, int grid) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < grid; ++i) {
    const double w = 2.0 * std::numbers::pi * i / grid - std::numbers::pi;
    const double v = h.response(w).real();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

FilterSpec localization_coeffs(std::span<const cplx> poles) {
  std::vector<cplx> roots;
  roots.reserve(poles.size());
  for (const cplx& a : poles) roots.push_back(std::exp(a));
  return FilterSpec{poly_from_roots(roots), 0, FilterSpec::Kind::fir};
}

FilterSpec discrete_bspline_filter(const PoleZeroSystem& sys) {
  const PoleZeroSystem u = unit_step(sys);
  const PiecewiseExpPoly bll = bspline_autocorr(u);
  const int N = u.order();

  std::vector<cplx> raw(static_cast<std::size_t>(2 * N + 1));
  for (int k = -N; k <= N; ++k) raw[static_cast<std::size_t>(k + N)] = bll(double(k));
  // Enforce exact Hermitian symmetry; the two halves agree to rounding.
  for (int k = 0; k <= N; ++k) {
    const cplx avg = 0.5 * (raw[static_cast<std::size_t>(N + k)] + std::conj(raw[static_cast<std::size_t>(N - k)]));
    raw[static_cast<std::size_t>(N + k)] = avg;
    raw[static_cast<std::size_t>(N - k)] = std::conj(avg);
  }
  raw[static_cast<std::size_t>(N)] = raw[static_cast<std::size_t>(N)].real();

  const double scale = std::abs(raw[static_cast<std::size_t>(N)]);
  int L = N;
  while (L > 0 && std::abs(raw[static_cast<std::size_t>(N + L)]) <= 1e-13 * scale) --L;

  FilterSpec out;
  out.kind = FilterSpec::Kind::fir;
  out.offset = -L;
  out.taps.assign(raw.begin() + (N - L), raw.begin() + (N + L) + 1);

  const auto [lo, hi] = response_bounds(out);
  if (!(lo > 1e-12 * std::max(hi, 1e-300))) {
    std::ostringstream msg;
    msg << "B_L(e^jw) reaches " << lo << " on the frequency grid; the B-spline shifts are not a Riesz basis";
    throw RieszViolation(msg.str());
  }
  return out;
}

SpectralFactor spectral_factor(const FilterSpec& bl) {
  if (bl.taps.empty()) throw FactorizationFailure("empty tap sequence");
  const cplx r0 = bl.at(0);
  if (!(r0.real() > 0.0)) throw FactorizationFailure("lag-0 tap must be positive");
  index_t L = std::max(-bl.first(), bl.last());
  for (index_t k = 1; k <= L; ++k) {
    if (std::abs(bl.at(-k) - std::conj(bl.at(k))) > 1e-10 * r0.real())
      throw FactorizationFailure("tap sequence is not Hermitian symmetric");
  }
  while (L > 0 && std::abs(bl.at(L)) <= 1e-14 * r0.real()) --L;

  const auto [lo, hi] = response_bounds(bl);
  if (!(lo > 1e-12 * hi)) throw FactorizationFailure("B(e^jw) vanishes on the unit circle");

  SpectralFactor f;
  if (L == 0) {
    f.gain = std::sqrt(r0.real());
    f.taps = FilterSpec{{cplx(f.gain)}, 0, FilterSpec::Kind::fir};
    return f;
  }

  // z^L B(z) = sum_i c[i] z^(2L - i) with c[i] = r[i - L].
  const auto deg = static_cast<std::size_t>(2 * L);
  std::vector<cplx> c(deg + 1);
  for (std::size_t i = 0; i <= deg; ++i) c[i] = bl.at(static_cast<index_t>(i) - L);

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t j = 0; j < deg; ++j) companion(0, static_cast<Eigen::Index>(j)) = -c[j + 1] / c[0];
  for (std::size_t i = 1; i < deg; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw FactorizationFailure("companion eigenvalue solver did not converge");

  std::vector<cplx> inside;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    cplx z = solver.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {  // Newton polish on the full polynomial
      const cplx d = poly_deriv_eval(c, z);
      if (std::abs(d) == 0.0) break;
      const cplx step = poly_eval(c, z) / d;
      if (!std::isfinite(std::abs(step))) break;
      z -= step;
    }
    if (std::abs(std::abs(z) - 1.0) < kUnitCircleGuard) {
      std::ostringstream msg;
      msg << "root " << z << " lies on the unit circle";
      throw FactorizationFailure(msg.str());
    }
    if (std::abs(z) < 1.0) inside.push_back(z);
  }
  if (static_cast<index_t>(inside.size()) != L) {
    throw FactorizationFailure("roots do not split evenly across the unit circle");
  }

  std::vector<cplx> p = poly_from_roots(inside);
  double energy = 0.0;
  for (const cplx& v : p) energy += std::norm(v);
  f.gain = std::sqrt(r0.real() / energy);
  for (cplx& v : p) v *= f.gain;
  f.roots = std::move(inside);
  f.taps = FilterSpec{std::move(p), 0, FilterSpec::Kind::fir};

  // Residual check: b * conj(b[-k]) against the input taps.
  double worst = 0.0;
  for (index_t k = -L; k <= L; ++k) {
    cplx acc = 0.0;
    for (index_t m = 0; m <= L; ++m) acc += f.taps.at(m) * std::conj(f.taps.at(m - k));
    worst = std::max(worst, std::abs(acc - bl.at(k)));
  }
  if (worst > kFactorResidual * std::max(1.0, r0.real())) {
    std::ostringstream msg;
    msg << "factor reproduces the taps only to " << worst;
    throw FactorizationFailure(msg.str());
  }
  return f;
}

FilterSpec spectral_factorize(const FilterSpec& bl) { return spectral_factor(bl).taps; }

InterpolationFilter::InterpolationFilter(SpectralFactor factor) : factor_(std::move(factor)) {}

Sequence InterpolationFilter::apply(const Sequence& x) const {
  Sequence y = x;
  const double g2 = factor_.gain * factor_.gain;
  for (cplx& v : y.values) v /= g2;
  for (const cplx& z : factor_.roots) invert_backward_factor(y.values, z);
  for (const cplx& z : factor_.roots) invert_forward_factor(y.values, std::conj(z));
  return y;
}

FilterSpec InterpolationFilter::impulse_response(double tol) const {
  double rmax = 0.0;
  for (const cplx& z : factor_.roots) rmax = std::max(rmax, std::abs(z));
  index_t half = 1;
  if (rmax > 0.0) {
    half = static_cast<index_t>(std::ceil(std::log(tol) / std::log(rmax))) + 4 * static_cast<index_t>(factor_.roots.size()) + 4;
  }
  const Sequence h = apply(Sequence::impulse(-half, static_cast<std::size_t>(2 * half + 1)));
  index_t lo = h.first;
  index_t hi = h.last();
  while (lo < 0 && std::abs(h[lo]) < tol) ++lo;
  while (hi > 0 && std::abs(h[hi]) < tol) --hi;
  const Sequence kept = h.slice(lo, hi);
  return FilterSpec{kept.values, kept.first, FilterSpec::Kind::two_sided_truncated};
}

InterpolationFilter interpolation_filter(const PoleZeroSystem& sys) {
  return InterpolationFilter(spectral_factor(discrete_bspline_filter(sys)));
}

SplineInterpolant::SplineInterpolant(const PoleZeroSystem& sys, const Sequence& samples)
    : coeffs_(interpolation_filter(sys).apply(samples)), autocorr_(bspline_autocorr(unit_step(sys))) {}

cplx SplineInterpolant::operator()(double t) const {
  if (coeffs_.empty()) return 0.0;
  const auto lo = std::max<index_t>(coeffs_.first, static_cast<index_t>(std::floor(t)) - autocorr_.last_knot());
  const auto hi = std::min<index_t>(coeffs_.last(), static_cast<index_t>(std::ceil(t)) - autocorr_.first_knot());
  cplx acc = 0.0;
  for (index_t k = lo; k <= hi; ++k) acc += coeffs_[k] * autocorr_(t - double(k));
  return acc;
}

FilterSpec q_alpha(const PoleZeroSystem& sys, double tol) {
  const PoleZeroSystem u = unit_step(sys);
  if (!u.stationary()) throw Unsupported("q_alpha needs a stationary system (n0 = 0)");
  const double decay = u.min_decay();
  const int N = u.order();
  const auto half =
      static_cast<index_t>(std::ceil((-std::log(tol) + 5.0 * N) / decay)) + 10 * static_cast<index_t>(N);
  Sequence q = Sequence::impulse(-half, static_cast<std::size_t>(2 * half + 1));
  // 1/A(z) with A(z) = prod (1 - e^conj(a) z^-1)(1 - e^a z)
  for (const cplx& a : u.poles) {
    invert_backward_factor(q.values, std::exp(std::conj(a)));
    invert_forward_factor(q.values, std::exp(a));
  }
  index_t lo = q.first;
  index_t hi = q.last();
  while (lo < 0 && std::abs(q[lo]) < tol) ++lo;
  while (hi > 0 && std::abs(q[hi]) < tol) --hi;
  const Sequence kept = q.slice(lo, hi);
  return FilterSpec{kept.values, kept.first, FilterSpec::Kind::two_sided_truncated};
}

ContinuousAutocorrelation::ContinuousAutocorrelation(const PoleZeroSystem& sys, double var0, double tol)
    : var0_(var0 * sys.noise_scale),
      q_(q_alpha(sys, tol)),
      autocorr_(bspline_autocorr(sys)),
      order_(sys.order()) {}

cplx ContinuousAutocorrelation::operator()(double t) const {
  cplx acc = 0.0;
  const auto lo = std::max(q_.first(), static_cast<index_t>(std::floor(t)) - order_);
  const auto hi = std::min(q_.last(), static_cast<index_t>(std::ceil(t)) + order_);
  for (index_t k = lo; k <= hi; ++k) acc += q_.at(k) * autocorr_(t - double(k));
  return var0_ * acc;
}

cplx continuous_autocorr(const PoleZeroSystem& sys, double var0, double t) {
  return ContinuousAutocorrelation(sys, var0)(t);
}

double increment_spectrum(const PoleZeroSystem& sys, double var0, double omega) {
  return var0 * sys.noise_scale * discrete_bspline_filter(sys).response(omega).real();
}

SpectrumValue power_spectrum(const PoleZeroSystem& sys, double var0, double omega) {
  const PoleZeroSystem u = unit_step(sys);
  if (!u.stationary()) throw Unsupported("the process spectrum needs a stationary system (n0 = 0)");
  SpectrumValue out;
  out.increments = increment_spectrum(sys, var0, omega);
  const double d2 = std::norm(localization_coeffs(u.poles).response(-omega));
  out.process = out.increments / d2;
  return out;
}

Sequence fir_filter_valid(const FilterSpec& h, const Sequence& x) {
  const index_t lo = x.first + h.last();
  const index_t hi = x.last() + h.first();
  if (hi < lo) return Sequence(lo, 0);
  Sequence y(lo, static_cast<std::size_t>(hi - lo + 1));
  for (index_t k = lo; k <= hi; ++k) {
    std::complex<long double> acc = 0.0L;
    for (index_t i = h.first(); i <= h.last(); ++i) {
      acc += std::complex<long double>(h.at(i)) * std::complex<long double>(x[k - i]);
    }
    y[k] = cplx(acc);
  }
  return y;
}

Sequence fir_inverse_causal(const FilterSpec& h, const Sequence& x) {
  if (h.first() != 0 || h.taps.empty()) throw std::invalid_argument("fir_inverse_causal expects taps starting at index 0");
  Sequence y(x.first, x.size());
  const cplx h0 = h.taps[0];
  for (std::size_t k = 0; k < x.size(); ++k) {
    cplx acc = x.values[k];
    for (std::size_t i = 1; i < h.taps.size() && i <= k; ++i) acc -= h.taps[i] * y.values[k - i];
    y.values[k] = acc / h0;
  }
  return y;
}

}  // namespace sparseproc
