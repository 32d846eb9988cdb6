#pragma once

#include <span>
#include <vector>

#include "sparseproc/expspline.hpp"
#include "sparseproc/sequence.hpp"
#include "sparseproc/system_model.hpp"

namespace sparseproc {

inline constexpr int kRieszGrid = 4096;
inline constexpr double kDefaultQTolerance = 1e-12;

/// Finite tap sequence; taps[i] sits at index offset + i.
struct FilterSpec {
  enum class Kind { fir, two_sided_truncated };

  std::vector<cplx> taps;
  index_t offset = 0;
  Kind kind = Kind::fir;

  index_t first() const noexcept { return offset; }
  index_t last() const noexcept { return offset + static_cast<index_t>(taps.size()) - 1; }
  cplx at(index_t k) const {
    return (k < first() || k > last()) ? cplx{} : taps[static_cast<std::size_t>(k - offset)];
  }
  /// sum_k h[k] exp(-j omega k)
  cplx response(double omega) const;
};

/// d_alpha: taps of prod_n (1 - exp(alpha_n) z^-1), N+1 taps from index 0.
FilterSpec localization_coeffs(std::span<const cplx> poles);

/// B_L(z): integer samples of the autocorrelation B-spline. Lags +-N are
/// dropped when they vanish. Throws RieszViolation when B_L(e^jw) is not
/// positive on the 4096-point frequency grid.
FilterSpec discrete_bspline_filter(const PoleZeroSystem& sys);

/// Minimum-phase factor of a Hermitian tap sequence: taps of
/// c * prod_i (1 - z_i z^-1) with |z_i| < 1 and c > 0.
struct SpectralFactor {
  FilterSpec taps;
  std::vector<cplx> roots;
  double gain = 1.0;
};

/// Roots of z^L B(z) via the companion-matrix eigenvalues; throws
/// FactorizationFailure when a root sits within 1e-8 of the unit circle or the
/// factor does not reproduce the input to 1e-9.
SpectralFactor spectral_factor(const FilterSpec& bl);

/// b_L^+ such that b_L^+ convolved with conj(b_L^+[-k]) reproduces `bl`.
FilterSpec spectral_factorize(const FilterSpec& bl);

/// Exact inverse of B_L(z) as c^-2 prod 1/(1 - z_i z^-1) prod 1/(1 - conj(z_i) z):
/// causal passes followed by anti-causal passes, zero boundary state.
class InterpolationFilter {
 public:
  explicit InterpolationFilter(SpectralFactor factor);

  const std::vector<cplx>& roots() const noexcept { return factor_.roots; }
  double gain() const noexcept { return factor_.gain; }

  Sequence apply(const Sequence& x) const;
  /// h_int truncated where |h| < tol.
  FilterSpec impulse_response(double tol = 1e-14) const;

 private:
  SpectralFactor factor_;
};

InterpolationFilter interpolation_filter(const PoleZeroSystem& sys);

/// Cardinal reconstruction from integer samples: c = h_int * f and
/// f(t) = sum_k c[k] beta_LL*(t - k). The recursive prefilter starts from a
/// zero state at both ends, so samples should extend well past the points of
/// interest (or decay to zero there).
class SplineInterpolant {
 public:
  SplineInterpolant(const PoleZeroSystem& sys, const Sequence& samples);

  cplx operator()(double t) const;
  const Sequence& coefficients() const noexcept { return coeffs_; }

 private:
  Sequence coeffs_;
  PiecewiseExpPoly autocorr_;
};

/// Two-sided sequence with DTFT 1/|D_alpha(e^-jw)|^2, truncated where |q| < tol.
/// Throws Unsupported for n0 > 0.
FilterSpec q_alpha(const PoleZeroSystem& sys, double tol = kDefaultQTolerance);

/// r_s(t) = sigma0^2 sum_k q_alpha[k] beta_LL*(t - k) for a stationary system.
class ContinuousAutocorrelation {
 public:
  ContinuousAutocorrelation(const PoleZeroSystem& sys, double var0, double tol = kDefaultQTolerance);
  cplx operator()(double t) const;
  /// Number of q_alpha taps kept, so accuracy claims can be audited.
  std::size_t truncation_length() const noexcept { return q_.taps.size(); }

 private:
  double var0_;
  FilterSpec q_;
  PiecewiseExpPoly autocorr_;
  int order_;
};

cplx continuous_autocorr(const PoleZeroSystem& sys, double var0, double t);

struct SpectrumValue {
  double increments = 0.0;  ///< Phi_u(e^jw) = sigma0^2 B_L(e^jw)
  double process = 0.0;     ///< Phi_s(e^jw) = Phi_u / |D_alpha(e^-jw)|^2
};

/// Both spectra; throws Unsupported when n0 > 0.
SpectrumValue power_spectrum(const PoleZeroSystem& sys, double var0, double omega);
/// Phi_u only; defined for every admissible system.
double increment_spectrum(const PoleZeroSystem& sys, double var0, double omega);

/// y[k] = sum_i h[i] x[k - i] on the range where every input sample exists.
Sequence fir_filter_valid(const FilterSpec& h, const Sequence& x);

/// Causal inverse of a minimum-phase FIR with taps starting at index 0,
/// zero initial state.
Sequence fir_inverse_causal(const FilterSpec& h, const Sequence& x);

/// Min and max of Re H(e^jw) on a uniform grid of `grid` frequencies.
std::pair<double, double> response_bounds(const FilterSpec& h, int grid = kRieszGrid);

}  // namespace sparseproc
