#pragma once

// Reference computations that share no code with the library: brute-force
// quadrature, Fourier-domain closed forms and ODE integration.

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Fn = std::function<cplx(double)>;

/// Fixed 30-point Gauss rule on [a, b]; exact to rounding for the smooth
/// exponential-polynomial pieces used here once the breakpoints are split out.
inline cplx gauss30(const Fn& f, double a, double b) {
  using boost::math::quadrature::gauss;
  const double re = gauss<double, 30>::integrate([&](double t) { return f(t).real(); }, a, b);
  const double im = gauss<double, 30>::integrate([&](double t) { return f(t).imag(); }, a, b);
  return {re, im};
}

/// Integral of f over [a, b] split at every breakpoint inside.
inline cplx piecewise_integral(const Fn& f, double a, double b, std::vector<double> breaks) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  cplx acc = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(a, breaks[i]);
    const double hi = std::min(b, breaks[i + 1]);
    if (hi > lo) acc += gauss30(f, lo, hi);
  }
  return acc;
}

/// (f * g)(t) for f supported on [fa, fb] and g on [ga, gb], both smooth
/// between integer knots.
inline cplx convolve(const Fn& f, double fa, double fb, const Fn& g, double ga, double gb, double t) {
  const double lo = std::max(fa, t - gb);
  const double hi = std::min(fb, t - ga);
  if (hi <= lo) return 0.0;
  std::vector<double> breaks;
  for (double k = std::floor(lo); k <= std::ceil(hi); k += 1.0) breaks.push_back(k);
  for (double m = std::floor(ga); m <= std::ceil(gb); m += 1.0) breaks.push_back(t - m);  // knots of g(t - tau)
  return piecewise_integral([&](double tau) { return f(tau) * g(t - tau); }, lo, hi, breaks);
}

/// Fourier transform of an exponential B-spline with poles a and zeros c:
/// prod (j w - c) / prod (j w - a) * prod (1 - e^(a - j w)).
inline cplx bspline_fourier(const std::vector<cplx>& poles, const std::vector<cplx>& zeros, cplx gain, double w) {
  const cplx jw(0.0, w);
  cplx v = gain;
  for (const cplx& c : zeros) v *= (jw - c);
  for (const cplx& a : poles) {
    const cplx d = jw - a;
    // removable singularity at jw = a: (1 - e^(a - jw)) / (jw - a) -> 1
    v *= std::abs(d) < 1e-9 ? cplx(1.0) : (1.0 - std::exp(a - jw)) / d;
  }
  return v;
}

/// Green function of prod (D - a_n) with all Re(a_n) < 0 (no zeros, unit
/// gain), by RK4 integration of the companion ODE with y^(N-1)(0+) = 1.
class OdeGreen {
 public:
  OdeGreen(const std::vector<cplx>& poles, double t_max, double h = 1e-4) : h_(h) {
    // monic polynomial coefficients p[0] z^N + ... + p[N]
    std::vector<cplx> p{1.0};
    for (const cplx& a : poles) {
      std::vector<cplx> q(p.size() + 1);
      for (std::size_t i = 0; i < p.size(); ++i) {
        q[i] += p[i];
        q[i + 1] -= a * p[i];
      }
      p = q;
    }
    const std::size_t N = poles.size();
    std::vector<cplx> y(N);
    y[N - 1] = 1.0;
    auto deriv = [&](const std::vector<cplx>& s) {
      std::vector<cplx> d(N);
      for (std::size_t i = 0; i + 1 < N; ++i) d[i] = s[i + 1];
      cplx top = 0.0;
      for (std::size_t i = 0; i < N; ++i) top -= p[N - i] * s[i];
      d[N - 1] = top;
      return d;
    };
    const auto steps = static_cast<std::size_t>(std::ceil(t_max / h));
    values_.reserve(steps + 1);
    values_.push_back(y[0]);
    for (std::size_t s = 0; s < steps; ++s) {
      const auto k1 = deriv(y);
      std::vector<cplx> tmp(N);
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      const auto k2 = deriv(tmp);
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      const auto k3 = deriv(tmp);
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
      const auto k4 = deriv(tmp);
      for (std::size_t i = 0; i < N; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      values_.push_back(y[0]);
    }
  }

  /// Value at a grid point t = i h.
  cplx at_step(std::size_t i) const { return values_.at(i); }
  double h() const { return h_; }

 private:
  double h_;
  std::vector<cplx> values_;
};

/// Two-sided DTFT inversion (1/2pi) int_{-pi}^{pi} H(w) e^{j w k} dw by the
/// trapezoid rule on `grid` points (spectrally accurate for smooth periodic H).
inline cplx inverse_dtft(const std::function<cplx(double)>& H, long k, int grid = 4096) {
  cplx acc = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double w = -std::numbers::pi + 2.0 * std::numbers::pi * i / grid;
    acc += H(w) * std::polar(1.0, w * double(k));
  }
  return acc / double(grid);
}

/// Stationary autocorrelation (var0 / 2 pi) int |Q(jw)|^2 / |P(jw)|^2 e^{j w t} dw
/// by adaptive quadrature on (-inf, inf). Needs N - M >= 2 for fast decay.
inline double autocorr_fourier(const std::vector<cplx>& poles, const std::vector<cplx>& zeros, double var0,
                               double t) {
  auto spec = [&](double w) {
    const cplx jw(0.0, w);
    cplx num = 1.0, den = 1.0;
    for (const cplx& c : zeros) num *= jw - c;
    for (const cplx& a : poles) den *= jw - a;
    return std::norm(num) / std::norm(den);
  };
  using boost::math::quadrature::gauss_kronrod;
  double acc = 0.0;
  // Finite panels then a tail transformed to [0, 1].
  constexpr double W = 200.0;
  for (double lo = -W; lo < W; lo += 1.0) {
    acc += gauss_kronrod<double, 61>::integrate([&](double w) { return spec(w) * std::cos(w * t); }, lo, lo + 1.0, 12,
                                                1e-11);
  }
  // |w| > W: spec decays like w^-4 at least, cos bounded; integrate w = W / u.
  auto tail = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double w = W / u;
    return spec(w) * std::cos(w * t) * W / (u * u);
  };
  acc += 2.0 * gauss_kronrod<double, 61>::integrate(tail, 0.0, 1.0, 20, 1e-11);
  return var0 * acc / (2.0 * std::numbers::pi);
}

/// Draws `count` stable poles: real ones and conjugate pairs, Re in [-2, -0.05].
inline std::vector<cplx> random_stable_poles(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> re(-2.0, -0.05), im(0.2, 3.0), coin(0.0, 1.0);
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < count) {
    if (count - static_cast<int>(out.size()) >= 2 && coin(rng) < 0.5) {
      const cplx a(re(rng), im(rng));
      out.push_back(a);
      out.push_back(std::conj(a));
    } else {
      out.push_back(re(rng));
    }
  }
  return out;
}

}  // namespace oracle
