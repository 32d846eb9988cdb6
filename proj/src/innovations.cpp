#include "sparseproc/innovations.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sparseproc/errors.hpp"
#include "sparseproc/expspline.hpp"

namespace sparseproc {

namespace {

constexpr double kQuadTolerance = 1e-10;
constexpr unsigned kQuadDepth = 40;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// One 15-point Gauss-Kronrod panel, bisected until its error estimate fits an
// absolute budget proportional to its width. Panels whose error is at the
// rounding level of their L1 norm are accepted as they are.
template <class F>
double bisect_gk(F& f, double a, double b, double tol, unsigned depth, double& err) {
  using boost::math::quadrature::gauss_kronrod;
  double e = 0.0, l1 = 0.0;
  const double v = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &e, &l1);
  if (e <= tol || e <= 64.0 * std::numeric_limits<double>::epsilon() * l1 || depth == 0) {
    err += e;
    return v;
  }
  const double m = 0.5 * (a + b);
  return bisect_gk(f, a, m, 0.5 * tol, depth - 1, err) + bisect_gk(f, m, b, 0.5 * tol, depth - 1, err);
}

// Adaptive quadrature of a complex integrand on a finite [a, b], real and
// imaginary parts separately, each to an absolute error of `tol`.
template <class F>
cplx integrate_complex(F&& f, double a, double b, double tol = kQuadTolerance) {
  double err_re = 0.0, err_im = 0.0;
  auto fr = [&](double t) { return f(t).real(); };
  auto fi = [&](double t) { return f(t).imag(); };
  const double re = bisect_gk(fr, a, b, tol, kQuadDepth, err_re);
  const double im = bisect_gk(fi, a, b, tol, kQuadDepth, err_im);
  if (!std::isfinite(re) || !std::isfinite(im) || err_re > tol || err_im > tol) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b << "] stopped at error " << std::max(err_re, err_im)
        << " (target " << tol << ")";
    throw QuadratureFailure(msg.str());
  }
  return {re, im};
}

// Same on the whole real line, through boost's mapping of infinite ranges.
template <class F>
cplx integrate_complex_line(F&& f, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  constexpr double inf = std::numeric_limits<double>::infinity();
  double err_re = 0.0, err_im = 0.0;
  const double re = gauss_kronrod<double, 15>::integrate([&](double t) { return f(t).real(); }, -inf, inf, 15,
                                                         1e-13, &err_re);
  const double im = gauss_kronrod<double, 15>::integrate([&](double t) { return f(t).imag(); }, -inf, inf, 15,
                                                         1e-13, &err_im);
  if (!std::isfinite(re) || !std::isfinite(im) || err_re > tol || err_im > tol) {
    std::ostringstream msg;
    msg << "adaptive quadrature on the real line stopped at error " << std::max(err_re, err_im) << " (target "
        << tol << ")";
    throw QuadratureFailure(msg.str());
  }
  return {re, im};
}

cplx amplitude_charfn(const AmplitudeLaw& law, double omega) {
  if (law.charfn) return law.charfn(omega);
  const auto& p = law.density;
  return integrate_complex_line([&](double a) { return p(a) * std::polar(1.0, omega * a); }, 1e-12);
}

double amplitude_second_moment(const AmplitudeLaw& law) {
  if (law.second_moment) return *law.second_moment;
  const auto& p = law.density;
  return integrate_complex_line([&](double a) { return cplx(a * a * p(a)); }, 1e-12).real();
}

// Real-valued innovations can only drive a system whose kernels are real.
void require_real(const PoleZeroSystem& sys, const char* what) {
  if (!sys.real) {
    throw Unsupported(std::string(what) + " needs a real system (conjugate-closed poles and zeros, real gain)");
  }
}

// Sign changes of x on (a, b), located on a 64-point scan and refined by
// bracketing. Tangential zeros are not reported.
template <class X>
std::vector<double> sign_changes(X& x, double a, double b) {
  constexpr int kScan = 64;
  std::vector<double> roots;
  double ta = a, xa = x(a);
  for (int i = 1; i <= kScan; ++i) {
    const double tb = a + (b - a) * i / kScan;
    const double xb = x(tb);
    if ((xa < 0.0 && xb > 0.0) || (xa > 0.0 && xb < 0.0)) {
      std::uintmax_t iters = 100;
      const auto [lo, hi] = boost::math::tools::toms748_solve([&](double t) { return x(t); }, ta, tb, xa, xb,
                                                              boost::math::tools::eps_tolerance<double>(52), iters);
      roots.push_back(0.5 * (lo + hi));
    }
    ta = tb;
    xa = xb;
  }
  return roots;
}

// int f(x(t)) dt over [a, b] for a stable exponent, which has a |x|^alpha
// kink wherever x changes sign: split there and use tanh-sinh, which copes
// with the resulting endpoint behaviour.
template <class X>
cplx integrate_stable_panel(const InnovationSpec& spec, X& x, double a, double b) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  std::vector<double> cuts{a};
  for (double r : sign_changes(x, a, b)) cuts.push_back(r);
  cuts.push_back(b);
  double acc = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    double e = 0.0;
    acc += ts.integrate([&](double t) { return levy_exponent(spec, x(t)).real(); }, cuts[i], cuts[i + 1], 1e-13, &e);
    err += e;
  }
  if (!std::isfinite(acc) || err > kQuadTolerance) {
    std::ostringstream msg;
    msg << "tanh-sinh quadrature on [" << a << ", " << b << "] stopped at error " << err << " (target "
        << kQuadTolerance << ")";
    throw QuadratureFailure(msg.str());
  }
  return acc;
}

// exp( sum over unit panels of int f(x(t)) dt ) on [lo, hi].
template <class X>
cplx exp_of_panel_integral(const InnovationSpec& spec, X&& x, int lo, int hi) {
  const auto* stable = std::get_if<StableInnovation>(&spec);
  const bool kinked = stable && stable->alpha < 2.0;
  cplx acc = 0.0;
  for (int p = lo; p < hi; ++p) {
    if (kinked) {
      acc += integrate_stable_panel(spec, x, double(p), double(p + 1));
    } else {
      acc += integrate_complex([&](double t) { return levy_exponent(spec, x(t)); }, double(p), double(p + 1));
    }
  }
  return std::exp(acc);
}

}  // namespace

Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

AmplitudeLaw AmplitudeLaw::standard_normal() {
  AmplitudeLaw law;
  law.name = "normal";
  law.sample = [](Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); };
  law.density = [](double a) { return std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi); };
  law.charfn = [](double w) { return cplx(std::exp(-0.5 * w * w)); };
  law.second_moment = 1.0;
  return law;
}

AmplitudeLaw AmplitudeLaw::without_closed_forms() const {
  AmplitudeLaw law = *this;
  law.charfn = nullptr;
  law.second_moment.reset();
  return law;
}

std::string innovation_name(const InnovationSpec& spec) {
  return std::visit(overloaded{[](const GaussianInnovation&) { return std::string("gaussian"); },
                               [](const PoissonInnovation&) { return std::string("poisson"); },
                               [](const StableInnovation&) { return std::string("sas"); }},
                    spec);
}

cplx levy_exponent(const InnovationSpec& spec, double omega) {
  return std::visit(overloaded{[&](const GaussianInnovation& g) { return cplx(-g.b2 * omega * omega); },
                               [&](const PoissonInnovation& p) {
                                 if (p.lambda == 0.0 || omega == 0.0) return cplx(0.0);
                                 return p.lambda * (amplitude_charfn(p.amplitude, omega) - 1.0);
                               },
                               [&](const StableInnovation& s) {
                                 return cplx(-s.b_alpha * std::pow(std::abs(omega), s.alpha));
                               }},
                    spec);
}

double innovation_variance(const InnovationSpec& spec) {
  return std::visit(overloaded{[](const GaussianInnovation& g) { return 2.0 * g.b2; },
                               [](const PoissonInnovation& p) {
                                 return p.lambda == 0.0 ? 0.0 : p.lambda * amplitude_second_moment(p.amplitude);
                               },
                               [](const StableInnovation& s) -> double {
                                 if (s.alpha == 2.0) return 2.0 * s.b_alpha;
                                 throw UndefinedMoment("alpha-stable innovation with alpha < 2 has infinite variance");
                               }},
                    spec);
}

InnovationSpec scale_innovation(const InnovationSpec& spec, double factor) {
  return std::visit(overloaded{[&](GaussianInnovation g) -> InnovationSpec {
                                 g.b2 *= factor;
                                 return g;
                               },
                               [&](PoissonInnovation p) -> InnovationSpec {
                                 p.lambda *= factor;
                                 return p;
                               },
                               [&](StableInnovation s) -> InnovationSpec {
                                 s.b_alpha *= factor;
                                 return s;
                               }},
                    spec);
}

double sample_symmetric_stable(double alpha, double scale, Rng& rng) {
  std::uniform_real_distribution<double> uni(-std::numbers::pi / 2, std::numbers::pi / 2);
  std::exponential_distribution<double> expo(1.0);
  double v = uni(rng);
  while (v == -std::numbers::pi / 2) v = uni(rng);
  const double w = expo(rng);
  if (alpha == 1.0) return scale * std::tan(v);
  const double x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
  return scale * x;
}

double draw_pixel(const InnovationSpec& spec, double h, Rng& rng) {
  return std::visit(overloaded{[&](const GaussianInnovation& g) {
                                 return std::normal_distribution<double>(0.0, std::sqrt(2.0 * g.b2 * h))(rng);
                               },
                               [&](const PoissonInnovation& p) {
                                 if (p.lambda == 0.0) return 0.0;
                                 const long count = std::poisson_distribution<long>(p.lambda * h)(rng);
                                 double sum = 0.0;
                                 for (long i = 0; i < count; ++i) sum += p.amplitude.sample(rng);
                                 return sum;
                               },
                               [&](const StableInnovation& s) {
                                 return sample_symmetric_stable(s.alpha, std::pow(s.b_alpha * h, 1.0 / s.alpha), rng);
                               }},
                    spec);
}

InnovationDraw draw_innovations(const InnovationSpec& spec, double a, double b, double grid_step, Rng& rng) {
  InnovationDraw out;
  out.lo = a;
  out.grid_step = grid_step;
  if (const auto* p = std::get_if<PoissonInnovation>(&spec)) {
    if (p->lambda == 0.0 || b <= a) return out;
    const long count = std::poisson_distribution<long>(p->lambda * (b - a))(rng);
    std::uniform_real_distribution<double> where(a, b);
    out.knots.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      const double t = where(rng);
      out.knots.push_back({t, p->amplitude.sample(rng)});
    }
    std::sort(out.knots.begin(), out.knots.end(), [](const Knot& x, const Knot& y) { return x.t < y.t; });
    return out;
  }
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / grid_step - 1e-9));
  out.pixels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.pixels.push_back(draw_pixel(spec, grid_step, rng));
  return out;
}

cplx charfn_increment(const InnovationSpec& spec, const PoleZeroSystem& sys, const std::vector<double>& omegas) {
  require_real(sys, "charfn_increment");
  const PoleZeroSystem u = unit_step(sys);
  const InnovationSpec f = scale_innovation(spec, u.noise_scale);
  if (std::all_of(omegas.begin(), omegas.end(), [](double w) { return w == 0.0; })) return 1.0;
  const PiecewiseExpPoly beta = bspline_L(u);
  const int N = u.order();
  const int K = static_cast<int>(omegas.size());
  auto x = [&](double t) {
    double sum = 0.0;
    for (int k = 1; k <= K; ++k) {
      if (omegas[k - 1] != 0.0) sum += omegas[k - 1] * beta(double(k - 1) - t).real();
    }
    return sum;
  };
  // beta_L(k - 1 - t) lives on t in [k - 1 - N, k - 1].
  return exp_of_panel_integral(f, x, -N, K - 1);
}

cplx charfn_sampled_process(const InnovationSpec& spec, const PoleZeroSystem& sys,
                            const std::vector<double>& omegas) {
  const PoleZeroSystem u = unit_step(sys);
  if (!u.stationary()) throw Unsupported("charfn_sampled_process needs n0 = 0 (decaying Green function)");
  require_real(u, "charfn_sampled_process");
  if (std::all_of(omegas.begin(), omegas.end(), [](double w) { return w == 0.0; })) return 1.0;
  const InnovationSpec f = scale_innovation(spec, u.noise_scale);
  const GreenFunction rho(u);

  std::size_t mult = 1;
  for (const auto& m : rho.modes()) mult = std::max(mult, m.coeffs.size());
  // Envelope t^(k-1) e^(-d t) below 1e-12; the polynomial factor of confluent
  // modes is covered by stretching the cut-off by the multiplicity.
  const int tail = static_cast<int>(std::ceil(-std::log(1e-12) * double(mult) / u.min_decay()));

  const int K = static_cast<int>(omegas.size());
  auto x = [&](double t) {
    double sum = 0.0;
    for (int k = 1; k <= K; ++k) {
      if (omegas[k - 1] != 0.0) sum += omegas[k - 1] * rho(double(k - 1) - t).real();
    }
    return sum;
  };
  return exp_of_panel_integral(f, x, -tail, K - 1 + tail);
}

}  // namespace sparseproc
