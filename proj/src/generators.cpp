#include "sparseproc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sparseproc/expspline.hpp"

namespace sparseproc {

namespace {

// Shared tail of every generator: invert u, keep [0, n - 1].
Realization finish(const PoleZeroSystem& sys, const Sequence& u, index_t n, std::uint64_t seed) {
  CompositeInverse inv = apply_inverse_composite(unit_step(sys), u);
  Realization r;
  r.samples = inv.signal.slice(0, n - 1);
  r.increments = u.slice(0, n - 1);
  r.boundary = std::move(inv.boundary);
  r.step = sys.step;
  r.seed = seed;
  return r;
}

// First increment index computed internally: N samples of slack plus the burn-in.
index_t internal_start(const PoleZeroSystem& u) { return -static_cast<index_t>(u.order()) - burn_in_length(u); }

void require_length(index_t n) {
  if (n <= 0) throw std::invalid_argument("realization length must be positive");
}

}  // namespace

index_t burn_in_length(const PoleZeroSystem& sys) {
  const PoleZeroSystem u = unit_step(sys);
  if (u.lsi_poles().empty()) return 0;
  return static_cast<index_t>(std::ceil(-std::log(kBurnInEnvelope) / u.min_decay()));
}

std::uint64_t component_seed(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Realization generate_gaussian(const PoleZeroSystem& sys, double var0, index_t n, std::uint64_t seed) {
  require_length(n);
  const PoleZeroSystem u = unit_step(sys);
  const SpectralFactor factor = spectral_factor(discrete_bspline_filter(u));
  FilterSpec ma = factor.taps;
  for (cplx& v : ma.taps) v = std::conj(v);

  const index_t lo = internal_start(u);
  const index_t e_first = lo - ma.last();
  Sequence e(e_first, static_cast<std::size_t>(n - e_first));
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(var0 * u.noise_scale));
  for (cplx& v : e.values) v = normal(rng);

  return finish(sys, fir_filter_valid(ma, e), n, seed);
}

Sequence poisson_increments(const PoleZeroSystem& sys, const std::vector<Knot>& knots, index_t first, index_t last) {
  const PoleZeroSystem u = unit_step(sys);
  const PiecewiseExpPoly beta = bspline_L(u);
  const double N = u.order();
  Sequence out(first, static_cast<std::size_t>(std::max<index_t>(last - first + 1, 0)));
  for (const Knot& kn : knots) {
    const auto k_lo = std::max<index_t>(first, static_cast<index_t>(std::ceil(kn.t)));
    const auto k_hi = std::min<index_t>(last, static_cast<index_t>(std::floor(kn.t + N)));
    for (index_t k = k_lo; k <= k_hi; ++k) out[k] += kn.a * beta(double(k) - kn.t);
  }
  return out;
}

Realization generate_poisson(const PoleZeroSystem& sys, double lambda, const AmplitudeLaw& amplitude, index_t n,
                             std::uint64_t seed) {
  require_length(n);
  const PoleZeroSystem u = unit_step(sys);
  const index_t lo = internal_start(u);
  const double N = u.order();

  PoissonInnovation spec{lambda * u.noise_scale, amplitude};
  Rng rng = make_rng(seed);
  InnovationDraw draw = draw_innovations(spec, double(lo) - N, double(n) + N, 1.0, rng);

  Realization r = finish(sys, poisson_increments(u, draw.knots, lo, n - 1), n, seed);
  std::vector<Knot> kept;
  for (const Knot& k : draw.knots) {
    if (k.t >= -N) kept.push_back(k);
  }
  r.knots = std::move(kept);
  return r;
}

std::vector<cplx> oversampled_kernel(const PoleZeroSystem& sys, int m) {
  if (m < 1) throw std::invalid_argument("oversampling factor must be at least 1");
  const PoleZeroSystem u = unit_step(sys);
  const PiecewiseExpPoly beta = bspline_L(u);
  const int taps = m * u.order() + 1;
  std::vector<cplx> out(static_cast<std::size_t>(taps));
  for (int i = 0; i < taps; ++i) out[static_cast<std::size_t>(i)] = beta(double(i) / m);
  return out;
}

double oversampled_kernel_error(const PoleZeroSystem& sys, int m) {
  if (m < 1) throw std::invalid_argument("oversampling factor must be at least 1");
  const PoleZeroSystem u = unit_step(sys);
  const PiecewiseExpPoly beta = bspline_L(u);
  constexpr int kProbe = 64;
  double worst = 0.0;
  for (int i = 0; i < m * u.order(); ++i) {
    const int p = i / m;
    const auto piece = static_cast<std::size_t>(p - beta.first_knot());
    const cplx ref = beta.piece_value(piece, double(i) / m - p);
    for (int q = 1; q <= kProbe; ++q) {
      const double tau = (double(i) + double(q) / kProbe) / m - p;
      worst = std::max(worst, std::abs(beta.piece_value(piece, tau) - ref));
    }
  }
  return worst;
}

Realization generate_levy_oversampled(const PoleZeroSystem& sys, const InnovationSpec& spec, int m, index_t n,
                                      std::uint64_t seed) {
  require_length(n);
  const PoleZeroSystem u = unit_step(sys);
  const std::vector<cplx> kernel = oversampled_kernel(u, m);
  const InnovationSpec fine = scale_innovation(spec, u.noise_scale);
  const double h = 1.0 / m;
  const index_t lo = internal_start(u);
  const auto R = static_cast<index_t>(kernel.size());

  // Pixel j integrates the innovation over ((j - 1) / m, j / m];
  // u[k] = sum_i kernel[i] pixel[m k - i].
  Rng rng = make_rng(seed);
  std::vector<double> ring(static_cast<std::size_t>(R));
  const index_t j0 = m * lo - (R - 1);
  index_t next = j0;
  auto slot = [&](index_t j) { return static_cast<std::size_t>((j - j0) % R); };

  Sequence inc(lo, static_cast<std::size_t>(n - lo));
  for (index_t k = lo; k < n; ++k) {
    const index_t top = m * k;
    for (; next <= top; ++next) ring[slot(next)] = draw_pixel(fine, h, rng);
    cplx acc = 0.0;
    for (index_t i = 0; i < R; ++i) acc += kernel[static_cast<std::size_t>(i)] * ring[slot(top - i)];
    inc[k] = acc;
  }

  Realization r = finish(sys, inc, n, seed);
  r.oversampling = m;
  r.kernel_error = oversampled_kernel_error(u, m);
  return r;
}

Realization generate(const PoleZeroSystem& sys, const InnovationSpec& spec, index_t n, std::uint64_t seed,
                     int oversampling) {
  if (const auto* g = std::get_if<GaussianInnovation>(&spec)) return generate_gaussian(sys, 2.0 * g->b2, n, seed);
  if (const auto* p = std::get_if<PoissonInnovation>(&spec)) {
    return generate_poisson(sys, p->lambda, p->amplitude, n, seed);
  }
  return generate_levy_oversampled(sys, spec, oversampling, n, seed);
}

Realization generate_mixed(const std::vector<MixedComponent>& components, index_t n, std::uint64_t seed) {
  require_length(n);
  if (components.empty()) throw std::invalid_argument("mixture needs at least one component");
  const double step = components.front().sys.step;
  const std::vector<cplx> poles = unit_step(components.front().sys).poles;
  bool same_poles = true;

  Realization mix;
  mix.seed = seed;
  mix.step = step;
  mix.samples = Sequence(0, static_cast<std::size_t>(n));
  mix.increments = Sequence(0, static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < components.size(); ++c) {
    const MixedComponent& comp = components[c];
    if (comp.sys.step != step) throw std::invalid_argument("mixture components must share the sampling step");
    same_poles = same_poles && unit_step(comp.sys).poles == poles;
    const Realization r = generate(comp.sys, comp.innovation, n, component_seed(seed, c), comp.oversampling);
    for (index_t k = 0; k < n; ++k) {
      mix.samples[k] += r.samples[k];
      mix.increments[k] += r.increments[k];
    }
    mix.boundary.residuals.insert(mix.boundary.residuals.end(), r.boundary.residuals.begin(),
                                  r.boundary.residuals.end());
    mix.kernel_error = std::max(mix.kernel_error, r.kernel_error);
    mix.oversampling = std::max(mix.oversampling, r.oversampling);
  }
  if (!same_poles) mix.increments = Sequence();
  return mix;
}

Sequence recover_innovation(const PoleZeroSystem& sys, const Sequence& u) {
  FilterSpec ma = spectral_factor(discrete_bspline_filter(unit_step(sys))).taps;
  for (cplx& v : ma.taps) v = std::conj(v);
  return fir_inverse_causal(ma, u);
}

}  // namespace sparseproc
