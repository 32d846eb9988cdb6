#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "sparseproc/sequence.hpp"
#include "sparseproc/system_model.hpp"

namespace sparseproc {

using Rng = std::mt19937_64;

/// Seeds an engine from a 64-bit seed through seed_seq so nearby seeds give
/// unrelated streams.
Rng make_rng(std::uint64_t seed);

/// Amplitude law p_A of the compound-Poisson innovation: a sampler plus the
/// density. `charfn` and `second_moment` are optional closed forms; without
/// them the library integrates the density numerically.
struct AmplitudeLaw {
  std::string name;
  std::function<double(Rng&)> sample;
  std::function<double(double)> density;
  std::function<cplx(double)> charfn;
  std::optional<double> second_moment;

  static AmplitudeLaw standard_normal();
  /// Same law without the closed forms, so everything goes through quadrature.
  AmplitudeLaw without_closed_forms() const;
};

struct GaussianInnovation {
  double b2 = 0.5;  ///< f(w) = -b2 w^2
};

struct PoissonInnovation {
  double lambda = 1.0 / 32.0;
  AmplitudeLaw amplitude = AmplitudeLaw::standard_normal();
};

struct StableInnovation {
  double alpha = 1.2;    ///< stability index in (0, 2]
  double b_alpha = 1.0;  ///< f(w) = -b_alpha |w|^alpha
};

using InnovationSpec = std::variant<GaussianInnovation, PoissonInnovation, StableInnovation>;

std::string innovation_name(const InnovationSpec& spec);

/// f(omega), with f(0) = 0.
cplx levy_exponent(const InnovationSpec& spec, double omega);

/// sigma0^2 = -f''(0): 2 b2, lambda E[a^2], or 2 b_alpha when alpha = 2.
/// Throws UndefinedMoment for alpha-stable laws with alpha < 2.
double innovation_variance(const InnovationSpec& spec);

/// The innovation with its Levy exponent multiplied by `factor`
/// (b2, lambda or b_alpha scaled). Used for grid-step and noise_scale changes.
InnovationSpec scale_innovation(const InnovationSpec& spec, double factor);

struct Knot {
  double t = 0.0;
  double a = 0.0;
};

/// Output of draw_innovations. Grid kinds fill `pixels`, where pixels[i] is
/// the innovation integrated over (lo + i h, lo + (i + 1) h]; the Poisson
/// kind fills `knots` sorted by time.
struct InnovationDraw {
  double lo = 0.0;
  double grid_step = 1.0;
  std::vector<double> pixels;
  std::vector<Knot> knots;
};

/// Gaussian: i.i.d. N(0, sigma0^2 h) pixels. Poisson: Poisson(lambda (b - a))
/// knots, uniform times, i.i.d. amplitudes. SaS: i.i.d. Chambers-Mallows-Stuck
/// pixels with scale (b_alpha h)^(1/alpha).
InnovationDraw draw_innovations(const InnovationSpec& spec, double a, double b, double grid_step, Rng& rng);

/// One pixel of width h for grid-based kinds; Poisson pixels are drawn as
/// compound sums. Used by the streaming oversampled generator.
double draw_pixel(const InnovationSpec& spec, double h, Rng& rng);

/// Symmetric alpha-stable variate with characteristic function exp(-|scale w|^alpha).
double sample_symmetric_stable(double alpha, double scale, Rng& rng);

/// Characteristic function of (u[k], u[k+1], ..., u[k+K-1]):
/// exp( int f( sum_k w_k beta_L(k - 1 - t) ) dt ), integrated panel by panel
/// over the integer knots with adaptive Gauss-Kronrod to 1e-10. Throws
/// QuadratureFailure when the tolerance is not reached and Unsupported for
/// systems whose B-spline is not real-valued.
cplx charfn_increment(const InnovationSpec& spec, const PoleZeroSystem& sys, const std::vector<double>& omegas);

/// Characteristic function of (s[k], s[k+1], ..., s[k+K-1]) for a stationary
/// system, using the decaying Green function truncated at a 1e-12 envelope.
cplx charfn_sampled_process(const InnovationSpec& spec, const PoleZeroSystem& sys,
                            const std::vector<double>& omegas);

}  // namespace sparseproc
