#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sparseproc/discrete_filters.hpp"
#include "sparseproc/innovations.hpp"
#include "sparseproc/inverse_operators.hpp"
#include "sparseproc/sequence.hpp"
#include "sparseproc/system_model.hpp"

namespace sparseproc {

inline constexpr int kDefaultOversampling = 64;
inline constexpr double kBurnInEnvelope = 1e-10;

/// A generated path on k = 0 .. n-1; sample k sits at time k * step.
///
/// `increments` holds u on the same index range. Knot times are in sample
/// units (multiply by step for physical time). `kernel_error` is the L-infinity
/// distance between beta_L and its piecewise-constant version for oversampled
/// runs, zero for the exact generators.
struct Realization {
  Sequence samples;
  Sequence increments;
  double step = 1.0;
  std::uint64_t seed = 0;
  BoundaryReport boundary;
  std::optional<std::vector<Knot>> knots;
  int oversampling = 0;
  double kernel_error = 0.0;
};

/// Number of discarded leading samples for a stationary system:
/// ceil(-log(1e-10) / min |Re alpha|). Zero when n0 > 0.
index_t burn_in_length(const PoleZeroSystem& sys);

/// Gaussian path: e[k] ~ N(0, var0) i.i.d., u = conj(b_L^+) * e, s = composite inverse of u.
Realization generate_gaussian(const PoleZeroSystem& sys, double var0, index_t n, std::uint64_t seed);

/// Exact compound-Poisson path from knots drawn on [-N - burn-in, n + N].
Realization generate_poisson(const PoleZeroSystem& sys, double lambda, const AmplitudeLaw& amplitude, index_t n,
                             std::uint64_t seed);

/// u[k] = sum_i beta_L(k - t_i) a_i for every index of `range`, knots in sample units.
Sequence poisson_increments(const PoleZeroSystem& sys, const std::vector<Knot>& knots, index_t first, index_t last);

/// Path driven by i.i.d. fine-grid innovations of width 1/m, filtered with the
/// piecewise-constant kernel beta_L(i/m), i = 0 .. mN. Fine pixels are streamed
/// through a ring buffer, so memory does not grow with m.
Realization generate_levy_oversampled(const PoleZeroSystem& sys, const InnovationSpec& spec, int m, index_t n,
                                      std::uint64_t seed);

/// beta_L(i / m) for i = 0 .. mN.
std::vector<cplx> oversampled_kernel(const PoleZeroSystem& sys, int m);

/// sup_t |beta_L(t) - beta_L(floor(m t) / m)|, sampled densely inside every cell
/// including the left limit at its right end.
double oversampled_kernel_error(const PoleZeroSystem& sys, int m);

struct MixedComponent {
  PoleZeroSystem sys;
  InnovationSpec innovation;
  int oversampling = kDefaultOversampling;
};

/// Gaussian components use generate_gaussian with var0 = 2 b2, Poisson ones the
/// exact generator, SaS ones the oversampled generator. Component i runs on a
/// seed derived from (seed, i). Increments are summed only when every component
/// shares the same pole set; boundary residuals are concatenated.
Realization generate_mixed(const std::vector<MixedComponent>& components, index_t n, std::uint64_t seed);

/// Any of the generators above, picked from the innovation type.
Realization generate(const PoleZeroSystem& sys, const InnovationSpec& spec, index_t n, std::uint64_t seed,
                     int oversampling = kDefaultOversampling);

/// Seed of mixture component `index`.
std::uint64_t component_seed(std::uint64_t seed, std::size_t index);

/// e estimated from u by the causal inverse of conj(b_L^+); the first samples
/// carry the zero-state transient.
Sequence recover_innovation(const PoleZeroSystem& sys, const Sequence& u);

}  // namespace sparseproc
