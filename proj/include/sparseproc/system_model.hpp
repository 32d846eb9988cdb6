#pragma once

#include <span>
#include <vector>

#include "sparseproc/sequence.hpp"

namespace sparseproc {

inline constexpr double kImaginaryTolerance = 1e-12;

/// Rational differential system L with poles alpha (roots of P_N), zeros gamma
/// (roots of Q_M) and leading gain b_M. Poles are ordered with the n0 purely
/// imaginary ones last; their real part is snapped to exactly zero.
///
/// `step` is the sampling step the poles are expressed against and
/// `noise_scale` multiplies the Levy exponent of the driving innovation. Both
/// are 1 for a unit-step system; rescale_system() is the only place they change.
struct PoleZeroSystem {
  std::vector<cplx> poles;
  std::vector<cplx> zeros;
  cplx gain{1.0, 0.0};
  int n0 = 0;
  double step = 1.0;
  double noise_scale = 1.0;
  bool real = false;  ///< pole/zero multisets closed under conjugation and real gain

  int order() const noexcept { return static_cast<int>(poles.size()); }
  int num_zeros() const noexcept { return static_cast<int>(zeros.size()); }
  bool stationary() const noexcept { return n0 == 0; }

  /// Poles with a stable LSI inverse (Re != 0), in system order.
  std::span<const cplx> lsi_poles() const { return {poles.data(), poles.size() - static_cast<std::size_t>(n0)}; }
  /// The purely imaginary poles j*omega_1 .. j*omega_n0, in system order.
  std::span<const cplx> imaginary_poles() const {
    return {poles.data() + (poles.size() - static_cast<std::size_t>(n0)), static_cast<std::size_t>(n0)};
  }

  /// Smallest |Re(alpha)| over the LSI poles (infinity when there are none).
  double min_decay() const;

  bool operator==(const PoleZeroSystem&) const = default;
};

/// Validates and orders a system. Throws OrderViolation when the zero count is
/// not below the pole count and RieszViolation when two imaginary poles differ
/// by a nonzero multiple of 2*pi*j.
PoleZeroSystem build_system(std::vector<cplx> poles, std::vector<cplx> zeros = {}, cplx gain = 1.0,
                            double imaginary_tolerance = kImaginaryTolerance, double step = 1.0);

/// Unit-step equivalent of sampling `sys` every T: poles and zeros scale by T,
/// gain by T^(N-M-1), the innovation's Levy exponent by T, and step by 1/T.
PoleZeroSystem rescale_system(const PoleZeroSystem& sys, double T);

/// rescale_system(sys, sys.step); identity for a unit-step system.
PoleZeroSystem unit_step(const PoleZeroSystem& sys);

/// Coefficients of prod (zeta - r_i), highest degree first.
std::vector<cplx> poly_from_roots(std::span<const cplx> roots);

}  // namespace sparseproc
