#pragma once

#include <vector>

#include "sparseproc/sequence.hpp"
#include "sparseproc/system_model.hpp"

namespace sparseproc {

/// Residuals of the n0 boundary conditions at index 0:
/// s[0], Delta_{j w_n0} s[0], Delta_{j w_(n0-1)} Delta_{j w_n0} s[0], ...
struct BoundaryReport {
  std::vector<cplx> residuals;

  double max_abs() const {
    double m = 0.0;
    for (const cplx& r : residuals) m = std::max(m, std::abs(r));
    return m;
  }
};

/// Inverse of Delta_alpha (taps [1, -e^alpha]). Causal recursion
/// y[k] = e^alpha y[k-1] + x[k] when Re(alpha) <= 0, anti-causal recursion
/// y[k] = e^-alpha (y[k+1] - x[k+1]) otherwise. Both start from a zero state
/// just outside the signal.
Sequence first_order_inverse(cplx alpha, const Sequence& x);

/// Right inverse of Delta_{j omega0} pinned to y[0] = 0:
/// y[k] = (h * x)[k] - e^{j omega0 k} (h * x)[0], with h the causal
/// impulse response 1_+[k] e^{j omega0 k}. Index 0 need not lie inside x.
Sequence regularized_inverse(double omega0, const Sequence& x);

struct CompositeInverse {
  Sequence signal;
  BoundaryReport boundary;
};

/// Global right inverse of Delta_alpha: the LSI first-order inverses in pole
/// order, then the regularized inverses for j w_1 .. j w_n0. When n0 > 0 the
/// input is zero-extended so the output covers [-n0, 0], where the boundary
/// conditions live.
CompositeInverse apply_inverse_composite(const PoleZeroSystem& sys, const Sequence& x);

/// u[n] = sum_{m=0}^{N} d_alpha[m] s[n - m] on the valid range
/// [s.first + N, s.last]. Throws SignalTooShort when s has N samples or fewer.
Sequence apply_localization(const PoleZeroSystem& sys, const Sequence& s);

/// Evaluates the boundary conditions of `s` for the imaginary poles of `sys`.
/// Throws SignalTooShort when s does not cover [-(n0 - 1), 0].
BoundaryReport boundary_residuals(const PoleZeroSystem& sys, const Sequence& s);

}  // namespace sparseproc
