#pragma once

#include <span>
#include <vector>

#include "sparseproc/sequence.hpp"
#include "sparseproc/system_model.hpp"

namespace sparseproc {

/// coeff * tau^degree * exp(pole * tau), tau being the local time within a piece.
struct ExpTerm {
  cplx coeff;
  cplx pole;
  int degree = 0;
};

/// Exponential spline with integer knots. Piece i lives on
/// [first_knot + i, first_knot + i + 1) and is a sum of ExpTerm in local time
/// tau = t - (first_knot + i). Evaluation is right-continuous and the function
/// is zero outside [first_knot, first_knot + num_pieces).
class PiecewiseExpPoly {
 public:
  PiecewiseExpPoly() = default;
  PiecewiseExpPoly(int first_knot, std::vector<std::vector<ExpTerm>> pieces);

  /// exp(pole * t) on [0, 1).
  static PiecewiseExpPoly first_order(cplx pole);

  int first_knot() const noexcept { return first_knot_; }
  int last_knot() const noexcept { return first_knot_ + static_cast<int>(pieces_.size()); }
  std::size_t num_pieces() const noexcept { return pieces_.size(); }
  const std::vector<ExpTerm>& piece(std::size_t i) const { return pieces_.at(i); }

  cplx operator()(double t) const;

  /// Value of piece i at local time tau, with no support test. Used for
  /// one-sided limits at knots (tau = 1 gives the left limit at the next knot).
  cplx piece_value(std::size_t i, double tau) const;

  /// Classical derivative on each piece; jumps at knots contribute nothing.
  PiecewiseExpPoly derivative() const;

  /// Closed-form convolution with the first-order B-spline exp(a t) 1_[0,1)(t).
  PiecewiseExpPoly convolve_first_order(cplx a) const;

  PiecewiseExpPoly scaled(cplx c) const;
  PiecewiseExpPoly shifted(int k) const;  ///< t -> f(t - k)

 private:
  int first_knot_ = 0;
  std::vector<std::vector<ExpTerm>> pieces_;
};

cplx eval_spline(const PiecewiseExpPoly& s, double t);

/// Exponential B-spline beta_alpha = beta_alpha1 * ... * beta_alphaN on [0, N].
PiecewiseExpPoly bspline_alpha(std::span<const cplx> poles);

/// beta_(alpha;gamma) = prod_m (D - gamma_m) beta_alpha, without the gain.
PiecewiseExpPoly bspline_pole_zero(std::span<const cplx> poles, std::span<const cplx> zeros);

/// Generalized B-spline beta_L = b_M beta_(alpha;gamma) of the unit-step system.
PiecewiseExpPoly bspline_L(const PoleZeroSystem& sys);

/// Autocorrelation B-spline conj(beta_L) * beta_L(-.) on [-N, N], built from
/// the mirrored/conjugated parameter vector rather than by numerical convolution.
PiecewiseExpPoly bspline_autocorr(const PoleZeroSystem& sys);

/// Green function rho_L = Q_M(D) rho_alpha as a partial-fraction sum of
/// first-order Green functions: causal for Re(pole) <= 0, anti-causal otherwise.
/// Confluent poles (closer than 1e-9) are merged and expanded with
/// t^(k-1)/(k-1)! factors. The step 1_+(t) is taken as 1 at t = 0.
class GreenFunction {
 public:
  explicit GreenFunction(const PoleZeroSystem& sys);

  cplx operator()(double t) const;

  struct Mode {
    cplx pole;
    std::vector<cplx> coeffs;  ///< coeffs[k-1] multiplies 1/(zeta - pole)^k
  };
  const std::vector<Mode>& modes() const noexcept { return modes_; }

 private:
  std::vector<Mode> modes_;
};

cplx green_function_eval(const PoleZeroSystem& sys, double t);

}  // namespace sparseproc
