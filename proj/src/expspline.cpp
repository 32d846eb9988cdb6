#include "sparseproc/expspline.hpp"

#include <cmath>
#include <stdexcept>

namespace sparseproc {

namespace {

constexpr double kConfluentTolerance = 1e-9;
// Below this exponent gap the closed-form antiderivative loses digits to
// cancellation, so the exponential is expanded as a Taylor series instead.
constexpr double kSeriesThreshold = 1e-3;

void add_term(std::vector<ExpTerm>& piece, cplx coeff, cplx pole, int degree) {
  if (coeff == cplx{}) return;
  for (ExpTerm& t : piece) {
    if (t.degree == degree && std::abs(t.pole - pole) <= kConfluentTolerance) {
      t.coeff += coeff;
      return;
    }
  }
  piece.push_back({coeff, pole, degree});
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

// Appends c * exp(a tau) * I(tau) to `out`, where
// I(tau) = int_0^tau sigma^j exp((p - a) sigma) dsigma, and returns c * I(1).
cplx emit_integral(std::vector<ExpTerm>& out, cplx c, cplx p, int j, cplx a) {
  const cplx b = p - a;
  const double nb = std::abs(b);
  if (nb <= kConfluentTolerance) {
    add_term(out, c / double(j + 1), a, j + 1);
    return c / double(j + 1);
  }
  if (nb < kSeriesThreshold) {
    cplx total = 0.0;
    cplx bi = 1.0;
    double ifact = 1.0;
    for (int i = 0; i < 40; ++i) {
      const cplx w = c * bi / (ifact * double(j + i + 1));
      add_term(out, w, a, j + i + 1);
      total += w;
      if (std::abs(bi) / ifact < 1e-18) break;
      bi *= b;
      ifact *= double(i + 1);
    }
    return total;
  }
  // exp(a tau) I(tau) = sum_i (-1)^i j!/(j-i)! tau^(j-i) exp(p tau) / b^(i+1)
  //                     - (-1)^j j! exp(a tau) / b^(j+1)
  const double jf = factorial(j);
  cplx at_one = 0.0;
  const cplx eb = std::exp(b);
  for (int i = 0; i <= j; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const cplx w = c * sign * (jf / factorial(j - i)) / ipow(b, i + 1);
    add_term(out, w, p, j - i);
    at_one += w * eb;
  }
  const cplx tail = c * ((j % 2 == 0) ? -1.0 : 1.0) * jf / ipow(b, j + 1);
  add_term(out, tail, a, 0);
  at_one += tail;
  return at_one;
}

}  // namespace

PiecewiseExpPoly::PiecewiseExpPoly(int first_knot, std::vector<std::vector<ExpTerm>> pieces)
    : first_knot_(first_knot), pieces_(std::move(pieces)) {}

PiecewiseExpPoly PiecewiseExpPoly::first_order(cplx pole) {
  return PiecewiseExpPoly(0, {{ExpTerm{1.0, pole, 0}}});
}

cplx PiecewiseExpPoly::piece_value(std::size_t i, double tau) const {
  cplx v = 0.0;
  for (const ExpTerm& term : pieces_[i]) {
    v += term.coeff * std::pow(tau, term.degree) * std::exp(term.pole * tau);
  }
  return v;
}

cplx PiecewiseExpPoly::operator()(double t) const {
  if (pieces_.empty() || !(t >= first_knot_)) return 0.0;
  const double x = t - first_knot_;
  const double fl = std::floor(x);
  if (fl >= static_cast<double>(pieces_.size())) return 0.0;
  return piece_value(static_cast<std::size_t>(fl), x - fl);
}

PiecewiseExpPoly PiecewiseExpPoly::derivative() const {
  std::vector<std::vector<ExpTerm>> out(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    for (const ExpTerm& t : pieces_[i]) {
      add_term(out[i], t.coeff * t.pole, t.pole, t.degree);
      if (t.degree > 0) add_term(out[i], t.coeff * double(t.degree), t.pole, t.degree - 1);
    }
  }
  return PiecewiseExpPoly(first_knot_, std::move(out));
}

PiecewiseExpPoly PiecewiseExpPoly::convolve_first_order(cplx a) const {
  const std::size_t n = pieces_.size();
  if (n == 0) return {};
  std::vector<std::vector<ExpTerm>> out(n + 1);
  const cplx ea = std::exp(a);
  for (std::size_t k = 0; k <= n; ++k) {
    // Contribution of the current piece: int_0^tau f_k(s) e^{a(tau - s)} ds.
    if (k < n) {
      for (const ExpTerm& t : pieces_[k]) emit_integral(out[k], t.coeff, t.pole, t.degree, a);
    }
    // Contribution of the previous piece: int_tau^1 f_{k-1}(s) e^{a(tau + 1 - s)} ds.
    if (k >= 1) {
      for (const ExpTerm& t : pieces_[k - 1]) {
        const cplx whole = emit_integral(out[k], -t.coeff * ea, t.pole, t.degree, a);
        add_term(out[k], -whole, a, 0);
      }
    }
  }
  return PiecewiseExpPoly(first_knot_, std::move(out));
}

PiecewiseExpPoly PiecewiseExpPoly::scaled(cplx c) const {
  PiecewiseExpPoly out = *this;
  for (auto& piece : out.pieces_)
    for (ExpTerm& t : piece) t.coeff *= c;
  return out;
}

PiecewiseExpPoly PiecewiseExpPoly::shifted(int k) const {
  PiecewiseExpPoly out = *this;
  out.first_knot_ += k;
  return out;
}

cplx eval_spline(const PiecewiseExpPoly& s, double t) { return s(t); }

PiecewiseExpPoly bspline_alpha(std::span<const cplx> poles) {
  if (poles.empty()) throw std::invalid_argument("bspline_alpha needs at least one pole");
  PiecewiseExpPoly b = PiecewiseExpPoly::first_order(poles[0]);
  for (std::size_t i = 1; i < poles.size(); ++i) b = b.convolve_first_order(poles[i]);
  return b;
}

PiecewiseExpPoly bspline_pole_zero(std::span<const cplx> poles, std::span<const cplx> zeros) {
  PiecewiseExpPoly b = bspline_alpha(poles);
  for (const cplx& g : zeros) {
    const PiecewiseExpPoly d = b.derivative();
    std::vector<std::vector<ExpTerm>> pieces(b.num_pieces());
    for (std::size_t i = 0; i < b.num_pieces(); ++i) {
      for (const ExpTerm& t : d.piece(i)) add_term(pieces[i], t.coeff, t.pole, t.degree);
      for (const ExpTerm& t : b.piece(i)) add_term(pieces[i], -g * t.coeff, t.pole, t.degree);
    }
    b = PiecewiseExpPoly(b.first_knot(), std::move(pieces));
  }
  return b;
}

PiecewiseExpPoly bspline_L(const PoleZeroSystem& sys) {
  const PoleZeroSystem u = unit_step(sys);
  return bspline_pole_zero(u.poles, u.zeros).scaled(u.gain);
}

PiecewiseExpPoly bspline_autocorr(const PoleZeroSystem& sys) {
  const PoleZeroSystem u = unit_step(sys);
  std::vector<cplx> poles;
  std::vector<cplx> zeros;
  cplx sum_poles = 0.0;
  for (const cplx& p : u.poles) poles.push_back(std::conj(p));
  for (const cplx& p : u.poles) {
    poles.push_back(-p);
    sum_poles += p;
  }
  for (const cplx& z : u.zeros) zeros.push_back(std::conj(z));
  for (const cplx& z : u.zeros) zeros.push_back(-z);
  const double sign = (u.num_zeros() % 2 == 0) ? 1.0 : -1.0;
  const cplx scale = std::norm(u.gain) * sign * std::exp(sum_poles);
  return bspline_pole_zero(poles, zeros).scaled(scale).shifted(-u.order());
}

GreenFunction::GreenFunction(const PoleZeroSystem& sys) {
  const PoleZeroSystem u = unit_step(sys);
  // Cluster confluent poles.
  std::vector<std::pair<cplx, int>> clusters;
  for (const cplx& p : u.poles) {
    bool merged = false;
    for (auto& [rep, mult] : clusters) {
      if (std::abs(rep - p) < kConfluentTolerance) {
        ++mult;
        merged = true;
        break;
      }
    }
    if (!merged) clusters.emplace_back(p, 1);
  }

  for (const auto& [a, m] : clusters) {
    // Taylor series of F(a + eps) = Q(a + eps) / prod_{other poles} (a + eps - alpha_j)
    // up to eps^(m-1); the Laurent coefficient of 1/(zeta - a)^k is F_(m-k).
    std::vector<cplx> series(static_cast<std::size_t>(m), 0.0);
    series[0] = u.gain;
    auto truncate_mul = [&](const std::vector<cplx>& factor) {
      std::vector<cplx> r(series.size(), 0.0);
      for (std::size_t i = 0; i < series.size(); ++i)
        for (std::size_t j = 0; j < factor.size() && i + j < series.size(); ++j) r[i + j] += series[i] * factor[j];
      series = std::move(r);
    };
    for (const cplx& g : u.zeros) truncate_mul({a - g, 1.0});
    for (const auto& [b, mb] : clusters) {
      if (b == a) continue;
      const cplx d = a - b;
      std::vector<cplx> inv(series.size());
      cplx dp = 1.0 / d;
      for (std::size_t i = 0; i < inv.size(); ++i) {
        inv[i] = ((i % 2 == 0) ? 1.0 : -1.0) * dp;
        dp /= d;
      }
      for (int r = 0; r < mb; ++r) truncate_mul(inv);
    }
    Mode mode{a, std::vector<cplx>(static_cast<std::size_t>(m))};
    for (int k = 1; k <= m; ++k) mode.coeffs[static_cast<std::size_t>(k - 1)] = series[static_cast<std::size_t>(m - k)];
    modes_.push_back(std::move(mode));
  }
}

cplx GreenFunction::operator()(double t) const {
  cplx v = 0.0;
  for (const Mode& mode : modes_) {
    const bool causal = mode.pole.real() <= 0.0;
    if (causal ? !(t >= 0.0) : !(t <= 0.0)) continue;
    const cplx base = (causal ? 1.0 : -1.0) * std::exp(mode.pole * t);
    double tk = 1.0;  // t^(k-1)/(k-1)!
    for (std::size_t k = 0; k < mode.coeffs.size(); ++k) {
      v += mode.coeffs[k] * tk * base;
      tk *= t / double(k + 1);
    }
  }
  return v;
}

cplx green_function_eval(const PoleZeroSystem& sys, double t) { return GreenFunction(sys)(t); }

}  // namespace sparseproc
