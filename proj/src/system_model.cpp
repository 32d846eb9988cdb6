#include "sparseproc/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sparseproc/errors.hpp"

namespace sparseproc {

namespace {

constexpr double kRieszTolerance = 1e-9;

// Multiset equality of v and conj(v) up to a small tolerance.
bool conjugate_closed(const std::vector<cplx>& v) {
  std::vector<bool> used(v.size(), false);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx target = std::conj(v[i]);
    bool found = false;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (!used[j] && std::abs(v[j] - target) <= 1e-12 * (1.0 + std::abs(target))) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

double PoleZeroSystem::min_decay() const {
  double m = std::numeric_limits<double>::infinity();
  for (const cplx& p : lsi_poles()) m = std::min(m, std::abs(p.real()));
  return m;
}

PoleZeroSystem build_system(std::vector<cplx> poles, std::vector<cplx> zeros, cplx gain,
                            double imaginary_tolerance, double step) {
  if (poles.empty()) throw OrderViolation("a system needs at least one pole");
  if (zeros.size() >= poles.size()) {
    std::ostringstream msg;
    msg << "transfer function must be strictly proper (M=" << zeros.size() << ", N=" << poles.size() << ")";
    throw OrderViolation(msg.str());
  }
  if (!(step > 0.0)) throw std::invalid_argument("sampling step must be positive");

  for (cplx& p : poles) {
    if (std::abs(p.real()) < imaginary_tolerance) p = cplx(0.0, p.imag());
  }
  // Non-imaginary poles first, imaginary last; relative order is preserved.
  std::stable_partition(poles.begin(), poles.end(), [](const cplx& p) { return p.real() != 0.0; });

  PoleZeroSystem sys;
  sys.n0 = static_cast<int>(std::count_if(poles.begin(), poles.end(), [](const cplx& p) { return p.real() == 0.0; }));
  sys.poles = std::move(poles);
  sys.zeros = std::move(zeros);
  sys.gain = gain;
  sys.step = step;

  const auto imag = sys.imaginary_poles();
  for (std::size_t i = 0; i < imag.size(); ++i) {
    for (std::size_t j = i + 1; j < imag.size(); ++j) {
      const double turns = (imag[i].imag() - imag[j].imag()) / (2.0 * std::numbers::pi);
      const double k = std::round(turns);
      if (k != 0.0 && std::abs(turns - k) < kRieszTolerance) {
        std::ostringstream msg;
        msg << "imaginary poles j" << imag[i].imag() << " and j" << imag[j].imag() << " differ by 2*pi*" << k;
        throw RieszViolation(msg.str());
      }
    }
  }

  sys.real = conjugate_closed(sys.poles) && conjugate_closed(sys.zeros) && gain.imag() == 0.0;
  return sys;
}

PoleZeroSystem rescale_system(const PoleZeroSystem& sys, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("rescale factor must be positive");
  if (T == 1.0) return sys;
  PoleZeroSystem out = sys;
  for (cplx& p : out.poles) p *= T;
  for (cplx& z : out.zeros) z *= T;
  out.gain *= std::pow(T, static_cast<double>(sys.order() - sys.num_zeros() - 1));
  out.noise_scale *= T;
  out.step /= T;
  return out;
}

PoleZeroSystem unit_step(const PoleZeroSystem& sys) {
  if (sys.step == 1.0) return sys;
  PoleZeroSystem out = rescale_system(sys, sys.step);
  out.step = 1.0;
  return out;
}

std::vector<cplx> poly_from_roots(std::span<const cplx> roots) {
  std::vector<cplx> c{1.0};
  for (const cplx& r : roots) {
    c.push_back(0.0);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] -= r * c[i - 1];
  }
  return c;
}

}  // namespace sparseproc
