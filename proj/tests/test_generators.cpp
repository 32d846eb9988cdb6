#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "sparseproc/discrete_filters.hpp"
#include "sparseproc/errors.hpp"
#include "sparseproc/expspline.hpp"
#include "sparseproc/generators.hpp"
#include "sparseproc/statistics.hpp"

using namespace sparseproc;
using std::numbers::pi;

namespace {

double max_abs(const Sequence& s) {
  double m = 0.0;
  for (const cplx& v : s.values) m = std::max(m, std::abs(v));
  return m;
}

bool has_knot_in(const std::vector<Knot>& knots, double a, double b) {
  for (const Knot& k : knots)
    if (k.t > a && k.t <= b) return true;
  return false;
}

std::vector<double> every(const Sequence& s, index_t from, index_t stride) {
  std::vector<double> out;
  for (index_t k = from; k <= s.last(); k += stride) out.push_back(s[k].real());
  return out;
}

}  // namespace

TEST_CASE("burn-in length") {
  CHECK(burn_in_length(fixtures::levy()) == 0);
  CHECK(burn_in_length(fixtures::car2()) == static_cast<index_t>(std::ceil(-std::log(1e-10) / 0.05)));
  CHECK(burn_in_length(build_system({-1.0}, {}, 1.0, kImaginaryTolerance, 0.5)) ==
        static_cast<index_t>(std::ceil(-std::log(1e-10) / 0.5)));
}

TEST_CASE("Gaussian L = D is a discrete Brownian path") {
  const Realization r = generate_gaussian(fixtures::levy(), 1.0, 50000, 7);
  CHECK(r.samples.first == 0);
  CHECK(r.samples.size() == 50000);
  CHECK(r.samples[0] == cplx(0.0));
  for (index_t k = 1; k < 100; ++k) CHECK(std::abs(r.samples[k] - r.samples[k - 1] - r.increments[k]) < 1e-12);
  StatReport ac = empirical_autocorr(r.increments, 3);
  compare_to_reference(ac, {1.0, 0.0, 0.0, 0.0});
  CHECK(ac.passed());
  CHECK(r.boundary.max_abs() <= 1e-12);
}

TEST_CASE("Poisson with zero rate gives the zero path") {
  const Realization r = generate_poisson(fixtures::car2(), 0.0, AmplitudeLaw::standard_normal(), 300, 1);
  CHECK(max_abs(r.samples) == 0.0);
  REQUIRE(r.knots.has_value());
  CHECK(r.knots->empty());
}

TEST_CASE("compound Poisson L = D is piecewise constant") {
  const Realization r = generate_poisson(fixtures::levy(), 1.0 / 32.0, AmplitudeLaw::standard_normal(), 4000, 3);
  REQUIRE(r.knots.has_value());
  CHECK(r.knots->size() > 50);
  int flat = 0;
  for (index_t k = 1; k < 4000; ++k) {
    if (!has_knot_in(*r.knots, double(k - 1), double(k))) {
      CHECK(r.samples[k] == r.samples[k - 1]);
      ++flat;
    }
  }
  CHECK(flat > 3000);
  CHECK(r.samples[0] == cplx(0.0));
}

TEST_CASE("compound Poisson L = D^2 is piecewise linear") {
  const Realization r = generate_poisson(fixtures::levy2(), 1.0 / 32.0, AmplitudeLaw::standard_normal(), 4000, 4);
  const double scale = std::max(1.0, max_abs(r.samples));
  for (index_t k = 2; k < 4000; ++k) {
    if (!has_knot_in(*r.knots, double(k - 2), double(k))) {
      CHECK(std::abs(r.samples[k] - 2.0 * r.samples[k - 1] + r.samples[k - 2]) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("stored Poisson increments are the analytic B-spline sums") {
  for (const auto& sys : fixtures::worked_examples()) {
    const Realization r = generate_poisson(sys, 0.2, AmplitudeLaw::standard_normal(), 500, 9);
    const Sequence again = poisson_increments(sys, *r.knots, 0, 499);
    for (index_t k = 0; k < 500; ++k) CHECK(again[k] == r.increments[k]);
    for (const Knot& kn : *r.knots) CHECK(kn.t >= -double(sys.order()));
  }
}

TEST_CASE("determinism and seed sensitivity") {
  for (const auto& sys : {fixtures::car2(), fixtures::oscillator()}) {
    const InnovationSpec specs[] = {GaussianInnovation{}, PoissonInnovation{0.3}, StableInnovation{1.2, 1.0}};
    for (const auto& s : specs) {
      const Realization a = generate(sys, s, 400, 11, 8);
      const Realization b = generate(sys, s, 400, 11, 8);
      const Realization c = generate(sys, s, 400, 12, 8);
      CHECK(a.samples.values == b.samples.values);
      CHECK(a.samples.values != c.samples.values);
    }
  }
}

TEST_CASE("increments are recovered from the samples") {
  const InnovationSpec specs[] = {GaussianInnovation{}, PoissonInnovation{0.3}, StableInnovation{1.2, 1.0}};
  auto systems = fixtures::worked_examples();
  systems.push_back(build_system({-0.4, cplx(0, 1.0), cplx(0, -1.0)}, {-1.0}));
  systems.push_back(build_system({0.3, -0.8}));
  for (const auto& sys : systems) {
    for (const auto& s : specs) {
      const Realization r = generate(sys, s, 2000, 5, 8);
      const Sequence u = apply_localization(sys, r.samples);
      const double scale = std::max(1.0, max_abs(r.samples));
      double worst = 0.0;
      for (index_t k = u.first; k <= u.last(); ++k) worst = std::max(worst, std::abs(u[k] - r.increments[k]));
      CHECK(worst <= 1e-12 * scale);
      CHECK(r.boundary.max_abs() <= 1e-12 * scale);
      CHECK(r.boundary.residuals.size() == static_cast<std::size_t>(sys.n0));
    }
  }
}

TEST_CASE("the sampling step is handled by rescaling") {
  const auto phys = build_system({cplx(-0.1, pi), cplx(-0.1, -pi)}, {}, 1.0, kImaginaryTolerance, 0.5);
  const Realization a = generate_gaussian(phys, 1.0, 300, 21);
  const Realization b = generate_gaussian(unit_step(phys), 1.0, 300, 21);
  CHECK(a.step == 0.5);
  CHECK(b.step == 1.0);
  CHECK(a.samples.values == b.samples.values);
}

TEST_CASE("increments decorrelate beyond lag N") {
  const auto sys = fixtures::car2();
  const InnovationSpec specs[] = {GaussianInnovation{0.5}, PoissonInnovation{0.5}};
  for (const auto& s : specs) {
    const Realization r = generate(sys, s, 200000, 31);
    StatReport ac = empirical_autocorr(r.increments, 6);
    const double var0 = innovation_variance(s);
    const PiecewiseExpPoly bll = bspline_autocorr(sys);
    std::vector<cplx> ref;
    for (int k = 0; k <= 6; ++k) ref.push_back(var0 * bll(double(k)));
    compare_to_reference(ac, ref);
    CHECK(ac.passed());
  }
  // oversampled Gaussian pixels, variance from the piecewise-constant kernel
  const int m = 16;
  const Realization r = generate_levy_oversampled(sys, GaussianInnovation{0.5}, m, 100000, 32);
  StatReport ac = empirical_autocorr(r.increments, 5);
  std::vector<cplx> zero(6);
  const std::vector<cplx> kern = oversampled_kernel(sys, m);
  for (std::size_t i = 0; i < kern.size(); ++i) zero[0] += std::norm(kern[i]) / double(m);
  for (std::size_t i = 0; i + m < kern.size(); ++i) zero[1] += kern[i] * std::conj(kern[i + m]) / double(m);
  compare_to_reference(ac, zero);
  CHECK(ac.passed());
}

TEST_CASE("oversampled alpha = 2 matches the Gaussian generator in law") {
  const auto sys = fixtures::car2();
  const Realization g = generate_gaussian(sys, 1.0, 60000, 41);
  const Realization s = generate_levy_oversampled(sys, StableInnovation{2.0, 0.5}, 32, 60000, 42);
  const auto a = every(g.increments, 0, 3);
  const auto b = every(s.increments, 0, 3);
  CHECK(ks_two_sample(a, b).passed());
}

TEST_CASE("oversampled SaS marginal against the piecewise-constant kernel norm") {
  const auto sys = fixtures::car2();
  const int m = 16;
  const double alpha = 1.2, b = 1.0;
  const Realization r = generate_levy_oversampled(sys, StableInnovation{alpha, b}, m, 300000, 43);
  const std::vector<cplx> kern = oversampled_kernel(sys, m);
  double norm = 0.0;
  for (const cplx& v : kern) norm += std::pow(std::abs(v), alpha) / m;
  const auto x = every(r.increments, 0, 3);
  for (double w : {0.1, 0.3, 0.6, 1.0}) {
    double c = 0.0;
    for (double v : x) c += std::cos(w * v);
    c /= double(x.size());
    CHECK(std::abs(c - std::exp(-b * std::pow(w, alpha) * norm)) < 4.0 / std::sqrt(double(x.size())));
  }
}

TEST_CASE("oversampled kernel error decays like 1/m") {
  const auto sys = fixtures::oscillator();
  double prev = oversampled_kernel_error(sys, 8);
  for (int m : {16, 32, 64}) {
    const double e = oversampled_kernel_error(sys, m);
    CHECK(prev / e >= 1.8);
    CHECK(prev / e <= 2.2);
    prev = e;
  }
  const std::vector<cplx> k = oversampled_kernel(sys, 4);
  CHECK(k.size() == 9);
  CHECK(std::abs(k[4] - bspline_L(sys)(1.0)) == 0.0);
  const Realization r = generate_levy_oversampled(sys, StableInnovation{}, 8, 50, 1);
  CHECK(r.oversampling == 8);
  CHECK(r.kernel_error == doctest::Approx(oversampled_kernel_error(sys, 8)));
}

TEST_CASE("recovered innovation of a Gaussian path is white") {
  const auto sys = fixtures::car2();
  const Realization r = generate_gaussian(sys, 1.0, 1 << 16, 51);
  const Sequence e = recover_innovation(sys, r.increments);
  CHECK(whiteness_check(e.slice(100, e.last())).passed());
  CHECK_FALSE(whiteness_check(generate_gaussian(fixtures::levy2(), 1.0, 1 << 16, 52).increments).passed());
}

TEST_CASE("mixture of one component is that component") {
  const MixedComponent c{fixtures::car2(), PoissonInnovation{0.2}, 16};
  const Realization mix = generate_mixed({c}, 500, 77);
  const Realization solo = generate(c.sys, c.innovation, 500, component_seed(77, 0), 16);
  CHECK(mix.samples.values == solo.samples.values);
  CHECK(mix.increments.values == solo.increments.values);
  CHECK(component_seed(77, 0) != component_seed(77, 1));
}

TEST_CASE("spectra of independent components add") {
  const auto s1 = build_system({-1.0, cplx(-0.5, 1.0), cplx(-0.5, -1.0)});
  const auto s2 = build_system({-0.3, -2.0}, {-1.0});
  const Realization mix =
      generate_mixed({{s1, GaussianInnovation{0.5}}, {s2, GaussianInnovation{1.0}}}, 1 << 18, 61);
  CHECK(mix.increments.empty());
  const int M = 256;
  const std::vector<double> P = bartlett_periodogram(mix.samples, M);
  const double L = double((1 << 18) / M);
  int outliers = 0;
  for (int f = 1; f < M / 2; ++f) {
    const double w = 2.0 * pi * f / M;
    const double ref = power_spectrum(s1, 1.0, w).process + power_spectrum(s2, 2.0, w).process;
    if (std::abs(P[static_cast<std::size_t>(f)] / ref - 1.0) > 4.0 / std::sqrt(L)) ++outliers;
  }
  CHECK(outliers <= 2);
}

TEST_CASE("mixed increments follow the product of characteristic functions") {
  const auto sys = fixtures::car2();
  const InnovationSpec g = GaussianInnovation{0.1};
  const InnovationSpec p = PoissonInnovation{0.3};
  const Realization mix = generate_mixed({{sys, g}, {sys, p}}, 300000, 71);
  REQUIRE(mix.increments.size() == 300000);
  const auto tuples = extract_tuples(mix.increments, 1, sys.order());
  std::vector<std::vector<double>> omegas;
  std::vector<cplx> ref;
  for (double w : {0.2, 0.5, 1.0, 1.5, 2.5}) {
    omegas.push_back({w});
    ref.push_back(charfn_increment(g, sys, {w}) * charfn_increment(p, sys, {w}));
  }
  StatReport rep = empirical_charfn(tuples, omegas);
  compare_within_band(rep, ref);
  CHECK(rep.passed());
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(generate_gaussian(fixtures::car2(), 1.0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(oversampled_kernel(fixtures::car2(), 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_mixed({}, 10, 1), std::invalid_argument);
  const auto half = build_system({-1.0}, {}, 1.0, kImaginaryTolerance, 0.5);
  CHECK_THROWS_AS(generate_mixed({{half, GaussianInnovation{}}, {fixtures::car2(), GaussianInnovation{}}}, 10, 1),
                  std::invalid_argument);
}
