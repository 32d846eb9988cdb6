// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sparseproc/discrete_filters.hpp"
#include "sparseproc/expspline.hpp"
#include "sparseproc/generators.hpp"
#include "sparseproc/innovations.hpp"
#include "sparseproc/inverse_operators.hpp"
#include "sparseproc/io/validation.hpp"
#include "sparseproc/statistics.hpp"

using namespace sparseproc;
using std::numbers::pi;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

double tri(double t) { return std::max(0.0, 1.0 - std::abs(t)); }

// 1. B-splines of D and D^2
void bspline_ground_truth(Outcome& o) {
  const auto d = fixtures::levy();
  const auto b = bspline_L(d), a = bspline_autocorr(d);
  double e1 = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = -2.0 + 4.0 * (i + 0.5) / 1000.0;
    const double rect = (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
    e1 = std::max({e1, std::abs(b(t) - rect), std::abs(a(t) - tri(t))});
  }
  auto rect = [](double t) { return cplx((t >= 0.0 && t < 1.0) ? 1.0 : 0.0); };
  auto tri_c = [](double t) { return cplx(tri(t)); };
  const auto d2 = fixtures::levy2();
  const auto b2 = bspline_L(d2), a2 = bspline_autocorr(d2);
  double e2 = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = -2.5 + 5.0 * (i + 0.5) / 1000.0;
    e2 = std::max(e2, std::abs(b2(t) - oracle::convolve(rect, 0, 1, rect, 0, 1, t)));
    e2 = std::max(e2, std::abs(a2(t) - oracle::convolve(tri_c, -1, 1, tri_c, -1, 1, t)));
  }
  const double es = std::max({std::abs(a2(-1.0) - 1.0 / 6.0), std::abs(a2(0.0) - 2.0 / 3.0),
                              std::abs(a2(1.0) - 1.0 / 6.0)});
  o.detail << "D err=" << e1 << " D^2 err=" << e2 << " samples err=" << es;
  o.require(e1 <= 1e-12, "D shapes");
  o.require(e2 <= 1e-12, "D^2 shapes");
  o.require(es <= 1e-12, "D^2 integer samples");
}

// 2. spectral factorization
std::vector<PoleZeroSystem> random_systems(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<PoleZeroSystem> out;
  for (int i = 0; i < count; ++i) {
    const int N = 1 + i % 6;
    const auto poles = oracle::random_stable_poles(rng, N);
    std::vector<cplx> zeros;
    const int M = (i / 6) % N;
    for (int m = 0; m < M; ++m) zeros.emplace_back(2.0 * u(rng), 0.0);
    out.push_back(build_system(poles, zeros, 1.0 + 0.5 * u(rng)));
  }
  return out;
}

void spectral_factorization(Outcome& o) {
  auto systems = fixtures::worked_examples();
  for (auto& s : random_systems(100, 31337)) systems.push_back(s);
  double tap_err = 0.0, spec_err = 0.0;
  for (const auto& sys : systems) {
    const FilterSpec bl = discrete_bspline_filter(sys);
    const FilterSpec bp = spectral_factorize(bl);
    const auto n = static_cast<index_t>(bp.taps.size());
    for (index_t k = -(n - 1); k <= n - 1; ++k) {
      cplx acc = 0.0;
      for (index_t i = 0; i < n; ++i) acc += bp.at(i) * std::conj(bp.at(i - k));
      tap_err = std::max(tap_err, std::abs(acc - bl.at(k)));
    }
    for (index_t k = bl.first(); k <= bl.last(); ++k) {
      if (k < -(n - 1) || k > n - 1) tap_err = std::max(tap_err, std::abs(bl.at(k)));
    }
    for (int i = 0; i < 1024; ++i) {
      const double w = -pi + 2.0 * pi * i / 1024;
      spec_err = std::max(spec_err, std::abs(std::norm(bp.response(w)) - bl.response(w)));
    }
  }
  o.detail << systems.size() << " systems, tap err=" << tap_err << " spectrum err=" << spec_err;
  o.require(tap_err <= 1e-9, "taps");
  o.require(spec_err <= 1e-9, "spectrum");
}

// 3. inverse operators
void inverse_algebra(Outcome& o) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> re(-1.5, 1.5), im(-3.0, 3.0), coin(0.0, 1.0);
  auto signal = [&](index_t first, std::size_t n) {
    Sequence x(first, n);
    for (auto& v : x.values) v = cplx(g(rng), g(rng));
    return x;
  };
  double right = 0.0, bc = 0.0, left = 0.0;
  for (int trial = 0; trial < 90; ++trial) {
    const int n0 = trial % 3;
    const int N = n0 + 1 + trial % 4;
    std::vector<cplx> poles;
    for (int i = 0; i < N - n0; ++i) {
      double r = re(rng);
      if (std::abs(r) < 0.1) r = 0.1;
      poles.emplace_back(r, coin(rng) < 0.5 ? 0.0 : im(rng));
    }
    for (int i = 0; i < n0; ++i) poles.emplace_back(0.0, 0.3 * im(rng) * pi);
    const auto sys = build_system(poles);
    const Sequence x = signal(-10, 64);
    const CompositeInverse r = apply_inverse_composite(sys, x);
    bc = std::max(bc, r.boundary.max_abs());
    const Sequence u = apply_localization(sys, r.signal);
    for (index_t k = u.first; k <= u.last(); ++k) right = std::max(right, std::abs(u[k] - x.at_or_zero(k)));
    if (n0 == 0) {
      const Sequence s = signal(0, 2000);
      const Sequence v = apply_localization(sys, s);
      const Sequence back = apply_inverse_composite(sys, v).signal;
      const auto warm = static_cast<index_t>(std::ceil(-std::log(1e-12) / sys.min_decay()));
      for (index_t k = v.first + warm; k <= v.last() - warm; ++k) left = std::max(left, std::abs(back[k] - s[k]));
    }
  }
  o.detail << "right=" << right << " boundary=" << bc << " left=" << left;
  o.require(right <= 1e-12, "right inverse");
  o.require(bc <= 1e-12, "boundary residuals");
  o.require(left <= 1e-10, "left inverse");
}

// 4. Gaussian increment statistics of the CAR(2) example
void gaussian_increments(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sys = fixtures::car2();
  const double var0 = 1.0;
  const Realization r = generate_gaussian(sys, var0, 1000000, 2024);
  const int maxlag = 10;
  StatReport ac = empirical_autocorr(r.increments, maxlag);
  const PiecewiseExpPoly bll = bspline_autocorr(sys);
  std::vector<cplx> ref;
  for (int k = 0; k <= maxlag; ++k) ref.push_back(k <= sys.order() ? var0 * sys.noise_scale * bll(double(k)) : 0.0);
  compare_to_reference(ac, ref, 3.0);
  const Sequence e = recover_innovation(sys, r.increments);
  const StatReport w = whiteness_check(e.slice(e.first + 200, e.last()));
  o.detail << "autocov failures=" << ac.failures() << "/" << ac.estimate.size() << " whiteness stat=" << w.statistic
           << " crit=" << w.critical;
  o.require(ac.passed(), "autocovariance");
  o.require(w.passed(), "whiteness");
  o.require(std::chrono::steady_clock::now() - t0 <= std::chrono::minutes(2), "runtime");
}

// 5. exact compound-Poisson paths
void poisson_exactness(Outcome& o) {
  auto knot_in = [](const std::vector<Knot>& knots, double a, double b) {
    const auto it = std::upper_bound(knots.begin(), knots.end(), a, [](double v, const Knot& k) { return v < k.t; });
    return it != knots.end() && it->t <= b;
  };
  const index_t n = 20000;
  const Realization r1 = generate_poisson(fixtures::levy(), 1.0 / 32.0, AmplitudeLaw::standard_normal(), n, 5);
  int flat = 0, broken1 = 0;
  for (index_t k = 1; k < n; ++k) {
    if (knot_in(*r1.knots, double(k - 1), double(k))) continue;
    ++flat;
    if (r1.samples[k] != r1.samples[k - 1]) ++broken1;
  }
  const Realization r2 = generate_poisson(fixtures::levy2(), 1.0 / 32.0, AmplitudeLaw::standard_normal(), n, 6);
  const double eps = std::numeric_limits<double>::epsilon();
  double worst = 0.0;
  int lin = 0;
  for (index_t k = 2; k < n; ++k) {
    if (knot_in(*r2.knots, double(k - 2), double(k))) continue;
    ++lin;
    const double scale = std::max({1.0, std::abs(r2.samples[k]), std::abs(r2.samples[k - 2])});
    worst = std::max(worst, std::abs(r2.samples[k] - 2.0 * r2.samples[k - 1] + r2.samples[k - 2]) / (eps * scale));
  }
  o.detail << "D: " << broken1 << " non-constant of " << flat << " knot-free intervals; D^2: max |2nd diff| = "
           << worst << " eps over " << lin << " intervals";
  o.require(flat > n / 2 && broken1 == 0, "D piecewise constant");
  o.require(lin > n / 2 && worst <= 16.0, "D^2 piecewise linear");
}

// 6. characteristic functions of the increments
void charfn_consistency(Outcome& o) {
  const auto sys = fixtures::car2();
  const int N = sys.order();
  const index_t tuples_wanted = 100000;
  const index_t n = tuples_wanted * (2 + N);
  const std::vector<std::pair<std::string, InnovationSpec>> cases{
      {"gaussian", GaussianInnovation{0.5}},
      {"poisson", PoissonInnovation{1.0 / 32.0}},
      {"sas", StableInnovation{1.2, 1.0}},
  };
  std::uint64_t seed = 600;
  for (const auto& [name, spec] : cases) {
    const Realization r = generate(sys, spec, n, ++seed, 64);
    for (int K : {1, 2}) {
      auto tuples = extract_tuples(r.increments, K, N);
      tuples.resize(std::min<std::size_t>(tuples.size(), tuples_wanted));
      std::vector<std::vector<double>> omegas;
      for (double w : io::charfn_frequencies(r.increments)) {
        if (K == 1) omegas.push_back({w});
        else omegas.push_back({w, (omegas.size() % 2 ? -0.5 : 0.5) * w});
      }
      std::vector<cplx> ref;
      for (const auto& w : omegas) ref.push_back(charfn_increment(spec, sys, w));
      StatReport cf = empirical_charfn(tuples, omegas, 500, seed);
      compare_within_band(cf, ref);
      o.detail << ' ' << name << " K=" << K << " (" << tuples.size() << " tuples) stat=" << cf.statistic
               << " band=" << cf.critical;
      o.require(cf.passed(), name + " K=" + std::to_string(K));
    }
  }
}

// 7. oversampling convergence
void oversampling_convergence(Outcome& o) {
  const auto sys = fixtures::oscillator();
  double prev = oversampled_kernel_error(sys, 8);
  for (int m : {16, 32, 64}) {
    const double e = oversampled_kernel_error(sys, m);
    o.detail << " m=" << m << " ratio=" << prev / e;
    o.require(prev / e >= 1.8 && prev / e <= 2.2, "m=" + std::to_string(m));
    prev = e;
  }
}

// 8. OU autocorrelation and interpolation
void ou_autocorrelation(Outcome& o) {
  const cplx alpha = -1.0;
  const auto ou = build_system({alpha});
  // single-pole residue: var0 e^{alpha |t|} / (-2 Re alpha)
  auto residue = [&](double t) { return std::exp(alpha * std::abs(t)) / (-2.0 * alpha.real()); };
  const ContinuousAutocorrelation r(ou, 1.0);
  double e1 = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double t = -5.0 + 10.0 * i / 49.0;
    e1 = std::max({e1, std::abs(r(t) - residue(t)), std::abs(r(t) - 0.5 * std::exp(-std::abs(t)))});
  }
  Sequence samples(-400, 801);
  for (index_t k = samples.first; k <= samples.last(); ++k) samples[k] = r(double(k));
  const SplineInterpolant interp(ou, samples);
  double e2 = 0.0;
  for (int k = -25; k < 25; ++k) e2 = std::max(e2, std::abs(interp(k + 0.5) - residue(k + 0.5)));
  o.detail << "autocorr err=" << e1 << " half-integer err=" << e2;
  o.require(e1 <= 1e-6, "autocorrelation");
  o.require(e2 <= 1e-6, "interpolation");
}

// 9. finite differences of the Green function
void green_identity(Outcome& o) {
  const std::vector<PoleZeroSystem> systems{
      fixtures::car2(),
      build_system({-1.0, cplx(-0.3, 2.0), cplx(-0.3, -2.0)}, {-0.5}),
      build_system({-0.4, -0.4, -2.0}, {}, 2.5),
  };
  for (const auto& sys : systems) {
    const auto beta = bspline_L(sys);
    const auto d = localization_coeffs(sys.poles);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double t = -1.0 + (sys.order() + 2.0) * (i + 0.5) / 1000.0;
      cplx acc = 0.0;
      for (index_t m = 0; m <= d.last(); ++m) acc += d.at(m) * green_function_eval(sys, t - double(m));
      worst = std::max(worst, std::abs(acc - beta(t)));
    }
    o.detail << " N=" << sys.order() << " err=" << worst;
    o.require(worst <= 1e-8, "N=" + std::to_string(sys.order()));
  }
}

// 10. repeated CLI runs
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void cli_determinism(Outcome& o) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sparseproc_acceptance";
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> configs{
      {"gaussian", R"({"type": "gaussian", "b2": 0.5})"},
      {"poisson", R"({"type": "poisson", "lambda": 0.03125})"},
      {"sas", R"({"type": "sas", "alpha": 1.2, "b_alpha": 1.0})"},
  };
  for (const auto& [name, inno] : configs) {
    const fs::path cfg = dir / (name + ".json");
    std::ofstream(cfg) << R"({"spec_version": "1", "system": {"poles": [[-0.05, 1.5707963267948966],)"
                       << R"( [-0.05, -1.5707963267948966]]}, "innovation": )" << inno
                       << R"(, "length": 5000, "seed": 12345, "oversampling": 16})";
    std::string first;
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (name + std::to_string(run) + ".csv");
      fs::remove(out);
      const std::string cmd =
          std::string(SPARSEPROC_CLI_PATH) + " generate --config " + cfg.string() + " --out " + out.string();
      o.require(std::system(cmd.c_str()) == 0, name + " exit status");
      std::string text = slurp(out);
      if (name == "poisson") text += slurp(out.string() + ".knots.csv");
      if (run == 0) first = text;
      else o.require(!first.empty() && text == first, name + " bytes differ");
    }
    o.detail << ' ' << name << " " << first.size() << " bytes";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"B-spline ground truth", bspline_ground_truth},
      {"spectral factorization", spectral_factorization},
      {"inverse-operator algebra", inverse_algebra},
      {"Gaussian increment statistics", gaussian_increments},
      {"Poisson exactness", poisson_exactness},
      {"characteristic-function consistency", charfn_consistency},
      {"oversampling convergence", oversampling_convergence},
      {"OU autocorrelation and interpolation", ou_autocorrelation},
      {"Green function finite differences", green_identity},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.ok) ++failed;
    std::printf("%s %zu %s: %s (%.1f s)\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
