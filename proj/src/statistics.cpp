#include "sparseproc/statistics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sparseproc/errors.hpp"

namespace sparseproc {

bool StatReport::passed() const { return failures() == 0; }

std::size_t StatReport::failures() const {
  return static_cast<std::size_t>(std::count(pass.begin(), pass.end(), false));
}

StatReport empirical_autocorr(const Sequence& x, int maxlag, int blocks) {
  const std::size_t n = x.size();
  if (maxlag < 0 || n <= static_cast<std::size_t>(maxlag)) {
    throw std::invalid_argument("empirical_autocorr needs more samples than lags");
  }
  blocks = std::max(2, std::min<int>(blocks, static_cast<int>(n)));
  const cplx mean = std::accumulate(x.values.begin(), x.values.end(), cplx{}) / double(n);
  std::vector<cplx> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = x.values[i] - mean;

  const std::size_t lags = static_cast<std::size_t>(maxlag) + 1;
  const auto nb = static_cast<std::size_t>(blocks);
  const std::size_t width = n / nb;
  // partial[b][k]: lag-k products whose first index falls in block b
  std::vector<std::vector<cplx>> partial(nb, std::vector<cplx>(lags));
  std::vector<std::size_t> count(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * width;
    const std::size_t hi = (b + 1 == nb) ? n : lo + width;
    count[b] = hi - lo;
    for (std::size_t k = 0; k < lags; ++k) {
      cplx acc = 0.0;
      const std::size_t stop = std::min(hi, n - k);
      for (std::size_t i = lo; i < stop; ++i) acc += y[i] * std::conj(y[i + k]);
      partial[b][k] = acc;
    }
  }

  StatReport r;
  r.name = "autocorrelation";
  for (std::size_t k = 0; k < lags; ++k) {
    cplx total = 0.0;
    for (std::size_t b = 0; b < nb; ++b) total += partial[b][k];
    std::vector<cplx> loo(nb);
    cplx loo_mean = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      loo[b] = (total - partial[b][k]) / double(n - count[b]);
      loo_mean += loo[b];
    }
    loo_mean /= double(nb);
    double ss = 0.0;
    for (const cplx& v : loo) ss += std::norm(v - loo_mean);
    r.x.push_back(double(k));
    r.estimate.push_back(total / double(n));
    r.std_error.push_back(std::sqrt(double(nb - 1) / double(nb) * ss));
  }
  return r;
}

void compare_to_reference(StatReport& report, const std::vector<cplx>& reference, double nsigma) {
  if (reference.size() != report.estimate.size()) throw std::invalid_argument("reference length mismatch");
  report.reference = reference;
  report.threshold.clear();
  report.pass.clear();
  for (std::size_t i = 0; i < reference.size(); ++i) {
    report.threshold.push_back(nsigma * report.std_error[i]);
    report.pass.push_back(std::abs(report.estimate[i] - reference[i]) <= report.threshold.back());
  }
}

std::vector<std::vector<double>> extract_tuples(const Sequence& x, int K, int gap) {
  if (K < 1 || gap < 0) throw std::invalid_argument("tuple length must be positive and gap non-negative");
  std::vector<std::vector<double>> out;
  const auto stride = static_cast<std::size_t>(K + gap);
  for (std::size_t i = 0; i + static_cast<std::size_t>(K) <= x.size(); i += stride) {
    std::vector<double> t(static_cast<std::size_t>(K));
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = x.values[i + j].real();
    out.push_back(std::move(t));
  }
  return out;
}

StatReport empirical_charfn(const std::vector<std::vector<double>>& tuples,
                            const std::vector<std::vector<double>>& omegas, int resamples, std::uint64_t seed,
                            double level) {
  const std::size_t n = tuples.size();
  const std::size_t W = omegas.size();
  if (n == 0) throw std::invalid_argument("empirical_charfn needs at least one tuple");

  std::vector<cplx> z(n * W);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t w = 0; w < W; ++w) {
      if (omegas[w].size() != tuples[t].size()) throw std::invalid_argument("omega and tuple lengths differ");
      double phase = 0.0;
      for (std::size_t j = 0; j < omegas[w].size(); ++j) phase += omegas[w][j] * tuples[t][j];
      z[t * W + w] = std::polar(1.0, phase);
    }
  }
  std::vector<cplx> phi(W);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t w = 0; w < W; ++w) phi[w] += z[t * W + w];
  }
  for (cplx& v : phi) v /= double(n);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::vector<double>> dev(static_cast<std::size_t>(resamples), std::vector<double>(W));
  std::vector<cplx> acc(W);
  for (int b = 0; b < resamples; ++b) {
    std::fill(acc.begin(), acc.end(), cplx{});
    for (std::size_t t = 0; t < n; ++t) {
      const cplx* row = &z[pick(rng) * W];
      for (std::size_t w = 0; w < W; ++w) acc[w] += row[w];
    }
    for (std::size_t w = 0; w < W; ++w) dev[static_cast<std::size_t>(b)][w] = std::abs(acc[w] / double(n) - phi[w]);
  }

  StatReport r;
  r.name = "characteristic function";
  r.estimate = phi;
  r.std_error.assign(W, 0.0);
  for (std::size_t w = 0; w < W; ++w) {
    double ss = 0.0;
    for (const auto& d : dev) ss += d[w] * d[w];
    // Floor keeps omega = 0 (zero spread) from dividing by zero.
    r.std_error[w] = std::max(std::sqrt(ss / resamples), 1e-300);
    r.x.push_back(double(w));
  }
  std::vector<double> worst;
  for (const auto& d : dev) {
    double m = 0.0;
    for (std::size_t w = 0; w < W; ++w) m = std::max(m, d[w] / r.std_error[w]);
    worst.push_back(m);
  }
  std::sort(worst.begin(), worst.end());
  const auto qi = std::min(worst.size() - 1, static_cast<std::size_t>(std::ceil(level * double(worst.size()))) - 1);
  r.critical = worst[qi];
  for (std::size_t w = 0; w < W; ++w) r.threshold.push_back(r.critical * r.std_error[w]);
  return r;
}

void compare_within_band(StatReport& report, const std::vector<cplx>& reference) {
  if (reference.size() != report.estimate.size()) throw std::invalid_argument("reference length mismatch");
  report.reference = reference;
  report.pass.clear();
  double worst = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = std::abs(report.estimate[i] - reference[i]);
    report.pass.push_back(d <= report.threshold[i]);
    worst = std::max(worst, d / report.std_error[i]);
  }
  report.statistic = worst;
}

std::vector<double> bartlett_periodogram(const Sequence& x, int segment) {
  if (segment < 2) throw std::invalid_argument("segment length must be at least 2");
  const auto M = static_cast<std::size_t>(segment);
  const std::size_t L = x.size() / M;
  if (L == 0) throw SignalTooShort("signal shorter than one periodogram segment");

  fftw_complex* buf = fftw_alloc_complex(M);
  fftw_plan plan = fftw_plan_dft_1d(segment, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  std::vector<double> P(M);
  for (std::size_t s = 0; s < L; ++s) {
    for (std::size_t i = 0; i < M; ++i) {
      buf[i][0] = x.values[s * M + i].real();
      buf[i][1] = x.values[s * M + i].imag();
    }
    fftw_execute(plan);
    for (std::size_t f = 0; f < M; ++f) P[f] += (buf[f][0] * buf[f][0] + buf[f][1] * buf[f][1]) / double(M);
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);
  for (double& v : P) v /= double(L);
  return P;
}

StatReport whiteness_check(const Sequence& e, int segment, double significance) {
  if (e.size() < (std::size_t{1} << 14)) {
    std::ostringstream msg;
    msg << "whiteness check needs at least 16384 samples, got " << e.size();
    throw SignalTooShort(msg.str());
  }
  const std::vector<double> P = bartlett_periodogram(e, segment);
  const auto M = static_cast<std::size_t>(segment);
  const double L = double(e.size() / M);

  const std::size_t used = (e.size() / M) * M;
  cplx mean = 0.0;
  for (std::size_t i = 0; i < used; ++i) mean += e.values[i];
  mean /= double(used);
  double var = 0.0;
  bool complex_data = false;
  for (std::size_t i = 0; i < used; ++i) {
    var += std::norm(e.values[i] - mean);
    complex_data = complex_data || e.values[i].imag() != 0.0;
  }
  var /= double(used);

  // Real data: bins 1 .. M/2 - 1 are independent; complex data: every bin but 0.
  const std::size_t hi = complex_data ? M - 1 : M / 2 - 1;
  StatReport r;
  r.name = "whiteness";
  double X = 0.0;
  for (std::size_t f = 1; f <= hi; ++f) {
    const double ratio = P[f] / var;
    X += L * (ratio - 1.0) * (ratio - 1.0);
    r.x.push_back(2.0 * std::numbers::pi * double(f) / double(M));
    r.estimate.push_back(ratio);
    r.std_error.push_back(1.0 / std::sqrt(L));
  }
  const boost::math::chi_squared dist{double(hi)};
  r.statistic = X;
  r.critical = boost::math::quantile(dist, 1.0 - significance);
  r.pass.push_back(X <= r.critical);
  return r;
}

StatReport ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS test needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size());
  const double nb = double(b.size());
  std::size_t i = 0, j = 0;
  double D = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    D = std::max(D, std::abs(double(i) / na - double(j) / nb));
  }
  StatReport r;
  r.name = "two-sample Kolmogorov-Smirnov";
  r.statistic = D;
  r.critical = 1.628 * std::sqrt((na + nb) / (na * nb));
  r.pass.push_back(D <= r.critical);
  return r;
}

StatReport stability_index(const std::vector<double>& samples, const std::vector<double>& omegas, double min_abs,
                           double max_abs) {
  std::vector<double> lx, ly;
  for (double w : omegas) {
    if (w <= 0.0) continue;
    cplx phi = 0.0;
    for (double s : samples) phi += std::polar(1.0, w * s);
    const double mag = std::abs(phi) / double(samples.size());
    if (mag < min_abs || mag > max_abs) continue;
    lx.push_back(std::log(w));
    ly.push_back(std::log(-std::log(mag)));
  }
  StatReport r;
  r.name = "stability index";
  if (lx.size() < 3) throw std::invalid_argument("fewer than three usable frequencies for the regression");
  const double n = double(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double res = ly[i] - my - slope * (lx[i] - mx);
    rss += res * res;
  }
  r.x = {0.0};
  r.estimate = {slope};
  r.std_error = {std::sqrt(rss / (n - 2.0) / sxx)};
  r.statistic = slope;
  return r;
}

}  // namespace sparseproc
