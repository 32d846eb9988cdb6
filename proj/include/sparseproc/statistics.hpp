#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparseproc/sequence.hpp"

namespace sparseproc {

/// Estimates with standard errors, optional theory values and per-entry
/// verdicts. `x` labels the entries (lag, frequency or omega index).
/// `threshold` is the allowed |estimate - reference| for each entry.
struct StatReport {
  std::string name;
  std::vector<double> x;
  std::vector<cplx> estimate;
  std::vector<double> std_error;
  std::vector<cplx> reference;
  std::vector<double> threshold;
  std::vector<bool> pass;
  double statistic = 0.0;  ///< summary statistic for global tests
  double critical = 0.0;   ///< its rejection threshold

  bool passed() const;
  /// Entries failing their threshold.
  std::size_t failures() const;
};

/// Biased (1/n) autocovariance r[k] = mean (x[i] - m) conj(x[i + k] - m) for
/// k = 0 .. maxlag, with delete-one-block jackknife standard errors.
StatReport empirical_autocorr(const Sequence& x, int maxlag, int blocks = 100);

/// Sets `reference` and marks entries whose distance to it is at most
/// nsigma standard errors.
void compare_to_reference(StatReport& report, const std::vector<cplx>& reference, double nsigma = 3.0);

/// Non-overlapping K-tuples (x[i], x[i+1], ..., x[i+K-1]) of the real part,
/// consecutive tuples separated by `gap` unused samples.
std::vector<std::vector<double>> extract_tuples(const Sequence& x, int K, int gap);

/// phi(w) = mean exp(j <tuple, w>) for every w in `omegas`. The confidence
/// band is a simultaneous studentized bootstrap band: `threshold` holds
/// q * se(w), q being the `level` quantile of max_w |phi*(w) - phi(w)| / se(w)
/// over `resamples` bootstrap replicates drawn from `seed`.
StatReport empirical_charfn(const std::vector<std::vector<double>>& tuples,
                            const std::vector<std::vector<double>>& omegas, int resamples = 500,
                            std::uint64_t seed = 0x5eed, double level = 0.99);

/// Marks entries with |estimate - reference| <= threshold.
void compare_within_band(StatReport& report, const std::vector<cplx>& reference);

/// Bartlett periodogram: mean of |FFT|^2 / M over non-overlapping segments of
/// length M. Entry f is frequency 2 pi f / M.
std::vector<double> bartlett_periodogram(const Sequence& x, int segment);

/// Flatness test of the Bartlett periodogram. With L segments and sigma^2 the
/// sample variance, X = L sum_f (P(f) / sigma^2 - 1)^2 over the independent
/// frequencies is compared with the chi-square quantile at 1 - significance.
/// Throws SignalTooShort below 2^14 samples.
StatReport whiteness_check(const Sequence& e, int segment = 256, double significance = 0.01);

/// Two-sample Kolmogorov-Smirnov test at the 1% level (c = 1.628).
StatReport ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Least-squares slope of log(-log |phi(w)|) against log w, which is alpha for
/// a symmetric alpha-stable marginal. Entries with |phi| outside
/// [min_abs, max_abs] are skipped. estimate[0] holds the slope, std_error[0]
/// its regression standard error.
StatReport stability_index(const std::vector<double>& samples, const std::vector<double>& omegas,
                           double min_abs = 0.05, double max_abs = 0.95);

}  // namespace sparseproc
