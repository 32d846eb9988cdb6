#include "sparseproc/io/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sparseproc/discrete_filters.hpp"
#include "sparseproc/errors.hpp"
#include "sparseproc/expspline.hpp"
#include "sparseproc/inverse_operators.hpp"
#include "sparseproc/io/config.hpp"
#include "sparseproc/io/csv.hpp"
#include "sparseproc/io/validation.hpp"
#include "sparseproc/statistics.hpp"

namespace sparseproc::io {

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<index_t> length;
  std::string out;
  std::optional<double> grid_step;
  std::optional<int> oversample;
  std::string input;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig effective_config(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (o.seed) cfg.seed = o.seed;
  if (o.length) {
    if (*o.length <= 0) throw ConfigError("--length must be positive");
    cfg.length = *o.length;
  }
  if (o.grid_step) {
    if (!(*o.grid_step > 0.0)) throw ConfigError("--grid-step must be positive");
    for (auto& c : cfg.components) c.system.step = *o.grid_step;
  }
  if (o.oversample) {
    if (*o.oversample < 1) throw ConfigError("--oversample must be at least 1");
    cfg.oversampling = *o.oversample;
  }
  if (!o.out.empty()) cfg.out = o.out;
  return cfg;
}

std::uint64_t required_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw ConfigError("a seed is required (--seed or \"seed\" in the config)");
  return *cfg.seed;
}

// Writes through `body` to cfg.out, or to `fallback` when no path is set.
template <class Body>
void emit(const RunConfig& cfg, const std::string& path, std::ostream& fallback, Body&& body) {
  std::ostringstream buf;
  write_provenance(buf, config_hash(cfg), cfg.seed);
  body(buf);
  if (path.empty()) {
    fallback << buf.str();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path);
  f << buf.str();
  if (!f) throw IoError("write failed for " + path);
}

std::optional<double> finite_variance(const InnovationSpec& spec) {
  try {
    return innovation_variance(spec);
  } catch (const UndefinedMoment&) {
    return std::nullopt;
  }
}

int cmd_bspline(const RunConfig& cfg, std::ostream& out) {
  const PoleZeroSystem u = unit_step(make_system(cfg.primary().system));
  const PiecewiseExpPoly bl = bspline_L(u);
  const PiecewiseExpPoly bll = bspline_autocorr(u);
  std::vector<LongRow> rows;
  const int ppu = cfg.points_per_unit;
  for (int i = bl.first_knot() * ppu; i <= bl.last_knot() * ppu; ++i) {
    const double t = double(i) / ppu;
    rows.push_back({"beta_L", t, bl(t)});
  }
  for (int i = bll.first_knot() * ppu; i <= bll.last_knot() * ppu; ++i) {
    const double t = double(i) / ppu;
    rows.push_back({"beta_LL", t, bll(t)});
  }
  emit(cfg, cfg.out, out, [&](std::ostream& os) { write_long_csv(os, rows); });
  return kExitOk;
}

int cmd_filters(const RunConfig& cfg, std::ostream& out) {
  const ComponentConfig& c = cfg.primary();
  const PoleZeroSystem u = unit_step(make_system(c.system));
  std::vector<LongRow> rows;
  auto taps = [&](const char* name, const FilterSpec& f) {
    for (index_t k = f.first(); k <= f.last(); ++k) rows.push_back({name, double(k), f.at(k)});
  };
  taps("d_alpha", localization_coeffs(u.poles));
  const FilterSpec B = discrete_bspline_filter(u);
  taps("B_L", B);
  taps("b_plus", spectral_factorize(B));
  if (const auto var0 = finite_variance(c.innovation)) {
    constexpr int kFreqs = 512;
    for (int i = 0; i <= kFreqs; ++i) {
      const double w = std::numbers::pi * i / kFreqs;
      rows.push_back({"spectrum_u", w, increment_spectrum(u, *var0, w)});
      if (u.stationary()) rows.push_back({"spectrum_s", w, power_spectrum(u, *var0, w).process});
    }
  }
  emit(cfg, cfg.out, out, [&](std::ostream& os) { write_long_csv(os, rows); });
  return kExitOk;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  const Realization r = realize(cfg, required_seed(cfg));
  emit(cfg, cfg.out, out, [&](std::ostream& os) { write_signal_csv(os, r.samples); });
  if (r.knots && !cfg.out.empty()) {
    emit(cfg, cfg.out + ".knots.csv", out, [&](std::ostream& os) { write_knots_csv(os, *r.knots, r.step); });
  }
  return kExitOk;
}

int cmd_stats(const RunConfig& cfg, const std::string& input, std::ostream& out) {
  if (input.empty()) throw ConfigError("stats needs --input");
  Sequence s;
  try {
    s = read_signal_csv(input);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
  const ComponentConfig& c = cfg.primary();
  const PoleZeroSystem u = unit_step(make_system(c.system));
  const Sequence inc = apply_localization(u, s);
  if (inc.size() <= static_cast<std::size_t>(cfg.max_lag)) throw SignalTooShort("fewer increments than lags");
  StatReport ac = empirical_autocorr(inc, cfg.max_lag);
  std::vector<cplx> ref;
  if (cfg.components.size() == 1) {
    if (const auto var0 = finite_variance(c.innovation)) {
      const PiecewiseExpPoly bll = bspline_autocorr(u);
      for (int k = 0; k <= cfg.max_lag; ++k) ref.push_back(*var0 * u.noise_scale * bll(double(k)));
      compare_to_reference(ac, ref, 3.0);
    }
  }
  emit(cfg, cfg.out, out, [&](std::ostream& os) {
    os << "lag,re,im,se,ref_re,ref_im,within_3se\n";
    for (std::size_t k = 0; k < ac.estimate.size(); ++k) {
      os << k << ',' << format_double(ac.estimate[k].real()) << ',' << format_double(ac.estimate[k].imag()) << ','
         << format_double(ac.std_error[k]) << ',';
      if (ref.empty()) {
        os << ",,\n";
      } else {
        os << format_double(ref[k].real()) << ',' << format_double(ref[k].imag()) << ','
           << (ac.pass[k] ? "yes" : "no") << '\n';
      }
    }
  });
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ValidationReport rep = run_validation(cfg, required_seed(cfg));
  emit(cfg, cfg.out, out, [&](std::ostream& os) {
    os << "check,status,value,threshold,detail\n";
    for (const auto& c : rep.checks) {
      os << c.name << ',' << (c.skipped ? "skipped" : (c.passed ? "pass" : "fail")) << ',';
      if (!c.skipped) os << format_double(c.value) << ',' << format_double(c.threshold);
      else os << ',';
      os << ",\"" << c.detail << "\"\n";
    }
  });
  for (const auto& c : rep.checks) {
    err << (c.skipped ? "SKIP " : (c.passed ? "PASS " : "FAIL ")) << c.name;
    if (!c.skipped) err << " value=" << c.value << " threshold=" << c.threshold;
    err << '\n';
  }
  return rep.passed() ? kExitOk : kExitChecksFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sampled sparse CARMA processes: B-splines, filters, generation and checks"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub, bool with_seed) {
    sub->add_option("--config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output path (stdout when omitted)");
    sub->add_option("--grid-step", o.grid_step, "sampling step T, overrides the config");
    if (with_seed) {
      sub->add_option("--seed", o.seed, "random seed (u64)");
      sub->add_option("--length", o.length, "number of samples");
      sub->add_option("--oversample", o.oversample, "oversampling factor m for SaS/Levy generation");
    }
  };
  CLI::App* bspline = app.add_subcommand("bspline", "dump beta_L and its autocorrelation on a grid");
  CLI::App* filters = app.add_subcommand("filters", "dump d_alpha, B_L, b_L^+ and spectra");
  CLI::App* generate = app.add_subcommand("generate", "write a realization (and knots for Poisson)");
  CLI::App* stats = app.add_subcommand("stats", "increment autocorrelation of a realization CSV");
  CLI::App* validate = app.add_subcommand("validate", "run the config-driven checks");
  common(bspline, false);
  common(filters, false);
  common(generate, true);
  common(stats, false);
  stats->add_option("--input", o.input, "realization CSV (k,re,im)")->required();
  common(validate, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const RunConfig cfg = effective_config(o);
    if (bspline->parsed()) return cmd_bspline(cfg, out);
    if (filters->parsed()) return cmd_filters(cfg, out);
    if (generate->parsed()) return cmd_generate(cfg, out);
    if (stats->parsed()) return cmd_stats(cfg, o.input, out);
    return cmd_validate(cfg, out, err);
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';  // what() starts with the error kind
    return kExitModelError;
  } catch (const ConfigError& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: io: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: usage: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace sparseproc::io
