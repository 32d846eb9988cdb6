#include "sparseproc/io/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sparseproc::io {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_provenance(std::ostream& os, const std::string& hash, std::optional<std::uint64_t> seed) {
  os << "# config_hash=" << hash << " seed=";
  if (seed) {
    os << *seed;
  } else {
    os << "none";
  }
  os << '\n';
}

void write_signal_csv(std::ostream& os, const Sequence& s) {
  os << "k,re,im\n";
  for (index_t k = s.first; k <= s.last(); ++k) {
    os << k << ',' << format_double(s[k].real()) << ',' << format_double(s[k].imag()) << '\n';
  }
}

void write_knots_csv(std::ostream& os, const std::vector<Knot>& knots, double step) {
  os << "t,a\n";
  for (const Knot& k : knots) os << format_double(k.t * step) << ',' << format_double(k.a) << '\n';
}

void write_long_csv(std::ostream& os, const std::vector<LongRow>& rows) {
  os << "series,x,re,im\n";
  for (const LongRow& r : rows) {
    os << r.series << ',' << format_double(r.x) << ',' << format_double(r.value.real()) << ','
       << format_double(r.value.imag()) << '\n';
  }
}

Sequence read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Sequence out;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::string f0, f1, f2;
    std::getline(row, f0, ',');
    std::getline(row, f1, ',');
    std::getline(row, f2, ',');
    try {
      const auto k = static_cast<index_t>(std::stoll(f0));
      const double re = std::stod(f1);
      const double im = f2.empty() ? 0.0 : std::stod(f2);
      if (out.empty()) {
        out.first = k;
      } else if (k != out.last() + 1) {
        throw std::runtime_error("indices are not consecutive");
      }
      out.values.emplace_back(re, im);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sparseproc::io
