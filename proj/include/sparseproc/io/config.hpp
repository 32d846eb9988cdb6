#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sparseproc/generators.hpp"
#include "sparseproc/innovations.hpp"
#include "sparseproc/system_model.hpp"

namespace sparseproc::io {

inline constexpr const char* kSpecVersion = "1";

/// Thrown for malformed configuration files and option values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemConfig {
  std::vector<cplx> poles;
  std::vector<cplx> zeros;
  cplx gain{1.0, 0.0};
  double step = 1.0;
};

struct ComponentConfig {
  SystemConfig system;
  InnovationSpec innovation = GaussianInnovation{};
};

/// Everything a CLI run needs. A config with several components describes a
/// mixed process; the first component is the primary one used by `bspline`,
/// `filters` and `stats`.
struct RunConfig {
  std::string spec_version = kSpecVersion;
  std::vector<ComponentConfig> components;
  index_t length = 4096;
  std::optional<std::uint64_t> seed;
  int oversampling = kDefaultOversampling;
  int points_per_unit = 100;  ///< B-spline dump resolution
  int max_lag = 8;
  std::string out;

  const ComponentConfig& primary() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

/// FNV-1a 64-bit hash of the canonical JSON dump (output path excluded), as
/// 16 hex digits.
std::string config_hash(const RunConfig& cfg);

PoleZeroSystem make_system(const SystemConfig& sc);

/// The configured process: a single generator, or generate_mixed when the
/// config has several components.
Realization realize(const RunConfig& cfg, std::uint64_t seed);

}  // namespace sparseproc::io
