#include "sparseproc/io/config.hpp"

#include <cstdio>
#include <fstream>

namespace sparseproc::io {

using nlohmann::json;

namespace {

cplx parse_complex(const json& v, const char* what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(std::string(what) + " entries must be numbers or [re, im] pairs");
}

std::vector<cplx> parse_complex_list(const json& j, const char* key) {
  std::vector<cplx> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) throw ConfigError(std::string(key) + " must be an array");
  for (const auto& v : j[key]) out.push_back(parse_complex(v, key));
  return out;
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
  return j[key].get<double>();
}

InnovationSpec parse_innovation(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError("innovation needs a \"type\" field");
  const std::string type = j["type"].get<std::string>();
  if (type == "gaussian") {
    const double b2 = number(j, "b2", 0.5);
    if (!(b2 > 0.0)) throw ConfigError("gaussian b2 must be positive");
    return GaussianInnovation{b2};
  }
  if (type == "poisson") {
    PoissonInnovation p;
    p.lambda = number(j, "lambda", p.lambda);
    if (!(p.lambda >= 0.0)) throw ConfigError("poisson lambda must be non-negative");
    const std::string amp = j.value("amplitude", std::string("normal"));
    if (amp != "normal") throw ConfigError("unknown amplitude law \"" + amp + "\" (supported: normal)");
    return p;
  }
  if (type == "sas") {
    StableInnovation s;
    s.alpha = number(j, "alpha", s.alpha);
    s.b_alpha = number(j, "b_alpha", s.b_alpha);
    if (!(s.alpha > 0.0 && s.alpha <= 2.0)) throw ConfigError("sas alpha must lie in (0, 2]");
    if (!(s.b_alpha > 0.0)) throw ConfigError("sas b_alpha must be positive");
    return s;
  }
  throw ConfigError("unknown innovation type \"" + type + "\"");
}

json innovation_json(const InnovationSpec& spec) {
  if (const auto* g = std::get_if<GaussianInnovation>(&spec)) return {{"type", "gaussian"}, {"b2", g->b2}};
  if (const auto* p = std::get_if<PoissonInnovation>(&spec)) {
    return {{"type", "poisson"}, {"lambda", p->lambda}, {"amplitude", p->amplitude.name}};
  }
  const auto& s = std::get<StableInnovation>(spec);
  return {{"type", "sas"}, {"alpha", s.alpha}, {"b_alpha", s.b_alpha}};
}

SystemConfig parse_system(const json& j) {
  SystemConfig sc;
  sc.poles = parse_complex_list(j, "poles");
  sc.zeros = parse_complex_list(j, "zeros");
  if (j.contains("gain")) sc.gain = parse_complex(j["gain"], "gain");
  sc.step = number(j, "step", 1.0);
  if (sc.poles.empty()) throw ConfigError("system needs at least one pole");
  if (!(sc.step > 0.0)) throw ConfigError("step must be positive");
  return sc;
}

json system_json(const SystemConfig& sc) {
  json poles = json::array(), zeros = json::array();
  for (const cplx& p : sc.poles) poles.push_back(complex_json(p));
  for (const cplx& z : sc.zeros) zeros.push_back(complex_json(z));
  return {{"poles", poles}, {"zeros", zeros}, {"gain", complex_json(sc.gain)}, {"step", sc.step}};
}

ComponentConfig parse_component(const json& j) {
  if (!j.contains("system") || !j.contains("innovation")) {
    throw ConfigError("each component needs \"system\" and \"innovation\"");
  }
  return {parse_system(j["system"]), parse_innovation(j["innovation"])};
}

}  // namespace

const ComponentConfig& RunConfig::primary() const {
  if (components.empty()) throw ConfigError("configuration has no system");
  return components.front();
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig cfg;
  if (!j.contains("spec_version")) throw ConfigError("configuration needs a \"spec_version\" field");
  cfg.spec_version = j["spec_version"].is_string() ? j["spec_version"].get<std::string>()
                                                   : j["spec_version"].dump();
  if (cfg.spec_version != kSpecVersion) {
    throw ConfigError("unsupported spec_version " + cfg.spec_version + " (expected " + kSpecVersion + ")");
  }
  if (j.contains("components")) {
    for (const auto& c : j["components"]) cfg.components.push_back(parse_component(c));
  } else {
    cfg.components.push_back(parse_component(j));
  }
  if (cfg.components.empty()) throw ConfigError("configuration has no system");
  if (j.contains("length")) cfg.length = j["length"].get<index_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("oversampling")) cfg.oversampling = j["oversampling"].get<int>();
  if (j.contains("points_per_unit")) cfg.points_per_unit = j["points_per_unit"].get<int>();
  if (j.contains("max_lag")) cfg.max_lag = j["max_lag"].get<int>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (cfg.length <= 0) throw ConfigError("length must be positive");
  if (cfg.oversampling < 1) throw ConfigError("oversampling must be at least 1");
  if (cfg.points_per_unit < 1) throw ConfigError("points_per_unit must be at least 1");
  if (cfg.max_lag < 0) throw ConfigError("max_lag must be non-negative");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return parse_config(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError("malformed config " + path + ": " + e.what());
  }
}

json to_json(const RunConfig& cfg) {
  json comps = json::array();
  for (const auto& c : cfg.components) {
    comps.push_back({{"system", system_json(c.system)}, {"innovation", innovation_json(c.innovation)}});
  }
  json j = {{"spec_version", cfg.spec_version},
            {"components", comps},
            {"length", cfg.length},
            {"oversampling", cfg.oversampling},
            {"points_per_unit", cfg.points_per_unit},
            {"max_lag", cfg.max_lag}};
  if (cfg.seed) j["seed"] = *cfg.seed;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  // Output paths do not change results, so they stay out of the hash.
  RunConfig canonical = cfg;
  canonical.out.clear();
  const std::string text = to_json(canonical).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PoleZeroSystem make_system(const SystemConfig& sc) {
  return build_system(sc.poles, sc.zeros, sc.gain, kImaginaryTolerance, sc.step);
}

Realization realize(const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.components.size() == 1) {
    const ComponentConfig& c = cfg.primary();
    return generate(make_system(c.system), c.innovation, cfg.length, seed, cfg.oversampling);
  }
  std::vector<MixedComponent> parts;
  for (const auto& c : cfg.components) parts.push_back({make_system(c.system), c.innovation, cfg.oversampling});
  return generate_mixed(parts, cfg.length, seed);
}

}  // namespace sparseproc::io
