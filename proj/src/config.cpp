#include "phi4/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace phi4 {

using nlohmann::json;

std::string ConfigError::join(const std::vector<std::string>& errors) {
  std::string s = "invalid config:";
  for (const auto& e : errors) s += "\n  " + e;
  return s;
}

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

namespace {

const std::set<std::string> kExperiments = {
    "sample",        "verify-dyson",  "verify-inequalities", "scan-renorm",
    "rate-function", "concentration", "acceptance-suite"};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path,
                std::vector<std::string>& errs) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) errs.push_back(path + ": unknown key '" + it.key() + "'");
}

CoeffSequence parse_seq(const json& j, const std::string& path, std::vector<std::string>& errs) {
  if (!j.is_object()) {
    errs.push_back(path + ": expected an object");
    return {};
  }
  if (j.contains("table")) {
    check_keys(j, {"table"}, path, errs);
    std::map<int, double> t;
    for (auto it = j["table"].begin(); it != j["table"].end(); ++it)
      t[std::stoi(it.key())] = it.value().get<double>();
    return CoeffSequence::table(std::move(t));
  }
  check_keys(j, {"base", "exponent"}, path, errs);
  double base = 0.0, expo = 0.0;
  if (j.contains("base") && j["base"].is_number())
    base = j["base"].get<double>();
  else
    errs.push_back(path + ".base: required number");
  if (j.contains("exponent")) {
    if (j["exponent"].is_number())
      expo = j["exponent"].get<double>();
    else
      errs.push_back(path + ".exponent: must be a number");
  }
  return CoeffSequence(base, expo);
}

ShapeSpec parse_shape(const json& j, const std::string& path, std::vector<std::string>& errs) {
  ShapeSpec s;
  check_keys(j, {"name", "kind", "center", "width", "amplitude", "lo", "hi", "value"}, path,
             errs);
  if (j.contains("name") && j["name"].is_string())
    s.name = j["name"].get<std::string>();
  else
    errs.push_back(path + ".name: required string");
  if (j.contains("kind") && j["kind"].is_string())
    s.kind = j["kind"].get<std::string>();
  else
    errs.push_back(path + ".kind: required string");
  if (s.kind == "gaussian-bump") {
    if (j.contains("center"))
      s.center = j["center"].get<std::vector<double>>();
    else
      errs.push_back(path + ".center: required for gaussian-bump");
    if (j.contains("width") && j["width"].get<double>() > 0.0)
      s.width = j["width"].get<double>();
    else
      errs.push_back(path + ".width: required positive number");
    if (j.contains("amplitude")) s.amplitude = j["amplitude"].get<double>();
  } else if (s.kind == "indicator") {
    if (j.contains("lo"))
      s.lo = j["lo"].get<std::vector<double>>();
    else
      errs.push_back(path + ".lo: required for indicator");
    if (j.contains("hi"))
      s.hi = j["hi"].get<std::vector<double>>();
    else
      errs.push_back(path + ".hi: required for indicator");
  } else if (s.kind == "constant") {
    if (j.contains("value"))
      s.value = j["value"].get<double>();
    else
      errs.push_back(path + ".value: required for constant");
  } else if (!s.kind.empty()) {
    errs.push_back(path + ".kind: unknown shape kind '" + s.kind + "'");
  }
  return s;
}

}  // namespace

RunConfig parse_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError({std::string("json parse failure: ") + e.what()});
  }
  std::vector<std::string> errs;
  RunConfig cfg;
  check_keys(j, {"grid", "schedule", "n_list", "sampler", "experiment", "output_dir", "shapes"},
             "$", errs);

  if (j.contains("grid") && j["grid"].is_object()) {
    const auto& g = j["grid"];
    check_keys(g, {"d", "N", "L"}, "$.grid", errs);
    if (g.contains("d")) cfg.d = g["d"].get<int>();
    if (g.contains("N")) cfg.N = g["N"].get<int>();
    if (g.contains("L")) cfg.L = g["L"].get<double>();
    if (cfg.d < 1 || cfg.d > 4) errs.push_back("$.grid.d: must be 1..4");
    if (cfg.N < 2) errs.push_back("$.grid.N: must be >= 2");
    if (!(cfg.L > 0.0)) errs.push_back("$.grid.L: must be > 0");
  } else {
    errs.push_back("$.grid: required object");
  }

  if (j.contains("schedule") && j["schedule"].is_object()) {
    const auto& s = j["schedule"];
    check_keys(s, {"g", "m", "a"}, "$.schedule", errs);
    cfg.schedule.g = s.contains("g") ? parse_seq(s["g"], "$.schedule.g", errs) : CoeffSequence();
    cfg.schedule.m = s.contains("m") ? parse_seq(s["m"], "$.schedule.m", errs) : CoeffSequence();
    cfg.schedule.a = s.contains("a") ? parse_seq(s["a"], "$.schedule.a", errs) : CoeffSequence();
  }

  if (j.contains("n_list")) {
    cfg.n_list = j["n_list"].get<std::vector<int>>();
    for (int n : cfg.n_list)
      if (n < 1) errs.push_back("$.n_list: entries must be positive");
  }

  if (j.contains("sampler") && j["sampler"].is_object()) {
    const auto& s = j["sampler"];
    check_keys(s, {"sweeps", "burn_in", "thinning", "proposal_width", "seed"}, "$.sampler",
               errs);
    if (s.contains("sweeps")) cfg.sweeps = s["sweeps"].get<int>();
    if (s.contains("burn_in")) cfg.burn_in = s["burn_in"].get<int>();
    if (s.contains("thinning")) cfg.thinning = s["thinning"].get<int>();
    if (s.contains("proposal_width")) cfg.proposal_width = s["proposal_width"].get<double>();
    if (s.contains("seed"))
      cfg.seed = s["seed"].get<std::uint64_t>();
    else
      errs.push_back("$.sampler.seed: required (no implicit entropy)");
    if (cfg.burn_in >= cfg.sweeps) errs.push_back("$.sampler.burn_in: must be below sweeps");
    if (!(cfg.proposal_width > 0.0)) errs.push_back("$.sampler.proposal_width: must be > 0");
    if (cfg.thinning < 1) errs.push_back("$.sampler.thinning: must be >= 1");
  } else {
    errs.push_back("$.sampler: required object (must carry the seed)");
  }

  if (j.contains("experiment") && j["experiment"].is_string()) {
    cfg.experiment = j["experiment"].get<std::string>();
    if (!kExperiments.count(cfg.experiment))
      errs.push_back("$.experiment: unknown experiment '" + cfg.experiment + "'");
  } else {
    errs.push_back("$.experiment: required string");
  }

  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();

  if (j.contains("shapes") && j["shapes"].is_array()) {
    int k = 0;
    for (const auto& sj : j["shapes"]) {
      cfg.shapes.push_back(parse_shape(sj, "$.shapes[" + std::to_string(k) + "]", errs));
      ++k;
    }
  }

  // shape validity on the configured grid
  if (errs.empty()) {
    try {
      Grid grid(cfg.d, cfg.N, cfg.L);
      for (const auto& s : cfg.shapes) build_shape(grid, s);
    } catch (const std::exception& e) {
      errs.push_back(std::string("$.shapes: ") + e.what());
    }
  }

  if (!errs.empty()) throw ConfigError(std::move(errs));
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file: " + path});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string canonical_config(const RunConfig& cfg) {
  json j;
  j["grid"] = {{"d", cfg.d}, {"N", cfg.N}, {"L", cfg.L}};
  auto seq = [](const CoeffSequence& s) {
    json out;
    if (s.tabulated()) {
      // tabulated sequences round-trip through their visible values
      out["tabulated"] = true;
    } else {
      out["base"] = s.base();
      out["exponent"] = s.exponent();
    }
    return out;
  };
  j["schedule"] = {{"g", seq(cfg.schedule.g)}, {"m", seq(cfg.schedule.m)},
                   {"a", seq(cfg.schedule.a)}};
  j["n_list"] = cfg.n_list;
  j["sampler"] = {{"sweeps", cfg.sweeps},
                  {"burn_in", cfg.burn_in},
                  {"thinning", cfg.thinning},
                  {"proposal_width", cfg.proposal_width},
                  {"seed", cfg.seed}};
  j["experiment"] = cfg.experiment;
  json shapes = json::array();
  for (const auto& s : cfg.shapes) {
    json sj = {{"name", s.name}, {"kind", s.kind}};
    if (s.kind == "gaussian-bump") {
      sj["center"] = s.center;
      sj["width"] = s.width;
      sj["amplitude"] = s.amplitude;
    } else if (s.kind == "indicator") {
      sj["lo"] = s.lo;
      sj["hi"] = s.hi;
    } else {
      sj["value"] = s.value;
    }
    shapes.push_back(sj);
  }
  j["shapes"] = shapes;
  return j.dump();  // nlohmann keeps object keys sorted, so this is canonical
}

std::uint64_t config_hash(const RunConfig& cfg) {
  // FNV-1a over the canonical serialization
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_config(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Field build_shape(const Grid& grid, const ShapeSpec& spec) {
  if (spec.kind == "gaussian-bump")
    return gaussian_bump(grid, spec.center, spec.width, spec.amplitude);
  if (spec.kind == "indicator") return indicator_box(grid, spec.lo, spec.hi);
  if (spec.kind == "constant") return constant_field(grid, spec.value);
  throw std::invalid_argument("build_shape: unknown kind '" + spec.kind + "'");
}

}  // namespace phi4
