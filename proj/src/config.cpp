#include "csl/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace csl::cli {

namespace pt = boost::property_tree;

std::string num(double v) { return fmt::format("{:.17g}", v); }

namespace {

// flat view: section -> key -> raw value; values are strings (INI) or JSON scalars
using Flat = std::map<std::string, std::map<std::string, std::string>>;

double to_d(const std::string& sec, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("[{}] {}: '{}' is not a number", sec, key, v));
  }
}

long long to_i(const std::string& sec, const std::string& key, const std::string& v) {
  double d = to_d(sec, key, v);
  if (d != std::floor(d)) throw ConfigError(fmt::format("[{}] {}: '{}' is not an integer", sec, key, v));
  return static_cast<long long>(d);
}

bool to_b(const std::string& sec, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("[{}] {}: '{}' is not a boolean", sec, key, v));
}

RunConfig build(const Flat& f) {
  RunConfig c = default_config();
  using Setter = std::function<void(RunConfig&, const std::string&)>;
  struct Key {
    std::string sec, key;
  };
  std::optional<double> k_star_mpc, eta0, eta_e, eta_r, lambda_si;
  std::optional<std::string> preset;
  bool units_changed = false;
  std::map<std::string, std::map<std::string, Setter>> table;
  auto D = [&](const char* s, const char* k, std::function<void(RunConfig&, double)> fn) {
    table[s][k] = [=](RunConfig& rc, const std::string& v) { fn(rc, to_d(s, k, v)); };
  };
  auto N = [&](const char* s, const char* k, std::function<void(RunConfig&, long long)> fn) {
    table[s][k] = [=](RunConfig& rc, const std::string& v) { fn(rc, to_i(s, k, v)); };
  };
  auto B = [&](const char* s, const char* k, std::function<void(RunConfig&, bool)> fn) {
    table[s][k] = [=](RunConfig& rc, const std::string& v) { fn(rc, to_b(s, k, v)); };
  };
  auto S = [&](const char* s, const char* k, std::function<void(RunConfig&, const std::string&)> fn) {
    table[s][k] = fn;
  };
  S("cosmo", "preset", [&](RunConfig&, const std::string& v) { preset = v; });
  D("cosmo", "h_inf", [](RunConfig& r, double v) { r.cosmo.h_inf = v; });
  D("cosmo", "eps_inf", [](RunConfig& r, double v) { r.cosmo.eps_inf = v; });
  D("cosmo", "eps2", [](RunConfig& r, double v) { r.cosmo.eps2 = v; });
  D("cosmo", "n_star", [](RunConfig& r, double v) { r.cosmo.n_star = v; });
  D("cosmo", "k_star_mpc", [&](RunConfig&, double v) { k_star_mpc = v; });
  D("cosmo", "radiation_expansion", [](RunConfig& r, double v) { r.cosmo.radiation_expansion = v; });
  D("cosmo", "eta0", [&](RunConfig&, double v) { eta0 = v; });
  D("cosmo", "eta_e", [&](RunConfig&, double v) { eta_e = v; });
  D("cosmo", "eta_r", [&](RunConfig&, double v) { eta_r = v; });
  D("csl", "lambda", [&](RunConfig&, double v) { lambda_si = v; });
  D("csl", "r_c", [](RunConfig& r, double v) { r.csl.r_c_planck = v; });
  D("csl", "m0", [](RunConfig& r, double v) { r.csl.m0_planck = v; });
  D("csl", "lambda_grw", [](RunConfig& r, double v) { r.csl.lambda_grw_si = v; });
  D("units", "planck_time_seconds", [&](RunConfig& r, double v) {
    r.units.planck_time_seconds = v;
    r.units.planck_length_meters = v * units::kSpeedOfLight;
    units_changed = true;
  });
  D("units", "mpc_in_planck_inverse_mass", [&](RunConfig& r, double v) {
    r.units.mpc_in_planck_inverse_mass = v;
    units_changed = true;
  });
  D("units", "nucleon_mass_planck", [&](RunConfig& r, double v) {
    r.units.nucleon_mass_planck = v;
    units_changed = true;
  });
  D("quad", "q_min", [](RunConfig& r, double v) { r.quad.q_min = v; });
  D("quad", "q_max", [](RunConfig& r, double v) { r.quad.q_max = v; });
  N("quad", "q_points", [](RunConfig& r, long long v) { r.quad.q_points = static_cast<int>(v); });
  N("quad", "p_decades", [](RunConfig& r, long long v) { r.quad.p_decades = static_cast<int>(v); });
  N("quad", "points_per_decade", [](RunConfig& r, long long v) { r.quad.points_per_decade = static_cast<int>(v); });
  N("quad", "costheta_order", [](RunConfig& r, long long v) { r.quad.costheta_order = static_cast<int>(v); });
  N("quad", "eta_points_per_decade",
    [](RunConfig& r, long long v) { r.quad.eta_points_per_decade = static_cast<int>(v); });
  D("quad", "rel_tol", [](RunConfig& r, double v) { r.quad.rel_tol = v; });
  D("quad", "gaussian_cutoff", [](RunConfig& r, double v) { r.quad.gaussian_cutoff = v; });
  N("quad", "max_levels", [](RunConfig& r, long long v) { r.quad.max_levels = static_cast<int>(v); });
  S("quad", "angular", [](RunConfig& r, const std::string& v) {
    if (v == "analytic") r.quad.angular = spectrum::Angular::Analytic;
    else if (v == "gauss") r.quad.angular = spectrum::Angular::GaussLegendre;
    else throw ConfigError("[quad] angular: expected analytic|gauss, got '" + v + "'");
  });
  B("quad", "full_window", [](RunConfig& r, bool v) { r.quad.full_window = v; });
  N("quad", "leading_terms", [](RunConfig& r, long long v) {
    if (v != 2 && v != 4) throw ConfigError("[quad] leading_terms: expected 2 or 4");
    r.quad.leading_terms = v == 2 ? kernels::LeadingTerms::Two : kernels::LeadingTerms::Four;
  });
  B("quad", "linear_leading", [](RunConfig& r, bool v) { r.quad.linear_leading = v; });
  D("bound", "observational_error", [](RunConfig& r, double v) { r.bound.observational_error = v; });
  D("bound", "reference_bound", [](RunConfig& r, double v) { r.bound.reference_bound = v; });
  N("sim", "dim", [](RunConfig& r, long long v) { r.sim.dim = static_cast<int>(v); });
  D("sim", "omega", [](RunConfig& r, double v) { r.sim.omega = v; });
  D("sim", "lambda_eff", [](RunConfig& r, double v) { r.sim.lambda_eff = v; });
  S("sim", "collapse_op", [](RunConfig& r, const std::string& v) { r.sim.collapse_op = v; });
  N("sim", "ntraj", [](RunConfig& r, long long v) { r.sim.ntraj = static_cast<int>(v); });
  N("sim", "seed", [](RunConfig& r, long long v) { r.sim.seed = static_cast<std::uint64_t>(v); });
  S("run", "era", [](RunConfig& r, const std::string& v) { r.run.era = v; });
  S("run", "variant", [](RunConfig& r, const std::string& v) { r.run.variant = v; });
  D("sim", "t", [](RunConfig& r, double v) { r.sim.t = v; });
  D("sim", "dt", [](RunConfig& r, double v) { r.sim.dt = v; });

  for (const auto& [sec, kv] : f) {
    auto st = table.find(sec);
    if (st == table.end()) throw ConfigError(fmt::format("unknown section [{}]", sec));
    for (const auto& [k, v] : kv) {
      auto it = st->second.find(k);
      if (it == st->second.end()) throw ConfigError(fmt::format("[{}] unknown key '{}'", sec, k));
      it->second(c, v);
    }
  }

  if (units_changed) {
    try {
      c.units.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("[units] ") + e.what());
    }
  }
  // background: preset, then the e-fold chain, then explicit overrides
  if (preset) c.preset = *preset;
  if (c.preset != "paper-main" && c.preset != "paper-sm-e")
    throw ConfigError("[cosmo] preset: expected paper-main|paper-sm-e, got '" + c.preset + "'");
  if (k_star_mpc) {
    if (!(*k_star_mpc > 0)) throw ConfigError("[cosmo] k_star_mpc: must be > 0");
    c.cosmo.k_star = units::wavenumber_mpc_to_planck(*k_star_mpc, c.units);
  } else {
    c.cosmo.k_star = units::wavenumber_mpc_to_planck(0.05, c.units);
  }
  try {
    background::Times t = background::derive_times(c.cosmo.n_star, c.cosmo.k_star, c.cosmo.h_inf,
                                                   c.cosmo.radiation_expansion);
    c.cosmo.eta0 = t.eta0;
    c.cosmo.eta_e = t.eta_e;
    c.cosmo.eta_r = t.eta_r;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[cosmo] ") + e.what());
  }
  if (c.preset == "paper-sm-e") {
    c.cosmo.eta_e = -1e34;
    c.cosmo.eta_r = c.cosmo.eta_e * (2.0 - c.cosmo.radiation_expansion);
  }
  if (eta0) c.cosmo.eta0 = *eta0;
  if (eta_e) c.cosmo.eta_e = *eta_e;
  if (eta_r) c.cosmo.eta_r = *eta_r;
  if (!f.count("csl") || !f.at("csl").count("m0")) c.csl.m0_planck = c.units.nucleon_mass_planck;
  if (lambda_si) c.csl.lambda_si = *lambda_si;
  c.csl.sync(c.units);
  c.validate();
  return c;
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

void RunConfig::validate() const {
  try {
    cosmo.validate();
    csl.validate();
    quad.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!(bound.observational_error > 0) || !(bound.reference_bound > 0))
    throw ConfigError("[bound] values must be > 0");
  if (sim.dim < 3) throw ConfigError("[sim] dim: must be >= 3");
  if (!(sim.omega > 0)) throw ConfigError("[sim] omega: must be > 0");
  if (!(sim.lambda_eff >= 0)) throw ConfigError("[sim] lambda_eff: must be >= 0");
  if (sim.ntraj < 2) throw ConfigError("[sim] ntraj: must be >= 2");
  if (!(sim.t > 0) || !(sim.dt > 0)) throw ConfigError("[sim] t, dt: must be > 0");
  if (sim.collapse_op != "number" && sim.collapse_op != "position-sq" && sim.collapse_op != "hamiltonian")
    throw ConfigError("[sim] collapse_op: expected number|position-sq|hamiltonian");
  try {
    background::parse_era(run.era);
    kernels::parse_variant(run.variant);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[run] ") + e.what());
  }
}

RunConfig default_config() {
  RunConfig c;
  c.cosmo = background::preset("paper-main");
  c.csl = spectrum::CslParams::defaults();
  return c;
}

RunConfig parse_ini(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("parse error at line {}, column 1: {}", e.line(), e.message()));
  }
  Flat f;
  for (const auto& [sec, sub] : tree) {
    if (sub.empty() && !sub.data().empty())
      throw ConfigError(fmt::format("key '{}' outside any [section]", sec));
    auto& m = f[sec];
    for (const auto& [k, v] : sub) m[k] = v.data();
  }
  return build(f);
}

RunConfig parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(fmt::format("parse error at line {}, column {}: {}", line, col, e.what()));
  }
  if (!j.is_object()) throw ConfigError("top-level JSON value must be an object");
  if (j.contains("params_snapshot")) j = j["params_snapshot"];
  Flat f;
  for (auto& [sec, sub] : j.items()) {
    if (!sub.is_object()) throw ConfigError(fmt::format("section '{}' must be an object", sec));
    auto& m = f[sec];
    for (auto& [k, v] : sub.items()) {
      if (v.is_string()) m[k] = v.get<std::string>();
      else if (v.is_boolean()) m[k] = v.get<bool>() ? "true" : "false";
      else if (v.is_number_integer()) m[k] = std::to_string(v.get<long long>());
      else if (v.is_number_unsigned()) m[k] = std::to_string(v.get<unsigned long long>());
      else if (v.is_number()) m[k] = num(v.get<double>());
      else throw ConfigError(fmt::format("[{}] {}: unsupported value", sec, k));
    }
  }
  return build(f);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return json ? parse_json(text) : parse_ini(text);
}

nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  json j;
  j["cosmo"] = {{"preset", c.preset},
                {"h_inf", c.cosmo.h_inf},
                {"eps_inf", c.cosmo.eps_inf},
                {"eps2", c.cosmo.eps2},
                {"n_star", c.cosmo.n_star},
                {"k_star_mpc", units::wavenumber_planck_to_mpc(c.cosmo.k_star, c.units)},
                {"radiation_expansion", c.cosmo.radiation_expansion},
                {"eta0", c.cosmo.eta0},
                {"eta_e", c.cosmo.eta_e},
                {"eta_r", c.cosmo.eta_r}};
  j["csl"] = {{"lambda", c.csl.lambda_si},
              {"r_c", c.csl.r_c_planck},
              {"m0", c.csl.m0_planck},
              {"lambda_grw", c.csl.lambda_grw_si}};
  j["units"] = {{"planck_time_seconds", c.units.planck_time_seconds},
                {"mpc_in_planck_inverse_mass", c.units.mpc_in_planck_inverse_mass},
                {"nucleon_mass_planck", c.units.nucleon_mass_planck}};
  j["quad"] = {{"q_min", c.quad.q_min},
               {"q_max", c.quad.q_max},
               {"q_points", c.quad.q_points},
               {"p_decades", c.quad.p_decades},
               {"points_per_decade", c.quad.points_per_decade},
               {"costheta_order", c.quad.costheta_order},
               {"eta_points_per_decade", c.quad.eta_points_per_decade},
               {"rel_tol", c.quad.rel_tol},
               {"gaussian_cutoff", c.quad.gaussian_cutoff},
               {"max_levels", c.quad.max_levels},
               {"angular", c.quad.angular == spectrum::Angular::Analytic ? "analytic" : "gauss"},
               {"full_window", c.quad.full_window},
               {"leading_terms", c.quad.leading_terms == kernels::LeadingTerms::Two ? 2 : 4},
               {"linear_leading", c.quad.linear_leading}};
  j["bound"] = {{"observational_error", c.bound.observational_error}, {"reference_bound", c.bound.reference_bound}};
  j["sim"] = {{"dim", c.sim.dim},     {"omega", c.sim.omega}, {"lambda_eff", c.sim.lambda_eff},
              {"collapse_op", c.sim.collapse_op}, {"ntraj", c.sim.ntraj}, {"seed", c.sim.seed},
              {"t", c.sim.t},         {"dt", c.sim.dt}};
  j["run"] = {{"era", c.run.era}, {"variant", c.run.variant}};
  return j;
}

}  // namespace csl::cli
