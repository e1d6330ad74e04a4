// Run configuration: sectioned INI (or JSON) with strict key checking.
//
//   [cosmo] preset h_inf eps_inf eps2 n_star k_star_mpc radiation_expansion eta0 eta_e eta_r
//   [csl]   lambda r_c m0 lambda_grw
//   [units] planck_time_seconds mpc_in_planck_inverse_mass nucleon_mass_planck
//   [quad]  q_min q_max q_points p_decades points_per_decade costheta_order
//           eta_points_per_decade rel_tol gaussian_cutoff max_levels angular
//           full_window leading_terms linear_leading
//   [bound] observational_error reference_bound
//   [sim]   dim omega lambda_eff collapse_op ntraj seed t dt
//   [run]   era variant   (spectrum command; recorded in result snapshots)
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "csl/background.hpp"
#include "csl/spectrum.hpp"
#include "csl/units.hpp"
#include "json.hpp"

namespace csl::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundConfig {
  double observational_error = 1e-11;
  double reference_bound = 1e-10;  // s^-1, comparison bound for the headline
};

struct SimConfig {
  int dim = 8;
  double omega = 1.0;
  double lambda_eff = 0.05;
  std::string collapse_op = "position-sq";
  int ntraj = 10000;
  std::uint64_t seed = 20240611;
  double t = 1.0;
  double dt = 0.01;
};

struct RunOptions {
  std::string era = "inflation";
  std::string variant = "leading";
};

struct RunConfig {
  std::string preset = "paper-main";
  units::PlanckConstants units = units::PlanckConstants::defaults();
  background::CosmoParams cosmo;
  spectrum::CslParams csl;
  spectrum::QuadratureConfig quad;
  BoundConfig bound;
  SimConfig sim;
  RunOptions run;

  void validate() const;
};

RunConfig default_config();
RunConfig load_config(const std::string& path);          // .json -> JSON, otherwise INI
RunConfig parse_ini(const std::string& text);
// also accepts a result file, reading its embedded params_snapshot
RunConfig parse_json(const std::string& text);
nlohmann::json to_json(const RunConfig& c);               // round-trips through parse_json

// 17-significant-digit decimal string
std::string num(double v);

}  // namespace csl::cli
