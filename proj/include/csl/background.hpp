// FLRW background: de Sitter inflation followed directly by radiation
// domination, abutting at eta_e.  Conformal time throughout, M_P = 1.
#pragma once

#include <string>

namespace csl::background {

enum class EraTag { Inflation, Radiation };

struct Era {
  EraTag tag;
  double sound_speed;
  double eps;

  static Era inflation(double eps_inf) { return {EraTag::Inflation, 1.0, eps_inf}; }
  static Era radiation();  // eps = 2, c_s = 1/sqrt(3)
};

const char* era_name(EraTag t);
EraTag parse_era(const std::string& s);  // "inflation"/"inf", "radiation"/"rad"

struct Times {
  double eta0;
  double eta_e;
  double eta_r;
};

struct CosmoParams {
  double h_inf = 1e-5;
  double eps_inf = 0.005;
  double eps2 = 0.0;
  double eta0 = 0;
  double eta_e = 0;
  double eta_r = 0;
  double n_star = 60;
  double k_star = 5e-60;
  double radiation_expansion = 3e26;

  void validate() const;
  Era inflation() const { return Era::inflation(eps_inf); }
};

// eta0 = -1/k*, a(N*) = k*/H, a_e = a(N*) e^{N*}, eta_e = -1/(H a_e),
// eta_r from a(eta_r)/a(eta_e) = radiation_expansion.
Times derive_times(double n_star, double k_star, double h_inf, double radiation_expansion);

// "paper-main": times from the e-fold chain; "paper-sm-e": eta_e = -1e34 with
// eta_r fixed by the same expansion factor (3e60 at the default).
CosmoParams preset(const std::string& name);

double scale_factor(const Era& era, double eta, const CosmoParams& p);
double z_factor(const Era& era, double eta, const CosmoParams& p);
// conformal Hubble rate a'/a and a''/a
double conformal_hubble(const Era& era, double eta, const CosmoParams& p);
double a_ddot_over_a(const Era& era, double eta, const CosmoParams& p);

}  // namespace csl::background
