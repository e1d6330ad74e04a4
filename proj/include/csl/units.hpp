// Reduced Planck units (hbar = c = 1, M_P^2 = 1/(8 pi G)) and the handful of
// SI <-> Planck conversions the cosmology needs.
#pragma once

namespace csl::units {

constexpr double kSpeedOfLight = 299792458.0;         // m/s
constexpr double kHbarGeVs = 6.582119569e-25;         // GeV s
constexpr double kReducedPlanckMassGeV = 2.435e18;    // GeV
constexpr double kProtonMassGeV = 0.93827208816;      // GeV
constexpr double kLambdaGRW = 1e-16;                  // 1/s

// r_C = 1e-7 m in 1/M_P: the precise value and the rounded one
constexpr double kRcDefault = 1.24e27;
constexpr double kRcMain = 1e27;

struct PlanckConstants {
  double planck_time_seconds;         // s per 1/M_P
  double planck_length_meters;        // m per 1/M_P
  double mpc_in_planck_inverse_mass;  // value of 1 Mpc^-1 in M_P
  double nucleon_mass_planck;         // m0 / M_P

  // hbar/(M_P c^2), l_P = c t_P; Mpc anchored on 0.05 Mpc^-1 <-> 5e-60 M_P
  static PlanckConstants defaults();
  void validate() const;
};

const PlanckConstants& constants();

// CODATA-based value of 1 Mpc^-1 in M_P (for comparison with the anchor)
double mpc_inverse_codata();

double rate_si_to_planck(double rate, const PlanckConstants& c = constants());
double rate_planck_to_si(double rate, const PlanckConstants& c = constants());
double length_si_to_planck(double length, const PlanckConstants& c = constants());
double length_planck_to_si(double length, const PlanckConstants& c = constants());
double wavenumber_mpc_to_planck(double k, const PlanckConstants& c = constants());
double wavenumber_planck_to_mpc(double k, const PlanckConstants& c = constants());

}  // namespace csl::units
