// Standard power spectrum, closed-form CSL corrections, the full nested
// quadrature of the correction integrals, and the collapse-rate bound.
//
// The per-log-q correction computed by quadrature is
//   dP(q) = 4 pi q^3 C int deta'/a^4 int 2 pi p^2 dp int dcos
//           exp(-r_C^2 |p+q|^2 / a^2) K(q;p)
// with C = -lambda r_C^3/(8 eps m0^2 a_e^2 pi^{9/2}) (inflation) or
// -lambda r_C^3/(48 m0^2 a_r^2 pi^{9/2}) (radiation).  For the linearised
// operator: dP(q) = 4 pi q^3 C_lin int deta'/a^4 exp(-r_C^2 q^2/a^2) F_lin,
// C_lin = -lambda r_C^3/(2 m0^2 pi^{3/2} eps a_e^2).
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "csl/background.hpp"
#include "csl/kernels.hpp"
#include "csl/units.hpp"
#include "csl/xnum.hpp"

namespace csl::spectrum {

using background::CosmoParams;
using background::EraTag;
using kernels::Variant;

struct CslParams {
  double lambda_si = 1e-16;
  double lambda_planck = 0;  // derived
  double r_c_planck = 1.24e27;
  double m0_planck = 0;      // derived from the nucleon mass unless set
  double lambda_grw_si = 1e-16;

  static CslParams defaults();
  // recompute lambda_planck from lambda_si
  void sync(const units::PlanckConstants& pc = units::constants());
  void validate() const;
};

enum class Angular { Analytic, GaussLegendre };

struct QuadratureConfig {
  double q_min = 2e-62;  // M_P
  double q_max = 2e-58;
  int q_points = 5;
  int p_decades = 6;
  int points_per_decade = 16;       // p nodes per decade (GL panels of 8)
  int costheta_order = 16;          // only for Angular::GaussLegendre
  int eta_points_per_decade = 16;
  double rel_tol = 1e-3;
  double gaussian_cutoff = 36.0;    // exponent at which the Gaussian is truncated
  int max_levels = 5;
  Angular angular = Angular::Analytic;
  bool full_window = false;         // exact radiation kernel: drop |p eta'| < 1
  kernels::LeadingTerms leading_terms = kernels::LeadingTerms::Four;
  bool linear_leading = false;      // linearised operator: leading-order F

  void validate() const;
};

enum class Method { ClosedForm, Quadrature };

struct SpectrumResult {
  std::vector<double> k_grid;
  std::vector<double> p_standard;
  std::vector<xreal> delta_p;
  std::vector<double> rel_err;
  Method method = Method::Quadrature;
  Variant kernel_variant = Variant::LeadingQuadratic;
  EraTag era = EraTag::Inflation;
  double error_estimate = 0;  // max relative refinement difference over the grid
  int levels_used = 0;
  std::vector<std::string> notes;
  CosmoParams cosmo;
  CslParams csl;
  QuadratureConfig quad;
};

struct NonConvergence : std::runtime_error {
  SpectrumResult partial;
  NonConvergence(const std::string& m, SpectrumResult r) : std::runtime_error(m), partial(std::move(r)) {}
};

// (c_s^2/(2 eps)) (k^3/(2 pi^2)) |v|^2/a^2 with the era's mode
double power_spectrum_standard(double k, double eta, EraTag era, const CosmoParams& p);

double delta_p_inflation_closed(const CosmoParams& p, const CslParams& c);
double delta_p_radiation_closed(const CosmoParams& p, const CslParams& c);
// eps^2 lambda H^5/(m0^2 q^8 r_C^4); with_integral_factor multiplies by the
// 135/4 that the eta' integral actually produces
xreal delta_p_linear_closed(double q, const CosmoParams& p, const CslParams& c, bool with_integral_factor = false);

// per-log-q correction at a single q, one refinement level
xreal delta_p_at(double q, EraTag era, Variant variant, const CosmoParams& p, const CslParams& c,
                 const QuadratureConfig& qc, int level);

SpectrumResult delta_r2_numeric(EraTag era, Variant variant, const CosmoParams& p, const CslParams& c,
                                const QuadratureConfig& qc);

double lambda_bound(double delta_p_per_lambda_grw, double observational_error, double lambda_grw = 1e-16);

}  // namespace csl::spectrum
