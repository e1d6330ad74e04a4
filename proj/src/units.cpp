#include "csl/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace csl::units {

namespace {
constexpr double kMpcMeters = 3.0856775814913673e22;
constexpr double kGeVm = 1.973269804e-16;  // hbar c in GeV m

void need_finite_nonneg(double x, const char* what) {
  if (!std::isfinite(x) || x < 0) throw std::domain_error(std::string(what) + ": need finite value >= 0");
}
}  // namespace

PlanckConstants PlanckConstants::defaults() {
  PlanckConstants c{};
  c.planck_time_seconds = kHbarGeVs / kReducedPlanckMassGeV;
  c.planck_length_meters = c.planck_time_seconds * kSpeedOfLight;
  c.mpc_in_planck_inverse_mass = 5e-60 / 0.05;
  c.nucleon_mass_planck = kProtonMassGeV / kReducedPlanckMassGeV;
  return c;
}

void PlanckConstants::validate() const {
  for (double v : {planck_time_seconds, planck_length_meters, mpc_in_planck_inverse_mass, nucleon_mass_planck})
    if (!(v > 0) || !std::isfinite(v)) throw std::domain_error("PlanckConstants: fields must be positive");
  if (std::fabs(planck_time_seconds * kSpeedOfLight / planck_length_meters - 1.0) > 1e-12)
    throw std::domain_error("PlanckConstants: t_P c != l_P");
}

const PlanckConstants& constants() {
  static const PlanckConstants c = PlanckConstants::defaults();
  return c;
}

double mpc_inverse_codata() { return kGeVm / kMpcMeters / kReducedPlanckMassGeV; }

double rate_si_to_planck(double rate, const PlanckConstants& c) {
  need_finite_nonneg(rate, "rate_si_to_planck");
  return rate * c.planck_time_seconds;
}
double rate_planck_to_si(double rate, const PlanckConstants& c) {
  need_finite_nonneg(rate, "rate_planck_to_si");
  return rate / c.planck_time_seconds;
}
double length_si_to_planck(double length, const PlanckConstants& c) {
  need_finite_nonneg(length, "length_si_to_planck");
  return length / c.planck_length_meters;
}
double length_planck_to_si(double length, const PlanckConstants& c) {
  need_finite_nonneg(length, "length_planck_to_si");
  return length * c.planck_length_meters;
}
double wavenumber_mpc_to_planck(double k, const PlanckConstants& c) {
  if (!std::isfinite(k) || k <= 0) throw std::domain_error("wavenumber_mpc_to_planck: need k > 0");
  return k * c.mpc_in_planck_inverse_mass;
}
double wavenumber_planck_to_mpc(double k, const PlanckConstants& c) {
  if (!std::isfinite(k) || k <= 0) throw std::domain_error("wavenumber_planck_to_mpc: need k > 0");
  return k / c.mpc_in_planck_inverse_mass;
}

}  // namespace csl::units
