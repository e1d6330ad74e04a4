#include "csl/background.hpp"

#include <cmath>
#include <stdexcept>

namespace csl::background {

Era Era::radiation() { return {EraTag::Radiation, 1.0 / std::sqrt(3.0), 2.0}; }

const char* era_name(EraTag t) { return t == EraTag::Inflation ? "inflation" : "radiation"; }

EraTag parse_era(const std::string& s) {
  if (s == "inflation" || s == "inf") return EraTag::Inflation;
  if (s == "radiation" || s == "rad") return EraTag::Radiation;
  throw std::invalid_argument("unknown era '" + s + "'");
}

void CosmoParams::validate() const {
  auto bad = [](const std::string& m) { throw std::invalid_argument("cosmo: " + m); };
  if (!(h_inf > 0) || !std::isfinite(h_inf)) bad("h_inf must be > 0");
  if (!(eps_inf > 0) || !(eps_inf < 0.1)) bad("eps_inf must lie in (0, 0.1)");
  if (!std::isfinite(eps2)) bad("eps2 must be finite");
  if (!(k_star > 0)) bad("k_star must be > 0");
  if (!(eta0 < eta_e && eta_e < 0 && 0 < eta_r)) bad("need eta0 < eta_e < 0 < eta_r");
}

Times derive_times(double n_star, double k_star, double h_inf, double radiation_expansion) {
  if (!(n_star >= 50 && n_star <= 60)) throw std::domain_error("derive_times: n_star outside [50, 60]");
  if (!(k_star > 0 && h_inf > 0 && radiation_expansion > 1))
    throw std::domain_error("derive_times: need k_star, h_inf > 0 and expansion > 1");
  Times t{};
  t.eta0 = -1.0 / k_star;
  const double a_star = k_star / h_inf;
  const double a_e = a_star * std::exp(n_star);
  t.eta_e = -1.0 / (h_inf * a_e);
  // (eta_r - 2 eta_e)/(-eta_e) = R
  t.eta_r = t.eta_e * (2.0 - radiation_expansion);
  return t;
}

CosmoParams preset(const std::string& name) {
  CosmoParams p;
  Times t = derive_times(p.n_star, p.k_star, p.h_inf, p.radiation_expansion);
  p.eta0 = t.eta0;
  p.eta_e = t.eta_e;
  p.eta_r = t.eta_r;
  if (name == "paper-main") return p;
  if (name == "paper-sm-e") {
    p.eta_e = -1e34;
    p.eta_r = p.eta_e * (2.0 - p.radiation_expansion);
    return p;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

namespace {
void check_window(const Era& era, double eta, const CosmoParams& p) {
  if (!std::isfinite(eta) || eta == 0.0) throw std::domain_error("background: eta must be finite and nonzero");
  if (era.tag == EraTag::Inflation) {
    if (eta < p.eta0 || eta > p.eta_e) throw std::domain_error("background: eta outside [eta0, eta_e]");
  } else if (eta < p.eta_e || eta > p.eta_r) {
    throw std::domain_error("background: eta outside [eta_e, eta_r]");
  }
}
}  // namespace

double scale_factor(const Era& era, double eta, const CosmoParams& p) {
  check_window(era, eta, p);
  if (era.tag == EraTag::Inflation) return -1.0 / (p.h_inf * eta);
  return (eta - 2.0 * p.eta_e) / (p.h_inf * p.eta_e * p.eta_e);
}

double z_factor(const Era& era, double eta, const CosmoParams& p) {
  return scale_factor(era, eta, p) * std::sqrt(2.0 * era.eps) / era.sound_speed;
}

double conformal_hubble(const Era& era, double eta, const CosmoParams& p) {
  check_window(era, eta, p);
  if (era.tag == EraTag::Inflation) return -1.0 / eta;
  return 1.0 / (eta - 2.0 * p.eta_e);
}

double a_ddot_over_a(const Era& era, double eta, const CosmoParams& p) {
  check_window(era, eta, p);
  if (era.tag == EraTag::Inflation) return 2.0 / (eta * eta);
  return 0.0;
}

}  // namespace csl::background
