#include "csl/reproduce.hpp"

#include <fmt/format.h>

#include <cmath>

#include "csl/spectrum.hpp"

namespace csl::cli {

bool ReproReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

std::string ReproReport::table() const {
  std::string out = fmt::format("{:<34} {:>14} {:>22}  {}\n", "quantity", "value", "accepted |value|", "status");
  for (const auto& r : rows) {
    const std::string range = (r.lo == 0 && r.hi == 0) ? "-" : fmt::format("[{:.0e}, {:.0e}]", r.lo, r.hi);
    const std::string status = (r.lo == 0 && r.hi == 0) ? "info" : (r.pass ? "PASS" : "FAIL");
    out += fmt::format("{:<34} {:>14.4e} {:>22}  {}", r.name, r.value, range, status);
    if (!r.detail.empty()) out += "  (" + r.detail + ")";
    out += "\n";
  }
  return out;
}

namespace {

ReproRow check(std::string name, double v, double lo, double hi, std::string detail = {}) {
  const double m = std::fabs(v);
  return {std::move(name), v, lo, hi, std::isfinite(m) && m >= lo && m <= hi, std::move(detail)};
}

ReproRow info(std::string name, double v, std::string detail = {}) {
  return {std::move(name), v, 0, 0, true, std::move(detail)};
}

}  // namespace

ReproReport run_reproduce(const RunConfig& cfg, bool with_quadrature) {
  using namespace spectrum;
  ReproReport rep;
  // corrections are quoted per lambda_GRW
  CslParams c = cfg.csl;
  c.lambda_si = c.lambda_grw_si;
  c.sync(cfg.units);

  const double dp_inf = delta_p_inflation_closed(cfg.cosmo, c);
  const double dp_rad = delta_p_radiation_closed(cfg.cosmo, c);
  rep.rows.push_back(check("inflation dP (closed form)", dp_inf, 1e-35, 1e-33, "per lambda_GRW"));
  rep.rows.push_back(check("radiation dP (closed form)", dp_rad, 1e-82, 1e-80, "per lambda_GRW"));

  const double lam = lambda_bound(std::fabs(dp_inf), cfg.bound.observational_error, c.lambda_grw_si);
  rep.rows.push_back(check("lambda_max [s^-1]", lam, 1e6, 1e8,
                           fmt::format("observational error {:.0e}", cfg.bound.observational_error)));
  rep.rows.push_back(info("log10(lambda_max / reference)", std::log10(lam / cfg.bound.reference_bound),
                          fmt::format("reference {:.0e} s^-1", cfg.bound.reference_bound)));

  if (with_quadrature) {
    QuadratureConfig qc = cfg.quad;
    qc.q_points = 1;
    qc.q_min = qc.q_max = std::sqrt(cfg.quad.q_min * cfg.quad.q_max);
    for (EraTag era : {EraTag::Inflation, EraTag::Radiation}) {
      const SpectrumResult r = delta_r2_numeric(era, Variant::LeadingQuadratic, cfg.cosmo, c, qc);
      const double num = r.delta_p[0].to_double_sat();
      const double closed = era == EraTag::Inflation ? dp_inf : dp_rad;
      rep.rows.push_back(info(fmt::format("{} dP (leading quadrature)", background::era_name(era)), num,
                              fmt::format("q = {:.2e}, ratio to closed form {:.4f}, refinement {:.1e}", qc.q_min,
                                          num / closed, r.error_estimate)));
    }
  }
  return rep;
}

}  // namespace csl::cli
