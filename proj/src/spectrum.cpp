#include "csl/spectrum.hpp"

#include <tbb/parallel_for.h>

#include <cmath>
#include <fmt/format.h>

#include "csl/modes.hpp"
#include "csl/quadrature.hpp"
#include "csl/units.hpp"

namespace csl::spectrum {

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kSqrt3 = std::sqrt(3.0);

// oscillation cap beyond which the full-window radiation integral is refused
constexpr double kMaxPhase = 1e4;
}  // namespace

CslParams CslParams::defaults() {
  CslParams c;
  c.m0_planck = units::constants().nucleon_mass_planck;
  c.sync();
  return c;
}

void CslParams::sync(const units::PlanckConstants& pc) { lambda_planck = units::rate_si_to_planck(lambda_si, pc); }

void CslParams::validate() const {
  auto bad = [](const std::string& m) { throw std::invalid_argument("csl: " + m); };
  if (!(lambda_si >= 0) || !std::isfinite(lambda_si)) bad("lambda must be finite and >= 0");
  if (!(r_c_planck > 0)) bad("r_c must be > 0");
  if (!(m0_planck > 0)) bad("m0 must be > 0");
  if (!(lambda_grw_si > 0)) bad("lambda_grw must be > 0");
  if (!(lambda_planck >= 0) || (lambda_si > 0 && !(lambda_planck > 0))) bad("lambda_planck not derived");
}

void QuadratureConfig::validate() const {
  auto bad = [](const std::string& m) { throw std::invalid_argument("quad: " + m); };
  if (!(q_min > 0 && q_max >= q_min)) bad("need 0 < q_min <= q_max");
  if (q_points < 1) bad("q_points must be >= 1");
  if (p_decades < 2 || points_per_decade < 2 || costheta_order < 2 || eta_points_per_decade < 2)
    bad("counts must be >= 2");
  if (!(rel_tol > 0 && rel_tol <= 0.1)) bad("rel_tol must lie in (0, 0.1]");
  if (!(gaussian_cutoff > 0)) bad("gaussian_cutoff must be > 0");
  if (max_levels < 2) bad("max_levels must be >= 2");
}

double power_spectrum_standard(double k, double eta, EraTag era, const CosmoParams& p) {
  background::Era e = era == EraTag::Inflation ? p.inflation() : background::Era::radiation();
  const double a = background::scale_factor(e, eta, p);
  modes::ModeState m = modes::mode(era, k, eta, p);
  const xreal kk(k);
  xreal v = xreal(e.sound_speed * e.sound_speed / (2.0 * e.eps)) * (kk * kk * kk / xreal(2.0 * kPi * kPi)) *
            m.v.norm() / (xreal(a) * xreal(a));
  return v.to_double();
}

double delta_p_inflation_closed(const CosmoParams& p, const CslParams& c) {
  const double h3 = p.h_inf * p.h_inf * p.h_inf;
  return -(17.0 / 36.0) * c.lambda_planck * h3 * std::log(p.eta_e / p.eta0) /
         (p.eps_inf * kPi * kPi * c.m0_planck * c.m0_planck);
}

double delta_p_radiation_closed(const CosmoParams& p, const CslParams& c) {
  const double h3 = p.h_inf * p.h_inf * p.h_inf, e3 = p.eps_inf * p.eps_inf * p.eps_inf;
  const double s = p.eta_r - 2.0 * p.eta_e;
  // eta_e^2/s^2 = 1/R^2 written out to keep the structure visible
  return 9.0 * c.lambda_planck * h3 * (p.eta_e * p.eta_e) / (2.0 * e3 * s * s * kPi * kPi * c.m0_planck * c.m0_planck) *
         std::log((2.0 * p.eta_e - p.eta_r) / p.eta_e);
}

xreal delta_p_linear_closed(double q, const CosmoParams& p, const CslParams& c, bool with_integral_factor) {
  if (!(q > 0)) throw std::domain_error("delta_p_linear_closed: need q > 0");
  xreal v = xreal(p.eps_inf * p.eps_inf * c.lambda_planck) * pow(xreal(p.h_inf), 5) /
            (xreal(c.m0_planck * c.m0_planck) * pow(xreal(q), 8) * pow(xreal(c.r_c_planck), 4));
  if (with_integral_factor) v *= xreal(135.0 / 4.0);
  return v;
}

double lambda_bound(double delta_p_per_lambda_grw, double observational_error, double lambda_grw) {
  if (!(delta_p_per_lambda_grw > 0) || !(observational_error > 0))
    throw std::domain_error("lambda_bound: inputs must be > 0");
  return lambda_grw * observational_error / delta_p_per_lambda_grw;
}

namespace {

struct TimeNode {
  double eta;
  double w;  // weight including d eta / du
};

// Panels in u = ln|eta| (inflation) or ln(eta - 2 eta_e) (radiation); every
// panel is split so that a phase advancing at rate `freq` moves by <= pi/mult.
std::vector<TimeNode> time_nodes(EraTag era, const CosmoParams& p, double u0, double u1, int ppd, int mult,
                                 double freq) {
  std::vector<TimeNode> out;
  if (!(u1 > u0)) return out;
  const double decades = (u1 - u0) / std::log(10.0);
  const int base = std::max(1, static_cast<int>(std::ceil(decades * ppd * mult / quad::kPanelOrder)));
  const double h = (u1 - u0) / base;
  auto eta_of = [&](double u) { return era == EraTag::Inflation ? -std::exp(u) : std::exp(u) + 2.0 * p.eta_e; };
  quad::Nodes nd;
  for (int k = 0; k < base; ++k) {
    const double a = u0 + k * h, b = a + h;
    const double dphi = freq * std::fabs(std::exp(b) - std::exp(a));
    const int sub = std::max(1, static_cast<int>(std::ceil(dphi * mult / kPi)));
    nd.clear();
    quad::append_panels(nd, a, b, sub);
    for (std::size_t i = 0; i < nd.size(); ++i) out.push_back({eta_of(nd.x[i]), nd.w[i] * std::exp(nd.x[i])});
  }
  return out;
}

struct Ctx {
  EraTag era;
  Variant variant;
  const CosmoParams* cp;
  const CslParams* cs;
  const QuadratureConfig* qc;
  background::Era bg;
  double eta_end;
  int mult;
};

// int 2 pi p^2 dp int dcos exp(-r_C^2|p+q|^2/a^2) K  at fixed eta'
xreal inner(const Ctx& c, double q, double eta) {
  const double a = background::scale_factor(c.bg, eta, *c.cp);
  const double sigma = a / c.cs->r_c_planck;
  const double st = std::sqrt(c.qc->gaussian_cutoff);
  double hi = q + st * sigma;
  double lo = q - st * sigma;
  const bool narrow = st * sigma < 0.5 * q;
  if (!narrow) lo = std::max(lo, q * std::pow(10.0, -c.qc->p_decades));
  const bool exact = c.variant == Variant::ExactQuadratic;
  if (exact && c.era == EraTag::Radiation && !c.qc->full_window) hi = std::min(hi, 1.0 / std::fabs(eta));

  quad::Nodes nd;
  if (narrow) {
    // nodes in u = (p - q)/sigma: sigma/q can be far below machine epsilon
    const int panels = std::max(2, 4 * c.mult * c.qc->points_per_decade / 16);
    const double u_hi = exact && hi < q + st * sigma ? (hi - q) / sigma : st;
    if (!(u_hi > -st)) return {};
    quad::append_panels(nd, -st, u_hi, panels);
  } else {
    if (!(hi > lo)) return {};
    const double dec = std::log10(hi / lo);
    const int panels = std::max(2, static_cast<int>(std::ceil(dec * c.qc->points_per_decade * c.mult / quad::kPanelOrder)));
    quad::append_panels(nd, std::log(lo), std::log(hi), panels);
  }

  xreal keff;
  if (!exact)
    keff = kernels::kernel_leading(c.era, q, q, eta, *c.cp, c.qc->leading_terms, kernels::LeadingForm::Effective).value;

  xreal sum;
  for (std::size_t i = 0; i < nd.size(); ++i) {
    const double p = narrow ? q + sigma * nd.x[i] : std::exp(nd.x[i]);
    const double jac = narrow ? sigma : p;
    const double u = narrow ? nd.x[i] : (p - q) / sigma;
    const double g = std::exp(-u * u);
    const double beta = 2.0 * (p / sigma) * (q / sigma);
    quad::Moments m = c.qc->angular == Angular::Analytic ? quad::angular_moments(beta)
                                                         : quad::angular_moments_gl(beta, c.qc->costheta_order);
    xreal f;
    if (exact) {
      kernels::CtPoly k = kernels::kernel_external_ctpoly(c.era, p, q, eta, c.eta_end, *c.cp);
      // K in powers of w = 1 + cos
      f = (k.a0 - k.a1 + k.a2) * m.m0 + (k.a1 - ldexp(k.a2, 1)) * m.m1 + k.a2 * m.m2;
    } else {
      f = keff * m.m0;
    }
    sum += xreal(nd.w[i] * jac * 2.0 * kPi * g) * xreal(p) * xreal(p) * f;
  }
  return sum;
}

xreal prefactor(EraTag era, Variant variant, const CosmoParams& p, const CslParams& c) {
  const double pi92 = std::pow(kPi, 4.5);
  const xreal r3 = pow(xreal(c.r_c_planck), 3);
  const xreal m2 = xreal(c.m0_planck * c.m0_planck);
  const double a_e = -1.0 / (p.h_inf * p.eta_e);
  if (variant == Variant::LinearizedAppE)
    return -(xreal(c.lambda_planck) * r3) / (xreal(2.0 * std::pow(kPi, 1.5) * p.eps_inf) * m2 * xreal(a_e) * xreal(a_e));
  if (era == EraTag::Inflation)
    return -(xreal(c.lambda_planck) * r3) / (xreal(8.0 * p.eps_inf * pi92) * m2 * xreal(a_e) * xreal(a_e));
  const double a_r = background::scale_factor(background::Era::radiation(), p.eta_r, p);
  return -(xreal(c.lambda_planck) * r3) / (xreal(48.0 * pi92) * m2 * xreal(a_r) * xreal(a_r));
}

}  // namespace

xreal delta_p_at(double q, EraTag era, Variant variant, const CosmoParams& p, const CslParams& c,
                 const QuadratureConfig& qc, int level) {
  if (!(q > 0)) throw std::domain_error("delta_p_at: need q > 0");
  if (variant == Variant::LinearizedAppE && era != EraTag::Inflation)
    throw std::invalid_argument("linearised kernel is defined for the inflationary era only");
  Ctx ctx{era, variant, &p, &c, &qc,
          era == EraTag::Inflation ? p.inflation() : background::Era::radiation(),
          era == EraTag::Inflation ? p.eta_e : p.eta_r, 1 << level};

  double u0, u1, freq = 0.0;
  if (era == EraTag::Inflation) {
    u0 = std::log(-p.eta_e);
    u1 = std::log(-p.eta0);
  } else {
    u0 = std::log(-p.eta_e);
    u1 = std::log(p.eta_r - 2.0 * p.eta_e);
  }
  if (variant == Variant::LinearizedAppE) {
    // exp(-r_C^2 q^2 H^2 eta^2) <= e^{-cutoff}
    u1 = std::min(u1, std::log(std::sqrt(qc.gaussian_cutoff) / (c.r_c_planck * q * p.h_inf)));
    if (!qc.linear_leading) freq = 2.0 * q;
  } else if (variant == Variant::ExactQuadratic) {
    freq = era == EraTag::Inflation ? 2.0 * q : 2.0 * q / kSqrt3;
    if (era == EraTag::Radiation && qc.full_window) {
      // largest p the Gaussian admits, at the latest time
      const double a_r = background::scale_factor(ctx.bg, p.eta_r, p);
      const double phase = (q + std::sqrt(qc.gaussian_cutoff) * a_r / c.r_c_planck) * p.eta_r;
      if (phase > kMaxPhase)
        throw std::runtime_error(fmt::format(
            "full-window radiation integral needs to resolve ~{:.1e} rad of oscillation; refused", phase));
    }
  }

  std::vector<TimeNode> tn = time_nodes(era, p, u0, u1, qc.eta_points_per_decade, ctx.mult, freq);
  std::vector<xreal> vals(tn.size());
  tbb::parallel_for(std::size_t(0), tn.size(), [&](std::size_t i) {
    const double eta = tn[i].eta;
    const double a = background::scale_factor(ctx.bg, eta, p);
    const xreal a4 = pow(xreal(a), 4);
    xreal j;
    if (variant == Variant::LinearizedAppE) {
      const double r = c.r_c_planck * q / a;
      j = xreal(std::exp(-r * r)) * kernels::kernel_linear(q, eta, p.eta_e, p, qc.linear_leading).value;
    } else {
      j = inner(ctx, q, eta);
    }
    vals[i] = xreal(tn[i].w) * j / a4;
  });
  xreal total;
  for (const xreal& v : vals) total += v;  // fixed order
  const xreal kq(q);
  return prefactor(era, variant, p, c) * xreal(4.0 * kPi) * kq * kq * kq * total;
}

SpectrumResult delta_r2_numeric(EraTag era, Variant variant, const CosmoParams& p, const CslParams& c,
                                const QuadratureConfig& qc) {
  p.validate();
  c.validate();
  qc.validate();
  SpectrumResult res;
  res.method = Method::Quadrature;
  res.kernel_variant = variant;
  res.era = era;
  res.cosmo = p;
  res.csl = c;
  res.quad = qc;
  const int n = qc.q_points;
  bool converged = true;
  for (int i = 0; i < n; ++i) {
    const double q = n == 1 ? qc.q_min : qc.q_min * std::pow(qc.q_max / qc.q_min, static_cast<double>(i) / (n - 1));
    xreal prev = delta_p_at(q, era, variant, p, c, qc, 0), cur = prev;
    double rel = HUGE_VAL;
    int lvl = 1;
    for (; lvl < qc.max_levels; ++lvl) {
      cur = delta_p_at(q, era, variant, p, c, qc, lvl);
      if (cur.is_zero() && prev.is_zero()) {
        rel = 0;
      } else {
        rel = cur.is_zero() ? HUGE_VAL : rel_diff(prev, cur);
      }
      prev = cur;
      if (rel <= qc.rel_tol) break;
    }
    if (lvl == qc.max_levels) {
      lvl = qc.max_levels - 1;
      converged = false;
    }
    res.levels_used = std::max(res.levels_used, lvl + 1);
    res.k_grid.push_back(q);
    res.p_standard.push_back(power_spectrum_standard(q, p.eta_e, EraTag::Inflation, p));
    res.delta_p.push_back(cur);
    res.rel_err.push_back(rel);
    res.error_estimate = std::max(res.error_estimate, rel);
  }
  if (era == EraTag::Radiation && variant == Variant::ExactQuadratic && !qc.full_window)
    res.notes.push_back("exact radiation kernel restricted to |p eta'| < 1");
  if (variant == Variant::ExactQuadratic)
    res.notes.push_back(fmt::format("infrared cutoff p >= q 1e-{}", qc.p_decades));
  if (!converged)
    throw NonConvergence(fmt::format("quadrature did not reach rel_tol {} in {} levels (estimate {:.3e})", qc.rel_tol,
                                     qc.max_levels, res.error_estimate),
                         res);
  return res;
}

}  // namespace csl::spectrum
