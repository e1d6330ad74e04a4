// Acceptance checks, one PASS/FAIL line per criterion (sub-lines indented).
//   acceptance            run all
//   acceptance --only N   run criterion N; exit status reflects that criterion
#include <fmt/format.h>

#include <boost/multiprecision/mpfr.hpp>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "csl/config.hpp"
#include "csl/cslsim.hpp"
#include "csl/kernels.hpp"
#include "csl/kernels_generic.hpp"
#include "csl/modes.hpp"
#include "csl/spectrum.hpp"

using namespace csl;
using background::EraTag;

namespace {

using clk = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;  // sub-results
  void sub(bool ok, const std::string& s) {
    pass = pass && ok;
    lines.push_back(fmt::format("    [{}] {}", ok ? "PASS" : "FAIL", s));
  }
  void info(const std::string& s) { lines.push_back("    [info] " + s); }
};

const cli::RunConfig& cfg() {
  static const cli::RunConfig c = cli::default_config();
  return c;
}

spectrum::CslParams per_grw() {
  spectrum::CslParams c = cfg().csl;
  c.lambda_si = c.lambda_grw_si;
  c.sync(cfg().units);
  return c;
}

// ---- 1-3: headline numbers ----

Outcome c1() {
  Outcome o;
  const double v = spectrum::delta_p_inflation_closed(cfg().cosmo, per_grw());
  o.sub(std::fabs(v) >= 1e-35 && std::fabs(v) <= 1e-33,
        fmt::format("inflation dP per lambda_GRW = {:.4e}, accepted [1e-35, 1e-33]", v));
  return o;
}

Outcome c2() {
  Outcome o;
  const double v = spectrum::delta_p_radiation_closed(cfg().cosmo, per_grw());
  o.sub(std::fabs(v) >= 1e-82 && std::fabs(v) <= 1e-80,
        fmt::format("radiation dP per lambda_GRW = {:.4e}, accepted [1e-82, 1e-80]", v));
  return o;
}

Outcome c3() {
  Outcome o;
  const double dp = std::fabs(spectrum::delta_p_inflation_closed(cfg().cosmo, per_grw()));
  const double lam = spectrum::lambda_bound(dp, 1e-11);
  o.sub(lam >= 1e6 && lam <= 1e8, fmt::format("lambda_max = {:.4e} s^-1, accepted [1e6, 1e8]", lam));
  const double orders = std::log10(lam / 1e-10);
  o.sub(std::lround(orders) == 17, fmt::format("log10(lambda_max / 1e-10 s^-1) = {:.2f}, expected ~17", orders));
  return o;
}

// ---- 4: quadrature vs closed form ----

Outcome c4() {
  Outcome o;
  const auto c = per_grw();
  for (EraTag era : {EraTag::Inflation, EraTag::Radiation}) {
    const auto r = spectrum::delta_r2_numeric(era, kernels::Variant::LeadingQuadratic, cfg().cosmo, c, cfg().quad);
    const double closed = era == EraTag::Inflation ? spectrum::delta_p_inflation_closed(cfg().cosmo, c)
                                                   : spectrum::delta_p_radiation_closed(cfg().cosmo, c);
    double worst = 0;
    for (const xreal& v : r.delta_p) worst = std::max(worst, std::fabs(v.to_double() / closed - 1.0));
    o.sub(worst <= 0.05, fmt::format("{}: max |numeric/closed - 1| = {:.3e} over {} k (refinement {:.1e}), tol 5%",
                                     background::era_name(era), worst, r.k_grid.size(), r.error_estimate));
  }
  return o;
}

// ---- 5: exact vs leading asymptotics ----

Outcome c5() {
  Outcome o;
  const auto& p = cfg().cosmo;
  const double xs[] = {1e-3, 5e-4, 2.5e-4, 1e-4};
  for (EraTag era : {EraTag::Inflation, EraTag::Radiation}) {
    const bool inf = era == EraTag::Inflation;
    const double eta = inf ? 10.0 * p.eta_e : 0.5 * p.eta_r;
    const double end = inf ? p.eta_e : p.eta_r;
    std::vector<double> err;
    for (double x : xs) {
      const double q = inf ? x / -eta : x / p.eta_r;
      const xreal ex = kernels::kernel_symmetric(era, 0.7 * q, q, 0.3, eta, end, p);
      const xreal ld = kernels::kernel_leading(era, 0.7 * q, q, eta, p, kernels::LeadingTerms::Four,
                                               kernels::LeadingForm::Symmetrized)
                           .value;
      err.push_back(rel_diff(ex, ld));
    }
    const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
    o.sub(err[3] <= 0.01, fmt::format("{}: |F_sym/leading - 1| at q eta' = 1e-4 is {:.3e}, tol 1%",
                                      background::era_name(era), err[3]));
    o.sub(o1 >= 0.9 && o2 >= 0.9,
          fmt::format("{}: observed order in q eta' {:.3f}, {:.3f} (halving 1e-3 -> 2.5e-4), need >= 1",
                      background::era_name(era), o1, o2));
  }
  return o;
}

// ---- 6: mode invariants ----

using mp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

Outcome c6() {
  Outcome o;
  const auto& p = cfg().cosmo;
  const int n = 50;
  auto lg = [](double a, double b, int i, int n) { return a * std::pow(b / a, static_cast<double>(i) / (n - 1)); };

  // inflation: componentwise Wronskian of the production modes
  double w_inf = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double k = lg(1e-62, 1e-56, i, n);
      const double eta = -lg(-p.eta0, -p.eta_e, j, n);
      const auto w = modes::wronskian(modes::mode_inflation(k, eta)).to_complex();
      w_inf = std::max(w_inf, std::abs(w - std::complex<double>(0, 1)));
    }
  o.sub(w_inf <= 1e-10, fmt::format("inflation: max |W - i| = {:.2e} on 50x50 (k, eta) grid", w_inf));

  // radiation: the matched mode's Wronskian, evaluated at 300 digits (in double
  // the bilinear cancels by ~(k eta_e)^-4 at these k)
  mp::default_precision(300);
  double w_i = 0, w_6 = 0;
  const mp ee(p.eta_e), eps(p.eps_inf);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double k = lg(1e-62, 1e-56, i, n);
      const double eta = 2 * p.eta_e + lg(-p.eta_e, p.eta_r - 2 * p.eta_e, j, n);
      const auto m = kernels::generic::v_radiation<mp>(mp(k), mp(eta), ee, eps);
      // W = v v'* - v* v' = 2i Im(v v'*)
      const mp im = m.v.im * m.vd.re - m.v.re * m.vd.im;
      const double w = static_cast<double>(2 * im);
      w_i = std::max(w_i, std::fabs(w - 1.0));
      w_6 = std::max(w_6, std::fabs(w / (6.0 / p.eps_inf) - 1.0));
    }
  o.sub(w_i <= 1e-10, fmt::format("radiation: max |W - i| = {:.3e} on 50x50 grid (W/i = 6/eps_inf = {:g})", w_i,
                                  6.0 / p.eps_inf));
  o.info(fmt::format("radiation: max |W/(6i/eps_inf) - 1| = {:.2e} (constant Wronskian, non-unit normalisation)", w_6));

  // matching of R and R' at eta_e
  double mr = 0, mrd = 0;
  for (int i = 0; i < n; ++i) {
    const double k = lg(1e-30, 1e-2, i, n) / -p.eta_e;
    const auto a = modes::curvature_inflation(k, p.eta_e, p);
    const auto b = modes::curvature_radiation(k, p.eta_e, p);
    auto rd = [](const xcomplex& x, const xcomplex& y) {
      const xreal d = sqrt((x - y).norm()), s = sqrt(y.norm());
      return (d / s).to_double();
    };
    mr = std::max(mr, rd(a.r, b.r));
    mrd = std::max(mrd, rd(a.r_dot, b.r_dot));
  }
  o.sub(mr <= 1e-8 && mrd <= 1e-8,
        fmt::format("matching at eta_e, |k eta_e| in [1e-30, 1e-2]: max rel |dR| = {:.2e}, |dR'| = {:.2e}", mr, mrd));

  // ODE residuals, relative to the largest term
  double res_inf = 0, res_rad = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double k = lg(1e-62, 1e-56, i, n);
      {
        const double eta = -lg(-p.eta0, -p.eta_e, j, n);
        const auto s = modes::mode_inflation(k, eta);
        const xcomplex vdd = modes::v_ddot_inflation(k, eta);
        const xreal om2 = xreal(k) * xreal(k) - xreal(2.0) / (xreal(eta) * xreal(eta));
        const xcomplex r = vdd + s.v * om2;
        const xreal scale = std::max(sqrt(vdd.norm()), sqrt((s.v * om2).norm()));
        res_inf = std::max(res_inf, (sqrt(r.norm()) / scale).to_double());
      }
      {
        const double eta = 2 * p.eta_e + lg(-p.eta_e, p.eta_r - 2 * p.eta_e, j, n);
        const auto s = modes::mode_radiation(k, eta, p.eta_e, p.eps_inf);
        const xcomplex vdd = modes::v_ddot_radiation(k, eta, p.eta_e, p.eps_inf);
        const xreal om2 = xreal(k) * xreal(k) / xreal(3.0);
        const xcomplex r = vdd + s.v * om2;
        const xreal scale = std::max(sqrt(vdd.norm()), sqrt((s.v * om2).norm()));
        res_rad = std::max(res_rad, (sqrt(r.norm()) / scale).to_double());
      }
    }
  o.sub(res_inf <= 1e-8 && res_rad <= 1e-8,
        fmt::format("ODE residuals: inflation {:.2e}, radiation {:.2e} (relative)", res_inf, res_rad));
  return o;
}

// ---- 7: linear-operator contrast ----

Outcome c7() {
  Outcome o;
  const auto& p = cfg().cosmo;
  const auto c = per_grw();
  const xreal v = spectrum::delta_p_linear_closed(1e-60, p, c);
  o.sub(v > xreal(1e100), fmt::format("linear dP(q = 1e-60) = {} (> 1e100)", v.str(6)));
  double worst = 0;
  for (double q : {1e-62, 1e-61, 1e-60, 1e-59, 1e-58}) {
    const xreal r = spectrum::delta_p_linear_closed(q, p, c) / spectrum::delta_p_linear_closed(2 * q, p, c);
    worst = std::max(worst, std::fabs(r.to_double() / 256.0 - 1.0));
  }
  o.sub(worst <= 1e-12, fmt::format("q^-8 scaling: max |dP(q)/dP(2q)/256 - 1| = {:.1e}", worst));
  // quadratic operator: exact-kernel quadrature across four decades of k
  spectrum::QuadratureConfig qc = cfg().quad;
  qc.q_points = 3;
  const auto r = spectrum::delta_r2_numeric(EraTag::Inflation, kernels::Variant::ExactQuadratic, p, c, qc);
  double lo = HUGE_VAL, hi = 0;
  for (const xreal& x : r.delta_p) {
    lo = std::min(lo, x.to_double());
    hi = std::max(hi, x.to_double());
  }
  o.sub(lo > 0 && hi / lo <= 1.05,
        fmt::format("quadratic operator, exact kernel: dP in [{:.4e}, {:.4e}] over k = {:.0e}..{:.0e} (flat to {:.2f}%)",
                    lo, hi, qc.q_min, qc.q_max, 100 * (hi / lo - 1)));
  // linear kernel through the same quadrature
  qc.q_points = 1;
  qc.q_min = qc.q_max = 1e-60;
  const auto rl = spectrum::delta_r2_numeric(EraTag::Inflation, kernels::Variant::LinearizedAppE, p, c, qc);
  o.info(fmt::format("linear-kernel quadrature / closed form at q = 1e-60: {:.6f} (135/4 = 33.75)",
                     (rl.delta_p[0] / v).to_double()));
  return o;
}

// ---- 8: collapse machinery, three ways ----

Outcome c8() {
  Outcome o;
  using namespace csl::sim;
  const int dim = 8;
  // dephasing: H = 0, L = number
  {
    ToySystem s = make_oscillator(dim, 1.0, 0.3, CollapseKind::Number);
    s.hamiltonian = Mat::Zero(dim, dim);
    const Vec psi = coherent_state(dim, {0.9, 0.4});
    const Mat r0 = psi * psi.adjoint();
    const double t = 1.0;
    const Mat r = evolve_master(s, r0, {t}).back();
    double err = 0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        const double d = i - j;
        err = std::max(err, std::abs(r(i, j) - r0(i, j) * std::exp(-0.5 * s.gamma_eff * d * d * t)));
      }
    o.sub(err <= 1e-8, fmt::format("dephasing: master equation vs exact exponential, max |d rho| = {:.2e}", err));
  }
  // trajectories vs master equation
  {
    const ToySystem s = make_oscillator(dim, 1.0, 0.05, CollapseKind::PositionSq);
    const Vec psi = coherent_state(dim, {0.8, 0.3});
    const auto rows = compare_three_way(s, psi, 1.0, 0.005, 10000, 20240611,
                                        {{"L", s.collapse_op}, {"L^2", s.collapse_op * s.collapse_op}});
    for (const auto& r : rows) {
      const double z = std::fabs(r.ensemble.mean - r.master) / r.ensemble.stderr_;
      o.sub(z <= 3.0, fmt::format("ensemble (1e4 trajectories) vs master, O = {}: {:.6f} +- {:.6f} vs {:.6f} ({:.2f} SE)",
                                  r.observable, r.ensemble.mean, r.ensemble.stderr_, r.master, z));
    }
  }
  // perturbative formula vs master equation, L = H, O = x^2
  for (double regime : {0.002, 0.01}) {
    const double hn = (dim - 0.5);
    const double t = 1.0, lam = regime / (t * hn * hn);
    const ToySystem s = make_oscillator(dim, 1.0, lam, CollapseKind::Hamiltonian);
    const Vec psi = coherent_state(dim, {0.8, 0.3});
    const Mat x = position_op(dim);
    const auto rows = compare_three_way(s, psi, t, 0.01, 2, 1, {{"x^2", x * x}});
    const auto& r = rows[0];
    const double rel = std::fabs(r.perturbative.correction / r.master_correction() - 1.0);
    o.sub(rel <= 0.01, fmt::format("perturbative vs master, L = H, O = x^2, lambda t |H|^2 = {}: corrections {:.6e} vs "
                                   "{:.6e} (rel {:.2e})",
                                   regime, r.perturbative.correction, r.master_correction(), rel));
  }
  return o;
}

// ---- 9: scaled arithmetic vs high-precision oracle ----

Outcome c9() {
  Outcome o;
  const auto& p = cfg().cosmo;
  mp::default_precision(800);
  std::mt19937_64 rng(987654321);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto logu = [&](double a, double b) { return a * std::pow(b / a, u(rng)); };
  auto rel = [](const xreal& x, const mp& ref) {
    const mp xv = boost::multiprecision::ldexp(mp(x.m), static_cast<int>(x.e));
    return static_cast<double>(abs(xv - ref) / abs(ref));
  };
  for (EraTag era : {EraTag::Inflation, EraTag::Radiation}) {
    const bool inf = era == EraTag::Inflation;
    kernels::generic::Setup<mp> st{inf ? kernels::generic::Era::Inflation : kernels::generic::Era::Radiation,
                                   mp(p.eta_e), mp(p.eps_inf)};
    const double end = inf ? p.eta_e : p.eta_r;
    double wf = 0, wk = 0, ws = 0;
    for (int i = 0; i < 1000; ++i) {
      // k over CMB scales and six decades beyond; eta' over the whole era
      const double q = logu(1e-63, 1e-55), pp = logu(1e-63, 1e-55);
      const double ct = 2 * u(rng) - 1;
      const double eta = inf ? -logu(-p.eta_e, -p.eta0) : 2 * p.eta_e + logu(-p.eta_e, p.eta_r - 2 * p.eta_e);
      const mp mq(q), mpp(pp), mct(ct), me(eta), mend(end);
      wf = std::max(wf, rel(kernels::kernel_exact(era, pp, q, ct, eta, end, p).value,
                            kernels::generic::F(st, mpp, mq, mct, me, mend)));
      wk = std::max(wk, rel(kernels::kernel_external(era, pp, q, ct, eta, end, p),
                            kernels::generic::K(st, mpp, mq, mct, me, mend)));
      ws = std::max(ws, rel(kernels::kernel_symmetric(era, pp, q, ct, eta, end, p),
                            kernels::generic::F_sym(st, mpp, mq, mct, me, mend)));
    }
    o.sub(wf <= 1e-8 && wk <= 1e-8 && ws <= 1e-8,
          fmt::format("{}: 1000 random points, max rel error vs 800-digit oracle: F {:.2e}, K {:.2e}, F_sym {:.2e}",
                      background::era_name(era), wf, wk, ws));
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);

  const std::vector<Criterion> all = {
      {1, "inflation headline", 1, c1},
      {2, "radiation headline", 1, c2},
      {3, "collapse-rate bound", 1, c3},
      {4, "quadrature vs closed form", 300, c4},
      {5, "exact vs leading asymptotics", 60, c5},
      {6, "mode invariants", 30, c6},
      {7, "linear vs quadratic operator", 10, c7},
      {8, "collapse machinery three ways", 300, c8},
      {9, "high-precision oracle", 120, c9},
  };
  bool ok = true;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    const auto t0 = clk::now();
    Outcome r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.sub(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(clk::now() - t0).count();
    const bool in_time = dt <= c.limit_s;
    const bool pass = r.pass && in_time;
    fmt::print("[{}] criterion {}: {} ({:.3f} s, limit {:g} s)\n", pass ? "PASS" : "FAIL", c.id, c.name, dt,
               c.limit_s);
    for (const auto& l : r.lines) fmt::print("{}\n", l);
    ok = ok && pass;
  }
  return ok ? 0 : 1;
}
