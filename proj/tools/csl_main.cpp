// csl: command-line front end.
//
// Exit codes: 0 ok, 1 other failure, 2 config/usage error, 3 quadrature did
// not converge, 4 reproduction check failed.
#include <fmt/format.h>
#include <tbb/global_control.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "csl/config.hpp"
#include "csl/cslsim.hpp"
#include "csl/kernels.hpp"
#include "csl/modes.hpp"
#include "csl/reproduce.hpp"
#include "csl/spectrum.hpp"

using namespace csl;
using nlohmann::json;

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string xs(const xreal& v) { return v.str(17); }

json xj(const xreal& v) { return {{"value", v.str(17)}, {"mantissa", cli::num(v.m)}, {"exp2", v.e}}; }

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
}

bool is_json(const std::string& path) { return path.size() >= 5 && path.substr(path.size() - 5) == ".json"; }

// CSV to stdout/file, or JSON (table as array of objects plus extras) when --out ends in .json
void emit(const std::string& out, const Table& t, json extra) {
  if (!out.empty() && is_json(out)) {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json o;
      for (std::size_t i = 0; i < r.size(); ++i) o[t.header[i]] = r[i];
      rows.push_back(o);
    }
    extra["rows"] = rows;
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write '" + out + "'");
    f << extra.dump(2) << "\n";
    return;
  }
  if (out.empty()) {
    write_csv(std::cout, t);
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write '" + out + "'");
    write_csv(f, t);
  }
}

struct Globals {
  std::string config;
  std::string out;
  int threads = 0;
  bool verbose = false;
};

cli::RunConfig load(const Globals& g) { return g.config.empty() ? cli::default_config() : cli::load_config(g.config); }

json spectrum_json(const spectrum::SpectrumResult& r, const cli::RunConfig& cfg, int threads) {
  json j;
  j["params_snapshot"] = cli::to_json(cfg);
  j["method"] = r.method == spectrum::Method::ClosedForm ? "closed-form" : "quadrature";
  j["kernel_variant"] = kernels::variant_name(r.kernel_variant);
  j["era"] = background::era_name(r.era);
  j["error_estimate"] = cli::num(r.error_estimate);
  j["levels_used"] = r.levels_used;
  j["threads"] = threads;
  j["notes"] = r.notes;
  return j;
}

Table spectrum_table(const spectrum::SpectrumResult& r, const cli::RunConfig& cfg) {
  Table t{{"k_planck", "k_mpc", "p_standard", "delta_p", "rel_err"}, {}};
  for (std::size_t i = 0; i < r.k_grid.size(); ++i)
    t.rows.push_back({cli::num(r.k_grid[i]), cli::num(units::wavenumber_planck_to_mpc(r.k_grid[i], cfg.units)),
                      cli::num(r.p_standard[i]), xs(r.delta_p[i]), cli::num(r.rel_err[i])});
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CSL corrections to the primordial curvature power spectrum"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "INI or JSON config (a result JSON replays its params_snapshot)");
  app.add_option("--out", g.out, "output file; .json selects JSON, anything else CSV");
  app.add_option("--threads", g.threads, "worker threads (0 = all)")->check(CLI::NonNegativeNumber);
  app.add_flag("--verbose,-v", g.verbose, "diagnostics on stderr");

  // spectrum
  auto* sp = app.add_subcommand("spectrum", "per-log-k CSL correction by full quadrature");
  std::optional<std::string> sp_era, sp_variant;
  std::optional<double> sp_qmin, sp_qmax;
  std::optional<int> sp_qn;
  sp->add_option("--era", sp_era, "inflation | radiation");
  sp->add_option("--variant", sp_variant, "exact | leading | linear");
  sp->add_option("--q-min", sp_qmin, "smallest k [M_P]");
  sp->add_option("--q-max", sp_qmax, "largest k [M_P]");
  sp->add_option("--q-points", sp_qn, "number of log-spaced k");

  // correction
  auto* co = app.add_subcommand("correction", "closed-form corrections");
  double co_q = 1e-60;
  co->add_option("--q", co_q, "k for the linearised-operator form [M_P]");

  // bound
  auto* bo = app.add_subcommand("bound", "upper bound on the collapse rate");
  std::optional<double> bo_err;
  bool bo_numeric = false;
  bo->add_option("--observational-error", bo_err, "allowed |dP|");
  bo->add_flag("--numeric", bo_numeric, "use the leading-kernel quadrature instead of the closed form");

  // compare-kernels
  auto* ck = app.add_subcommand("compare-kernels", "exact vs leading kernels across k eta'");
  std::string ck_era = "inflation";
  double ck_ratio = 0.7, ck_ct = 0.3, ck_xmin = 1e-5, ck_xmax = 10;
  int ck_n = 13;
  ck->add_option("--era", ck_era);
  ck->add_option("--p-ratio", ck_ratio, "p/q");
  ck->add_option("--cos", ck_ct, "cos(theta)");
  ck->add_option("--x-min", ck_xmin, "smallest |q eta'|");
  ck->add_option("--x-max", ck_xmax, "largest |q eta'|");
  ck->add_option("--points", ck_n);

  // modes
  auto* mo = app.add_subcommand("modes", "dump v, v' and the Wronskian on a time grid");
  std::string mo_era = "inflation";
  double mo_k = 5e-60;
  int mo_n = 50;
  std::optional<double> mo_e0, mo_e1;
  mo->add_option("--era", mo_era);
  mo->add_option("--k", mo_k, "[M_P]");
  mo->add_option("--eta-min", mo_e0, "start of grid (default: era start)");
  mo->add_option("--eta-max", mo_e1, "end of grid (default: era end)");
  mo->add_option("--points", mo_n);

  // kernel
  auto* ke = app.add_subcommand("kernel", "evaluate one kernel");
  std::string ke_era = "inflation", ke_variant = "exact";
  double ke_p = 5e-60, ke_q = 5e-60, ke_ct = 0.0;
  std::optional<double> ke_eta;
  ke->add_option("--era", ke_era);
  ke->add_option("--variant", ke_variant, "exact | leading | linear");
  ke->add_option("--p", ke_p);
  ke->add_option("--q", ke_q);
  ke->add_option("--cos", ke_ct);
  ke->add_option("--eta", ke_eta, "default: 10 eta_e (inflation), eta_r/2 (radiation)");

  // simulate
  auto* si = app.add_subcommand("simulate", "toy collapse dynamics, three ways");
  std::optional<int> si_dim, si_ntraj;
  std::optional<double> si_omega, si_lambda, si_t, si_dt;
  std::optional<std::string> si_op;
  std::optional<std::uint64_t> si_seed;
  si->add_option("--dim", si_dim);
  si->add_option("--omega", si_omega);
  si->add_option("--lambda-eff", si_lambda);
  si->add_option("--collapse-op", si_op, "number | position-sq | hamiltonian");
  si->add_option("--ntraj", si_ntraj);
  si->add_option("--seed", si_seed);
  si->add_option("--t", si_t);
  si->add_option("--dt", si_dt);

  // reproduce
  auto* re = app.add_subcommand("reproduce", "headline numbers, pass/fail");
  bool re_noquad = false;
  re->add_flag("--no-quadrature", re_noquad, "closed forms and bound only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::unique_ptr<tbb::global_control> gc;
  if (g.threads > 0) gc = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism, g.threads);
  const int threads = static_cast<int>(tbb::global_control::active_value(tbb::global_control::max_allowed_parallelism));
  const auto t0 = std::chrono::steady_clock::now();

  try {
    cli::RunConfig cfg = load(g);

    if (sp->parsed()) {
      if (sp_era) cfg.run.era = *sp_era;
      if (sp_variant) cfg.run.variant = *sp_variant;
      if (sp_qmin) cfg.quad.q_min = *sp_qmin;
      if (sp_qmax) cfg.quad.q_max = *sp_qmax;
      if (sp_qn) cfg.quad.q_points = *sp_qn;
      cfg.validate();
      const auto era = background::parse_era(cfg.run.era);
      const auto var = kernels::parse_variant(cfg.run.variant);
      int rc = 0;
      spectrum::SpectrumResult r;
      try {
        r = spectrum::delta_r2_numeric(era, var, cfg.cosmo, cfg.csl, cfg.quad);
      } catch (const spectrum::NonConvergence& e) {
        fmt::print(stderr, "non-convergence: {}\n", e.what());
        r = e.partial;
        rc = 3;
      }
      if (g.verbose)
        for (const auto& n : r.notes) fmt::print(stderr, "note: {}\n", n);
      emit(g.out, spectrum_table(r, cfg), spectrum_json(r, cfg, threads));
      return rc;
    }

    if (co->parsed()) {
      const double inf = spectrum::delta_p_inflation_closed(cfg.cosmo, cfg.csl);
      const double rad = spectrum::delta_p_radiation_closed(cfg.cosmo, cfg.csl);
      const xreal lin = spectrum::delta_p_linear_closed(co_q, cfg.cosmo, cfg.csl);
      const xreal lin4 = spectrum::delta_p_linear_closed(co_q, cfg.cosmo, cfg.csl, true);
      Table t{{"quantity", "value"},
              {{"inflation_quadratic", cli::num(inf)},
               {"radiation_quadratic", cli::num(rad)},
               {"inflation_linear", xs(lin)},
               {"inflation_linear_with_135_over_4", xs(lin4)}}};
      json j;
      j["params_snapshot"] = cli::to_json(cfg);
      j["q"] = cli::num(co_q);
      j["inflation_linear_scaled"] = xj(lin);
      emit(g.out, t, j);
      return 0;
    }

    if (bo->parsed()) {
      if (bo_err) cfg.bound.observational_error = *bo_err;
      cfg.validate();
      spectrum::CslParams c = cfg.csl;
      c.lambda_si = c.lambda_grw_si;
      c.sync(cfg.units);
      double dp;
      if (bo_numeric) {
        spectrum::QuadratureConfig qc = cfg.quad;
        qc.q_points = 1;
        qc.q_min = qc.q_max = std::sqrt(cfg.quad.q_min * cfg.quad.q_max);
        dp = spectrum::delta_r2_numeric(background::EraTag::Inflation, kernels::Variant::LeadingQuadratic, cfg.cosmo,
                                        c, qc)
                 .delta_p[0]
                 .to_double();
      } else {
        dp = spectrum::delta_p_inflation_closed(cfg.cosmo, c);
      }
      const double lam = spectrum::lambda_bound(std::fabs(dp), cfg.bound.observational_error, c.lambda_grw_si);
      Table t{{"quantity", "value"},
              {{"delta_p_per_lambda_grw", cli::num(dp)},
               {"lambda_max_per_s", cli::num(lam)},
               {"orders_above_reference", cli::num(std::log10(lam / cfg.bound.reference_bound))}}};
      json j;
      j["params_snapshot"] = cli::to_json(cfg);
      emit(g.out, t, j);
      return 0;
    }

    if (ck->parsed()) {
      const auto era = background::parse_era(ck_era);
      if (ck_n < 2 || !(ck_xmin > 0) || !(ck_xmax > ck_xmin)) throw cli::ConfigError("compare-kernels: bad grid");
      Table t{{"q_eta", "eta", "q", "exact_sym", "leading_sym", "rel_diff"}, {}};
      for (int i = 0; i < ck_n; ++i) {
        const double x = ck_xmin * std::pow(ck_xmax / ck_xmin, static_cast<double>(i) / (ck_n - 1));
        double eta, q, end;
        if (era == background::EraTag::Inflation) {
          eta = 10.0 * cfg.cosmo.eta_e;
          end = cfg.cosmo.eta_e;
          q = x / -eta;
        } else {
          eta = 0.5 * cfg.cosmo.eta_r;
          end = cfg.cosmo.eta_r;
          q = x / cfg.cosmo.eta_r;
        }
        const double p = ck_ratio * q;
        const xreal ex = kernels::kernel_symmetric(era, p, q, ck_ct, eta, end, cfg.cosmo);
        const xreal ld = kernels::kernel_leading(era, p, q, eta, cfg.cosmo, cfg.quad.leading_terms,
                                                 kernels::LeadingForm::Symmetrized)
                             .value;
        t.rows.push_back({cli::num(x), cli::num(eta), cli::num(q), xs(ex), xs(ld), cli::num(rel_diff(ex, ld))});
      }
      json j;
      j["params_snapshot"] = cli::to_json(cfg);
      emit(g.out, t, j);
      return 0;
    }

    if (mo->parsed()) {
      const auto era = background::parse_era(mo_era);
      const bool inf = era == background::EraTag::Inflation;
      const double e0 = mo_e0.value_or(inf ? cfg.cosmo.eta0 : cfg.cosmo.eta_e);
      const double e1 = mo_e1.value_or(inf ? cfg.cosmo.eta_e : cfg.cosmo.eta_r);
      if (mo_n < 2) throw cli::ConfigError("modes: need at least 2 points");
      Table t{{"eta", "re_v", "im_v", "re_vdot", "im_vdot", "im_wronskian"}, {}};
      for (int i = 0; i < mo_n; ++i) {
        const double f = static_cast<double>(i) / (mo_n - 1);
        // log spacing in |eta| (inflation) or eta - 2 eta_e (radiation)
        double eta;
        if (inf) {
          eta = -std::exp(std::log(-e0) + f * (std::log(-e1) - std::log(-e0)));
        } else {
          const double s0 = e0 - 2 * cfg.cosmo.eta_e, s1 = e1 - 2 * cfg.cosmo.eta_e;
          eta = 2 * cfg.cosmo.eta_e + std::exp(std::log(s0) + f * (std::log(s1) - std::log(s0)));
        }
        const modes::ModeState s = modes::mode(era, mo_k, eta, cfg.cosmo);
        const xcomplex w = modes::wronskian(s);
        t.rows.push_back({cli::num(eta), xs(s.v.real()), xs(s.v.imag()), xs(s.v_dot.real()), xs(s.v_dot.imag()),
                          xs(w.imag())});
      }
      json j;
      j["params_snapshot"] = cli::to_json(cfg);
      j["k"] = cli::num(mo_k);
      emit(g.out, t, j);
      return 0;
    }

    if (ke->parsed()) {
      const auto era = background::parse_era(ke_era);
      const auto var = kernels::parse_variant(ke_variant);
      const bool inf = era == background::EraTag::Inflation;
      const double eta = ke_eta.value_or(inf ? 10.0 * cfg.cosmo.eta_e : 0.5 * cfg.cosmo.eta_r);
      const double end = inf ? cfg.cosmo.eta_e : cfg.cosmo.eta_r;
      Table t{{"kernel", "value"}, {}};
      if (var == kernels::Variant::ExactQuadratic) {
        t.rows.push_back({"F", xs(kernels::kernel_exact(era, ke_p, ke_q, ke_ct, eta, end, cfg.cosmo).value)});
        t.rows.push_back({"K_external", xs(kernels::kernel_external(era, ke_p, ke_q, ke_ct, eta, end, cfg.cosmo))});
        t.rows.push_back({"F_sym", xs(kernels::kernel_symmetric(era, ke_p, ke_q, ke_ct, eta, end, cfg.cosmo))});
      } else if (var == kernels::Variant::LeadingQuadratic) {
        for (auto [name, form] : {std::pair{"effective", kernels::LeadingForm::Effective},
                                  std::pair{"symmetrized", kernels::LeadingForm::Symmetrized},
                                  std::pair{"external", kernels::LeadingForm::ExternalMode}})
          t.rows.push_back(
              {name, xs(kernels::kernel_leading(era, ke_p, ke_q, eta, cfg.cosmo, cfg.quad.leading_terms, form).value)});
      } else {
        if (!inf) throw cli::ConfigError("kernel: linearised operator is defined for inflation only");
        t.rows.push_back({"F_lin", xs(kernels::kernel_linear(ke_q, eta, cfg.cosmo.eta_e, cfg.cosmo).value)});
        t.rows.push_back({"F_lin_leading", xs(kernels::kernel_linear(ke_q, eta, cfg.cosmo.eta_e, cfg.cosmo, true).value)});
      }
      json j;
      j["params_snapshot"] = cli::to_json(cfg);
      j["p"] = cli::num(ke_p);
      j["q"] = cli::num(ke_q);
      j["cos"] = cli::num(ke_ct);
      j["eta"] = cli::num(eta);
      emit(g.out, t, j);
      return 0;
    }

    if (si->parsed()) {
      if (si_dim) cfg.sim.dim = *si_dim;
      if (si_omega) cfg.sim.omega = *si_omega;
      if (si_lambda) cfg.sim.lambda_eff = *si_lambda;
      if (si_op) cfg.sim.collapse_op = *si_op;
      if (si_ntraj) cfg.sim.ntraj = *si_ntraj;
      if (si_seed) cfg.sim.seed = *si_seed;
      if (si_t) cfg.sim.t = *si_t;
      if (si_dt) cfg.sim.dt = *si_dt;
      cfg.validate();
      const auto kind = sim::parse_collapse(cfg.sim.collapse_op);
      const sim::ToySystem s = sim::make_oscillator(cfg.sim.dim, cfg.sim.omega, cfg.sim.lambda_eff, kind);
      const sim::Vec psi0 = sim::coherent_state(cfg.sim.dim, {0.8, 0.3});
      const sim::Mat x = sim::position_op(cfg.sim.dim);
      const auto rows = sim::compare_three_way(
          s, psi0, cfg.sim.t, cfg.sim.dt, cfg.sim.ntraj, cfg.sim.seed,
          {{"L", s.collapse_op}, {"L^2", s.collapse_op * s.collapse_op}, {"H", s.hamiltonian}, {"x^2", x * x}});
      Table t{{"observable", "unitary", "master", "ensemble_mean", "ensemble_stderr", "perturbative",
               "master_correction", "perturbative_correction", "regime", "regime_ok"},
              {}};
      for (const auto& r : rows)
        t.rows.push_back({r.observable, cli::num(r.unitary), cli::num(r.master), cli::num(r.ensemble.mean),
                          cli::num(r.ensemble.stderr_), cli::num(r.perturbative.value), cli::num(r.master_correction()),
                          cli::num(r.perturbative.correction), cli::num(r.perturbative.regime),
                          r.perturbative.regime_ok ? "true" : "false"});
      json j;
      j["params_snapshot"] = cli::to_json(cfg);
      j["threads"] = threads;
      emit(g.out, t, j);
      return 0;
    }

    if (re->parsed()) {
      const cli::ReproReport rep = cli::run_reproduce(cfg, !re_noquad);
      fmt::print("{}", rep.table());
      if (!g.out.empty()) {
        Table t{{"quantity", "value", "lo", "hi", "pass", "detail"}, {}};
        for (const auto& r : rep.rows)
          t.rows.push_back({r.name, cli::num(r.value), cli::num(r.lo), cli::num(r.hi), r.pass ? "true" : "false",
                            r.detail});
        json j;
        j["params_snapshot"] = cli::to_json(cfg);
        emit(g.out, t, j);
      }
      if (g.verbose)
        fmt::print(stderr, "elapsed {:.3f} s\n",
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      return rep.all_pass() ? 0 : 4;
    }
  } catch (const cli::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "invalid argument: {}\n", e.what());
    return 2;
  } catch (const spectrum::NonConvergence& e) {
    fmt::print(stderr, "non-convergence: {}\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
