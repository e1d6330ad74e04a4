#include <cmath>

#include "csl/background.hpp"
#include "csl/kernels.hpp"
#include "doctest.h"
#include "util.hpp"

using namespace csl;
using namespace csl::kernels;
using background::EraTag;

namespace {
const background::CosmoParams P = background::preset("paper-main");

// a toy background where |k eta| = O(1), so the literal routes are usable in double
background::CosmoParams toy(double eta_e) {
  background::CosmoParams c = P;
  c.eta0 = -100;
  c.eta_e = eta_e;
  c.eta_r = 4;
  return c;
}
}  // namespace

TEST_CASE("superhorizon kernels against high-precision values") {
  const double ee = P.eta_e, er = P.eta_r;
  CHECK(rel(kernel_exact(EraTag::Inflation, 3e-60, 5e-60, 0.3, -2e56, ee, P).value, -1.3697090787708274e+17) < 1e-10);
  CHECK(rel(kernel_external(EraTag::Inflation, 3e-60, 5e-60, 0.3, -2e56, ee, P), -0.16677948420656829) < 1e-10);
  CHECK(rel(kernel_symmetric(EraTag::Inflation, 3e-60, 5e-60, 0.3, -2e56, ee, P), -0.17335407774647379) < 1e-10);
  CHECK(rel(kernel_exact(EraTag::Radiation, 3e-60, 5e-60, -0.4, 1e58, er, P).value, -5.1768622141834226e+263) < 1e-10);
  CHECK(rel(kernel_external(EraTag::Radiation, 3e-60, 5e-60, -0.4, 1e58, er, P), 7.80968158711029e+52) < 1e-9);
  CHECK(rel(kernel_symmetric(EraTag::Radiation, 3e-60, 5e-60, -0.4, 1e58, er, P), 3.2227280497507622e+53) < 1e-9);
  // far outside double range
  CHECK(rel(kernel_exact(EraTag::Inflation, 2e-62, 7e-62, -0.9, -3e40, ee, P).value, -2.7637223157916357e+162) < 1e-10);
  CHECK(rel(kernel_external(EraTag::Radiation, 2e-62, 7e-62, 0.9, 1e40, er, P), -5.7379239641074324e+60) < 1e-9);
}

TEST_CASE("literal composition and transcription agree with the stable form at moderate arguments") {
  const auto ti = toy(-0.5);
  const double fi = -2.7506342216537482, ki = -0.98590887036478567, si = -1.8184012363979305;
  CHECK(rel(kernel_exact(EraTag::Inflation, 0.7, 1.0, 0.3, -3.0, -0.5, ti).value, fi) < 1e-12);
  CHECK(rel(kernel_composed(EraTag::Inflation, 0.7, 1.0, 0.3, -3.0, -0.5, ti), fi) < 1e-12);
  CHECK(rel(kernel_transcribed(EraTag::Inflation, 0.7, 1.0, 0.3, -3.0, -0.5, ti), fi) < 1e-12);
  CHECK(rel(kernel_external(EraTag::Inflation, 0.7, 1.0, 0.3, -3.0, -0.5, ti), ki) < 1e-12);
  CHECK(rel(kernel_external_composed(EraTag::Inflation, 0.7, 1.0, 0.3, -3.0, -0.5, ti), ki) < 1e-12);
  CHECK(rel(kernel_symmetric(EraTag::Inflation, 0.7, 1.0, 0.3, -3.0, -0.5, ti), si) < 1e-12);

  const auto tr = toy(-1.0);
  const double fr = -28458866.694192982, kr = -93897741.463964853, sr = -124875205.78572134;
  CHECK(rel(kernel_exact(EraTag::Radiation, 0.8, 1.1, 0.3, 2.0, 4.0, tr).value, fr) < 1e-11);
  CHECK(rel(kernel_composed(EraTag::Radiation, 0.8, 1.1, 0.3, 2.0, 4.0, tr), fr) < 1e-11);
  CHECK(rel(kernel_external(EraTag::Radiation, 0.8, 1.1, 0.3, 2.0, 4.0, tr), kr) < 1e-11);
  CHECK(rel(kernel_external_composed(EraTag::Radiation, 0.8, 1.1, 0.3, 2.0, 4.0, tr), kr) < 1e-11);
  // the long radiation expression is the per-external-mode kernel
  CHECK(rel(kernel_transcribed(EraTag::Radiation, 0.8, 1.1, 0.3, 2.0, 4.0, tr), kr) < 1e-11);
  CHECK(rel(kernel_symmetric(EraTag::Radiation, 0.8, 1.1, 0.3, 2.0, 4.0, tr), sr) < 1e-11);
}

TEST_CASE("kernel is an exact quadratic in cos(theta)") {
  for (EraTag era : {EraTag::Inflation, EraTag::Radiation}) {
    const double eta = era == EraTag::Inflation ? -1e45 : 1e57;
    const double end = era == EraTag::Inflation ? P.eta_e : P.eta_r;
    const CtPoly poly = kernel_external_ctpoly(era, 2e-60, 3e-60, eta, end, P);
    for (double ct : {-1.0, -0.2, 0.5, 1.0})
      CHECK(rel_diff(poly.at(ct), kernel_external(era, 2e-60, 3e-60, ct, eta, end, P)) < 1e-12);
  }
}

TEST_CASE("symmetrised kernel is symmetric and F splits as K plus a remainder") {
  for (EraTag era : {EraTag::Inflation, EraTag::Radiation}) {
    const double eta = era == EraTag::Inflation ? -1e45 : 1e57;
    const double end = era == EraTag::Inflation ? P.eta_e : P.eta_r;
    CHECK(rel_diff(kernel_symmetric(era, 2e-60, 3e-60, 0.1, eta, end, P),
                   kernel_symmetric(era, 3e-60, 2e-60, 0.1, eta, end, P)) < 1e-15);
    // p = q: F and K coincide
    CHECK(rel_diff(kernel_exact(era, 3e-60, 3e-60, 0.1, eta, end, P).value,
                   kernel_external(era, 3e-60, 3e-60, 0.1, eta, end, P)) < 1e-12);
  }
}

TEST_CASE("leading kernels") {
  // inflation, two terms: -1/(2 q^3 eta^2 eta_e^2) - 4/(9 p^3 eta^2 eta_e^2)
  const double p = 2e-60, q = 3e-60, eta = -1e45, ee = P.eta_e;
  const double base = 1.0 / (eta * eta * ee * ee);
  const double two = -0.5 * base / (q * q * q) - 4.0 / 9.0 * base / (p * p * p);
  CHECK(rel(kernel_leading(EraTag::Inflation, p, q, eta, P, LeadingTerms::Two, LeadingForm::ExternalMode).value, two) <
        1e-14);
  CHECK(rel(kernel_leading(EraTag::Inflation, p, q, eta, P, LeadingTerms::Two, LeadingForm::Effective).value,
            -17.0 / 18.0 * base / (q * q * q)) < 1e-14);
  const double rad = -54.0 / (std::pow(P.eps_inf, 3) * std::pow(ee, 4) * std::pow(p, 3));
  CHECK(rel(kernel_leading(EraTag::Radiation, p, q, 1e57, P, LeadingTerms::Four, LeadingForm::ExternalMode).value,
            rad) < 1e-14);
  // exact -> leading on superhorizon scales
  CHECK(rel_diff(kernel_external(EraTag::Inflation, p, q, 0.4, eta, ee, P),
                 kernel_leading(EraTag::Inflation, p, q, eta, P, LeadingTerms::Four, LeadingForm::ExternalMode).value) <
        1e-10);
  // radiation needs |k eta_r| << 1 as well
  CHECK(rel_diff(kernel_external(EraTag::Radiation, 2e-66, 3e-66, 0.4, 1e40, P.eta_r, P),
                 kernel_leading(EraTag::Radiation, 2e-66, 3e-66, 1e40, P, LeadingTerms::Four,
                                LeadingForm::ExternalMode)
                     .value) < 1e-10);
}

TEST_CASE("linearised-operator kernel") {
  CHECK(rel(kernel_linear(1e-60, -1e40, P.eta_e, P).value, -7.3360174409641788e+217) < 1e-10);
  CHECK(rel(kernel_linear(3e-58, -2e57, P.eta_e, P).value, -7.2682473879602356e+245) < 1e-10);
  // leading form -18 eps^3 H^6 eta^2/(q^4 eta_e^2)
  const double q = 1e-62, eta = -1e50;
  const double lead = -18 * std::pow(P.eps_inf, 3) * std::pow(P.h_inf, 6) * eta * eta / (std::pow(q, 4) * P.eta_e * P.eta_e);
  CHECK(rel(kernel_linear(q, eta, P.eta_e, P, true).value, lead) < 1e-14);
  CHECK(rel(kernel_linear(q, eta, P.eta_e, P).value, lead) < 1e-9);
  const auto t = toy(-0.5);
  CHECK(rel_diff(kernel_linear(1.0, -3.0, -0.5, t).value, kernel_linear_composed(1.0, -3.0, -0.5, t)) < 1e-12);
}

TEST_CASE("argument checks and names") {
  CHECK_THROWS_AS(kernel_external(EraTag::Inflation, -1, 1e-60, 0, -1e40, P.eta_e, P), std::domain_error);
  CHECK_THROWS_AS(kernel_external(EraTag::Inflation, 1e-60, 1e-60, 1.5, -1e40, P.eta_e, P), std::domain_error);
  CHECK_THROWS_AS(kernel_external(EraTag::Radiation, 1e-60, 1e-60, 0, -1e40, P.eta_r, P), std::domain_error);
  CHECK(parse_variant("exact") == Variant::ExactQuadratic);
  CHECK(parse_variant("leading") == Variant::LeadingQuadratic);
  CHECK(parse_variant("linear") == Variant::LinearizedAppE);
  CHECK_THROWS(parse_variant("cubic"));
}
