// Correction-integrand kernels.
//
// Exact quadratic kernel, two ways:
//   * kernel_composed: the literal Re[b d f* - |b|^2 g] built from bilinears.
//     Exact algebra, but at superhorizon arguments the terms cancel by up to
//     ~1e-230 relative, so it is only meaningful for |k eta| = O(1).
//   * kernel_exact (production): the identity
//       K(q;p) = -2 |v_p' G1 - c v_p G0|^2 - 2 c w_p w_q |v_q(eta_end)|^2
//     with G(e1,e2) = Im[v_q(e1) v_q*(e2)], G0 = G(eta',eta_end),
//     G1 = dG/de1, and w = Im(v' v*) the per-era constant; then
//       F = K(q;p) + |b|^2 (g^{qq} - g^{pp}),
//       F_sym = (K(q;p) + K(p;q))/2.
//     No cancellation beyond a few ulps for |k eta| <= 1e6.
// All values are scaled (xreal), never saturated.
#pragma once

#include <string>

#include "csl/background.hpp"
#include "csl/modes.hpp"
#include "csl/xnum.hpp"

namespace csl::kernels {

using background::CosmoParams;
using background::EraTag;

enum class Variant { ExactQuadratic, LeadingQuadratic, LinearizedAppE };
enum class LeadingTerms { Two, Four };
// Effective: the q-only relabelled kernel used under the integral
// Symmetrized: (L(q;p) + L(p;q))/2;  ExternalMode: L(q;p)
enum class LeadingForm { Effective, Symmetrized, ExternalMode };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);  // exact | leading | linear

struct BilinearCoeffs {
  xcomplex f, g, j, l;  // at (p,q): v_p v_q, v_p v_q*, v_p' v_q', v_p' v_q'*
  xcomplex b;           // j - c f
  xcomplex d;           // d^{qp} = v_q' v_p'* - c v_q v_p*
};

struct KernelEval {
  EraTag era;
  Variant variant;
  xreal value;
};

// c = p.q + 2/eta^2 (inflation) or p.q/3 (radiation)
xreal coupling(EraTag era, double p, double q, double ct, double eta);

BilinearCoeffs bilinear_coeffs(EraTag era, double p, double q, double ct, double eta, const CosmoParams& cp);

// G(e1,e2) = Im[v_k(e1) v_k*(e2)] and its e1-derivative, closed form
void green(EraTag era, double k, double e1, double e2, const CosmoParams& cp, xreal& g0, xreal& g1);

// eta_end: eta_e for inflation, eta_r for radiation
KernelEval kernel_exact(EraTag era, double p, double q, double ct, double eta, double eta_end, const CosmoParams& cp);
xreal kernel_external(EraTag era, double p, double q, double ct, double eta, double eta_end, const CosmoParams& cp);
xreal kernel_symmetric(EraTag era, double p, double q, double ct, double eta, double eta_end, const CosmoParams& cp);

// K(q;p) = a0 + a1 ct + a2 ct^2, exactly
struct CtPoly {
  xreal a0, a1, a2;
  xreal at(double ct) const { return a0 + a1 * xreal(ct) + a2 * xreal(ct * ct); }
};
CtPoly kernel_external_ctpoly(EraTag era, double p, double q, double eta, double eta_end, const CosmoParams& cp);

// literal routes
xreal kernel_composed(EraTag era, double p, double q, double ct, double eta, double eta_end, const CosmoParams& cp);
xreal kernel_external_composed(EraTag era, double p, double q, double ct, double eta, double eta_end,
                               const CosmoParams& cp);
// long closed-form expression in double: F for inflation (eta_end = eta_e),
// K(q;p) for radiation.  Moderate arguments only.
double kernel_transcribed(EraTag era, double p, double q, double ct, double eta, double eta_end, const CosmoParams& cp);

// leading small-|k eta| kernels; radiation ignores `terms`
KernelEval kernel_leading(EraTag era, double p, double q, double eta, const CosmoParams& cp,
                          LeadingTerms terms = LeadingTerms::Four, LeadingForm form = LeadingForm::Effective);

// linearised collapse operator
struct Chi {
  xreal alpha, beta;
  xcomplex chi;
};
Chi chi_linear(double k, double eta, const CosmoParams& cp);
KernelEval kernel_linear(double q, double eta, double eta_e, const CosmoParams& cp, bool leading = false);
xreal kernel_linear_composed(double q, double eta, double eta_e, const CosmoParams& cp);

}  // namespace csl::kernels
