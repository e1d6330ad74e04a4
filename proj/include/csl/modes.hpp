// Closed-form mode functions v_k(eta), v_k'(eta) (' = d/d eta).
//
// Inflation (Bunch-Davies, exact de Sitter):
//   v = e^{-iy}(1 - i/y)/sqrt(2k),  y = k eta
// evaluated in the factored form v = -i E/(y sqrt(2k)), E = (1 + iy) e^{-iy}, so
// that no 1/y cancellation is ever formed; |y| may be anywhere in (0, 1e6].
//
// Radiation: the inflationary solution matched at eta_e (R and R' continuous),
// frequency k/sqrt(3).  Written as v = e^{-ix} vt(theta), x = k eta_e,
// theta = k(eta - eta_e)/sqrt(3), with vt a short trig polynomial times a
// scaled prefactor.  Its Wronskian is 6i/eps_inf (not i); see README.
#pragma once

#include <complex>

#include "csl/background.hpp"
#include "csl/xnum.hpp"

namespace csl::modes {

struct ModeState {
  double k = 0;
  double eta = 0;
  xcomplex v;
  xcomplex v_dot;
};

// y cos y - sin y, accurate for small |y| (series) as well as large
double n_func(double y);

ModeState mode_sho(double omega, double t);
ModeState mode_inflation(double k, double eta);
ModeState mode_radiation(double k, double eta, double eta_e, double eps_inf);
// same without the global e^{-ik eta_e}; bilinears with balanced phases use this
ModeState mode_radiation_phase_free(double k, double eta, double eta_e, double eps_inf);

// second derivatives, by differentiating the closed forms
xcomplex v_ddot_inflation(double k, double eta);
xcomplex v_ddot_radiation(double k, double eta, double eta_e, double eps_inf);

// v v'* - v* v', assembled componentwise
xcomplex wronskian(const ModeState& s);
// Im(v' v*), constant in each era: -1/2 (inflation), -3/eps_inf (radiation)
inline double im_vdot_vstar_inflation() { return -0.5; }
inline double im_vdot_vstar_radiation(double eps_inf) { return -3.0 / eps_inf; }

// comoving curvature R = v/z and R', both without cancellation
struct Curvature {
  xcomplex r;
  xcomplex r_dot;
};
Curvature curvature_inflation(double k, double eta, const background::CosmoParams& p);
Curvature curvature_radiation(double k, double eta, const background::CosmoParams& p);

ModeState mode(background::EraTag era, double k, double eta, const background::CosmoParams& p);

}  // namespace csl::modes
