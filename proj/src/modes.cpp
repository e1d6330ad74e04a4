#include "csl/modes.hpp"

#include <cmath>
#include <stdexcept>

namespace csl::modes {

namespace {
const double kSqrt3 = std::sqrt(3.0);

void check_k(double k) {
  if (!(k > 0) || !std::isfinite(k)) throw std::domain_error("modes: need k > 0");
}

// sqrt(3)/(2 eta_e^2 sqrt(eps) k^{5/2}), scaled
xreal rad_prefactor(double k, double eta_e, double eps) {
  xreal kk(k);
  xreal k52 = kk * kk * sqrt(kk);
  return xreal(kSqrt3 / (2.0 * std::sqrt(eps))) / (xreal(eta_e) * xreal(eta_e) * k52);
}

struct RadPoly {
  std::complex<double> v, vd;  // brackets of vt and vt' (vt' also carries k/sqrt3)
};

RadPoly rad_poly(double x, double th) {
  const double c = std::cos(th), s = std::sin(th), x2 = x * x;
  RadPoly r;
  r.v = {x2 * c - kSqrt3 * x * s, kSqrt3 * (1.0 - x2) * s - x * c};
  r.vd = {-x2 * s - kSqrt3 * x * c, kSqrt3 * (1.0 - x2) * c + x * s};
  return r;
}

void check_rad(double k, double eta, double eta_e, double eps) {
  check_k(k);
  if (!(eta_e < 0)) throw std::domain_error("mode_radiation: eta_e must be negative");
  if (!(eta >= eta_e) || !std::isfinite(eta)) throw std::domain_error("mode_radiation: need eta >= eta_e");
  if (!(eps > 0)) throw std::domain_error("mode_radiation: eps_inf must be > 0");
}
}  // namespace

double n_func(double y) {
  if (std::fabs(y) < 0.5) {
    // sum_{n>=1} (-1)^n y^{2n+1} 2n/(2n+1)!
    const double y2 = y * y;
    double term = y, res = 0.0;
    for (int n = 1; n < 20; ++n) {
      term *= -y2 / ((2.0 * n) * (2.0 * n + 1.0));
      res += term * (2.0 * n);
      if (std::fabs(term) < 1e-18 * std::fabs(res)) break;
    }
    return res;
  }
  return y * std::cos(y) - std::sin(y);
}

ModeState mode_sho(double omega, double t) {
  if (!(omega > 0)) throw std::domain_error("mode_sho: need omega > 0");
  ModeState s;
  s.k = omega;
  s.eta = t;
  std::complex<double> v = std::polar(1.0 / std::sqrt(2.0 * omega), -omega * t);
  s.v = v;
  s.v_dot = std::complex<double>(0.0, -omega) * v;
  return s;
}

ModeState mode_inflation(double k, double eta) {
  check_k(k);
  if (!(eta < 0) || !std::isfinite(eta)) throw std::domain_error("mode_inflation: need eta < 0");
  const double y = k * eta;
  const double c = std::cos(y), s = std::sin(y);
  const double re_e = c + y * s, im_e = n_func(y);
  const double re_d = re_e - y * y * c, im_d = im_e + y * y * s;
  const xreal xy(y);
  ModeState st;
  st.k = k;
  st.eta = eta;
  // v = -iE/(y sqrt(2k)),  v' = i sqrt(k/2) D / y^2
  st.v = xcomplex(std::complex<double>(im_e, -re_e)) * (xreal(1.0 / std::sqrt(2.0 * k)) / xy);
  st.v_dot = xcomplex(std::complex<double>(-im_d, re_d)) * (xreal(std::sqrt(0.5 * k)) / (xy * xy));
  return st;
}

xcomplex v_ddot_inflation(double k, double eta) {
  check_k(k);
  if (!(eta < 0)) throw std::domain_error("v_ddot_inflation: need eta < 0");
  // e^{-iy}(-y^2 + iy + 2 - 2i/y)/(sqrt(2k) eta^2)
  const double y = k * eta;
  std::complex<double> ph = std::polar(1.0, -y);
  // multiply through by y to keep the bracket bounded for tiny y
  std::complex<double> br(-y * y * y + 2.0 * y, y * y - 2.0);
  xreal scale = xreal(1.0 / std::sqrt(2.0 * k)) / (xreal(eta) * xreal(eta) * xreal(y));
  return xcomplex(ph * br) * scale;
}

ModeState mode_radiation_phase_free(double k, double eta, double eta_e, double eps_inf) {
  check_rad(k, eta, eta_e, eps_inf);
  const double x = k * eta_e;
  const double th = k * (eta - eta_e) / kSqrt3;
  RadPoly r = rad_poly(x, th);
  xreal p2 = ldexp(rad_prefactor(k, eta_e, eps_inf), 1);
  ModeState st;
  st.k = k;
  st.eta = eta;
  st.v = xcomplex(r.v) * p2;
  st.v_dot = xcomplex(r.vd) * (p2 * xreal(k / kSqrt3));
  return st;
}

ModeState mode_radiation(double k, double eta, double eta_e, double eps_inf) {
  ModeState st = mode_radiation_phase_free(k, eta, eta_e, eps_inf);
  std::complex<double> ph = std::polar(1.0, -k * eta_e);
  st.v = st.v * ph;
  st.v_dot = st.v_dot * ph;
  return st;
}

xcomplex v_ddot_radiation(double k, double eta, double eta_e, double eps_inf) {
  check_rad(k, eta, eta_e, eps_inf);
  const double x = k * eta_e, x2 = x * x;
  const double th = k * (eta - eta_e) / kSqrt3;
  const double c = std::cos(th), s = std::sin(th);
  // d/dtheta of the v' bracket
  std::complex<double> br(-x2 * c + kSqrt3 * x * s, -kSqrt3 * (1.0 - x2) * s + x * c);
  xreal scale = ldexp(rad_prefactor(k, eta_e, eps_inf), 1) * xreal(k * k / 3.0);
  return xcomplex(br * std::polar(1.0, -x)) * scale;
}

xcomplex wronskian(const ModeState& s) {
  // v v'* - v* v' = 2i Im(v v'*) = 2i (Im v Re v' - Re v Im v')
  xreal im = s.v.imag() * s.v_dot.real() - s.v.real() * s.v_dot.imag();
  return xcomplex(std::complex<double>(0.0, 2.0 * im.m), im.e);
}

Curvature curvature_inflation(double k, double eta, const background::CosmoParams& p) {
  ModeState st = mode_inflation(k, eta);
  // z = a sqrt(2 eps), a = -1/(H eta)
  xreal z = xreal(std::sqrt(2.0 * p.eps_inf)) / (xreal(-p.h_inf) * xreal(eta));
  Curvature c;
  c.r = st.v / z;
  // (v' - (z'/z) v)/z with z'/z = -1/eta collapses to -i sqrt(k/2) e^{-iy}
  c.r_dot = xcomplex(std::polar(1.0, -k * eta) * std::complex<double>(0.0, -1.0)) * (xreal(std::sqrt(0.5 * k)) / z);
  return c;
}

Curvature curvature_radiation(double k, double eta, const background::CosmoParams& p) {
  const double ee = p.eta_e;
  check_rad(k, eta, ee, p.eps_inf);
  ModeState st = mode_radiation(k, eta, ee, p.eps_inf);
  const double s_ = eta - 2.0 * ee;  // a = s/(H eta_e^2), z'/z = 1/s
  xreal a = xreal(s_) / (xreal(p.h_inf) * xreal(ee) * xreal(ee));
  xreal z = a * xreal(2.0 * kSqrt3);
  Curvature c;
  c.r = st.v / z;
  // (vt' s - vt) expanded so the O(1) pieces cancel analytically
  const double x = k * ee, x2 = x * x, x3 = x2 * x;
  const double th = k * (eta - ee) / kSqrt3;
  const double cs = std::cos(th), sn = std::sin(th), nt = n_func(th);
  std::complex<double> br(-3.0 * kSqrt3 * x * nt + (kSqrt3 * x3 - 3.0 * th * x2) * sn,
                          3.0 * kSqrt3 * nt + 3.0 * (x3 - kSqrt3 * th * x2) * cs + (3.0 * th * x + 2.0 * kSqrt3 * x2) * sn);
  xreal pref = ldexp(rad_prefactor(k, ee, p.eps_inf), 1) * xreal(1.0 / 3.0);
  c.r_dot = xcomplex(br * std::polar(1.0, -x)) * (pref / (xreal(s_) * z));
  return c;
}

ModeState mode(background::EraTag era, double k, double eta, const background::CosmoParams& p) {
  if (era == background::EraTag::Inflation) return mode_inflation(k, eta);
  return mode_radiation(k, eta, p.eta_e, p.eps_inf);
}

}  // namespace csl::modes
