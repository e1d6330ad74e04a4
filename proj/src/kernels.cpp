#include "csl/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "csl/kernels_generic.hpp"

namespace csl::kernels {

using modes::ModeState;

namespace {

const double kSqrt3 = std::sqrt(3.0);

void check_args(EraTag era, double p, double q, double ct, double eta, const CosmoParams& cp) {
  if (!(p > 0) || !(q > 0) || !std::isfinite(p) || !std::isfinite(q))
    throw std::domain_error("kernel: need p, q > 0");
  if (!(ct >= -1.0 && ct <= 1.0)) throw std::domain_error("kernel: cos(theta) outside [-1, 1]");
  if (era == EraTag::Inflation) {
    if (!(eta < 0)) throw std::domain_error("kernel: inflation needs eta < 0");
  } else if (!(eta >= cp.eta_e)) {
    throw std::domain_error("kernel: radiation needs eta >= eta_e");
  }
}

// phase-free modes are enough wherever the global phases cancel
ModeState mode_pf(EraTag era, double k, double eta, const CosmoParams& cp) {
  if (era == EraTag::Inflation) return modes::mode_inflation(k, eta);
  return modes::mode_radiation_phase_free(k, eta, cp.eta_e, cp.eps_inf);
}

// w_p w_q = Im(v'v*)^2
xreal omega2(EraTag era, const CosmoParams& cp) {
  double w = era == EraTag::Inflation ? modes::im_vdot_vstar_inflation() : modes::im_vdot_vstar_radiation(cp.eps_inf);
  return xreal(w * w);
}

xreal re(const xcomplex& z) { return z.real(); }

// g^{qq}_end - g^{pp}_end
xreal delta_g(EraTag era, double p, double q, double eta_end, const CosmoParams& cp) {
  if (era == EraTag::Inflation) {
    // |v_k|^2 = 1/(2k) + 1/(2 k^3 eta^2); difference factored through (p - q)
    xreal xp(p), xq(q), e2 = xreal(eta_end) * xreal(eta_end);
    xreal t = (xp * xp + xp * xq + xq * xq) / (xreal(2.0) * e2 * pow(xp * xq, 3)) + xreal(1.0) / (xreal(2.0) * xp * xq);
    return xreal(p - q) * t;
  }
  return mode_pf(era, q, eta_end, cp).v.norm() - mode_pf(era, p, eta_end, cp).v.norm();
}

struct XParts {
  xcomplex x0;  // v_p' G1 - c0 v_p G0
  xcomplex y;   // v_p G0
  xreal c0, c1;
  xreal w2;     // |v_q(eta_end)|^2
};

XParts x_parts(EraTag era, double p, double q, double eta, double eta_end, const CosmoParams& cp) {
  XParts r;
  ModeState mp = mode_pf(era, p, eta, cp);
  xreal g0, g1;
  green(era, q, eta, eta_end, cp, g0, g1);
  if (era == EraTag::Inflation) {
    r.c0 = xreal(2.0) / (xreal(eta) * xreal(eta));
    r.c1 = xreal(p) * xreal(q);
  } else {
    r.c0 = xreal();
    r.c1 = xreal(p) * xreal(q) / xreal(3.0);
  }
  r.y = mp.v * g0;
  r.x0 = mp.v_dot * g1 - r.y * r.c0;
  r.w2 = mode_pf(era, q, eta_end, cp).v.norm();
  return r;
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::ExactQuadratic: return "exact";
    case Variant::LeadingQuadratic: return "leading";
    case Variant::LinearizedAppE: return "linear";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "exact") return Variant::ExactQuadratic;
  if (s == "leading") return Variant::LeadingQuadratic;
  if (s == "linear") return Variant::LinearizedAppE;
  throw std::invalid_argument("unknown kernel variant '" + s + "'");
}

xreal coupling(EraTag era, double p, double q, double ct, double eta) {
  xreal pq = xreal(p) * xreal(q) * xreal(ct);
  if (era == EraTag::Inflation) return pq + xreal(2.0) / (xreal(eta) * xreal(eta));
  return pq / xreal(3.0);
}

BilinearCoeffs bilinear_coeffs(EraTag era, double p, double q, double ct, double eta, const CosmoParams& cp) {
  check_args(era, p, q, ct, eta, cp);
  ModeState mp = modes::mode(era, p, eta, cp), mq = modes::mode(era, q, eta, cp);
  xreal c = coupling(era, p, q, ct, eta);
  BilinearCoeffs r;
  r.f = mp.v * mq.v;
  r.g = mp.v * conj(mq.v);
  r.j = mp.v_dot * mq.v_dot;
  r.l = mp.v_dot * conj(mq.v_dot);
  r.b = r.j - r.f * c;
  r.d = mq.v_dot * conj(mp.v_dot) - mq.v * conj(mp.v) * c;
  return r;
}

void green(EraTag era, double k, double e1, double e2, const CosmoParams& cp, xreal& g0, xreal& g1) {
  if (era == EraTag::Inflation) {
    const double y1 = k * e1, y2 = k * e2, D = k * (e1 - e2);
    const double s = std::sin(D), c = std::cos(D), n = modes::n_func(D);
    const xreal x1(y1), x2(y2);
    g0 = xreal(n - y1 * y2 * s) / (xreal(2.0 * k) * x1 * x2);
    g1 = xreal(-y1 * D * s - n) / (xreal(2.0) * x1 * x1 * x2) + xreal(-0.5 * c);
    return;
  }
  const double a = k * (e1 - e2) / kSqrt3;
  const double w = 3.0 / cp.eps_inf;
  g0 = xreal(-w * kSqrt3 * std::sin(a)) / xreal(k);
  g1 = xreal(-w * std::cos(a));
}

xreal kernel_external(EraTag era, double p, double q, double ct, double eta, double eta_end, const CosmoParams& cp) {
  check_args(era, p, q, ct, eta, cp);
  XParts x = x_parts(era, p, q, eta, eta_end, cp);
  xreal c = x.c0 + x.c1 * xreal(ct);
  xcomplex X = x.x0 - x.y * (x.c1 * xreal(ct));
  return ldexp(-(X.norm() + c * omega2(era, cp) * x.w2), 1);
}

CtPoly kernel_external_ctpoly(EraTag era, double p, double q, double eta, double eta_end, const CosmoParams& cp) {
  check_args(era, p, q, 0.0, eta, cp);
  XParts x = x_parts(era, p, q, eta, eta_end, cp);
  xreal om = omega2(era, cp);
  CtPoly r;
  // -2|x0 - ct c1 y|^2 - 2 (c0 + c1 ct) om w2
  r.a0 = ldexp(-(x.x0.norm() + x.c0 * om * x.w2), 1);
  r.a1 = ldexp(x.c1 * (ldexp(re(x.x0 * conj(x.y)), 1) - om * x.w2), 1);
  r.a2 = ldexp(-(x.c1 * x.c1 * x.y.norm()), 1);
  return r;
}

KernelEval kernel_exact(EraTag era, double p, double q, double ct, double eta, double eta_end, const CosmoParams& cp) {
  xreal k = kernel_external(era, p, q, ct, eta, eta_end, cp);
  ModeState mp = mode_pf(era, p, eta, cp), mq = mode_pf(era, q, eta, cp);
  xcomplex b = mp.v_dot * mq.v_dot - mp.v * mq.v * coupling(era, p, q, ct, eta);
  return {era, Variant::ExactQuadratic, k + b.norm() * delta_g(era, p, q, eta_end, cp)};
}

xreal kernel_symmetric(EraTag era, double p, double q, double ct, double eta, double eta_end, const CosmoParams& cp) {
  return ldexp(kernel_external(era, p, q, ct, eta, eta_end, cp) + kernel_external(era, q, p, ct, eta, eta_end, cp), -1);
}

xreal kernel_composed(EraTag era, double p, double q, double ct, double eta, double eta_end, const CosmoParams& cp) {
  BilinearCoeffs bc = bilinear_coeffs(era, p, q, ct, eta, cp);
  xcomplex wq = modes::mode(era, q, eta_end, cp).v, wp = modes::mode(era, p, eta_end, cp).v;
  return re(bc.b * bc.d * conj(wq * wq)) - bc.b.norm() * wp.norm();
}

xreal kernel_external_composed(EraTag era, double p, double q, double ct, double eta, double eta_end,
                               const CosmoParams& cp) {
  BilinearCoeffs bc = bilinear_coeffs(era, p, q, ct, eta, cp);
  xcomplex wq = modes::mode(era, q, eta_end, cp).v;
  return re(bc.b * bc.d * conj(wq * wq)) - bc.b.norm() * wq.norm();
}

double kernel_transcribed(EraTag era, double p, double q, double ct, double eta, double eta_end, const CosmoParams& cp) {
  check_args(era, p, q, ct, eta, cp);
  if (era == EraTag::Inflation) return generic::transcribed_inflation<double>(p, q, ct, eta, eta_end);
  return generic::transcribed_radiation<double>(p, q, ct, eta, cp.eta_e, eta_end, cp.eps_inf);
}

KernelEval kernel_leading(EraTag era, double p, double q, double eta, const CosmoParams& cp, LeadingTerms terms,
                          LeadingForm form) {
  if (!(p > 0) || !(q > 0)) throw std::domain_error("kernel_leading: need p, q > 0");
  const xreal ee(cp.eta_e), e(eta);
  if (era == EraTag::Radiation) {
    // -54/(eps^3 eta_e^4 k^3) with k the internal momentum (p) for K(q;p)
    const xreal pre = xreal(-54.0) / (pow(xreal(cp.eps_inf), 3) * pow(ee, 4));
    auto one = [&](double k) { return pre / pow(xreal(k), 3); };
    xreal v;
    switch (form) {
      case LeadingForm::Effective: v = one(q); break;
      case LeadingForm::ExternalMode: v = one(p); break;
      case LeadingForm::Symmetrized: v = ldexp(one(p) + one(q), -1); break;
    }
    return {era, Variant::LeadingQuadratic, v};
  }
  if (!(eta < 0)) throw std::domain_error("kernel_leading: inflation needs eta < 0");
  const xreal base = xreal(1.0) / (e * e * ee * ee);
  // extra eta_e-suppressed terms (per 1/k^3)
  xreal extra;
  if (terms == LeadingTerms::Four)
    extra = -pow(ee, 4) / (xreal(36.0) * pow(e, 8)) + xreal(2.0) * ee / (xreal(9.0) * pow(e, 5));
  auto ik3 = [](double k) { return xreal(1.0) / pow(xreal(k), 3); };
  xreal v;
  switch (form) {
    case LeadingForm::ExternalMode:  // -1/(2 q^3) - 4/(9 p^3), plus extras on p
      v = -(ldexp(ik3(q), -1) + xreal(4.0 / 9.0) * ik3(p)) * base + extra * ik3(p);
      break;
    case LeadingForm::Symmetrized:
      v = (ik3(p) + ik3(q)) * (xreal(-17.0 / 36.0) * base + ldexp(extra, -1));
      break;
    case LeadingForm::Effective:
      v = ik3(q) * (xreal(-17.0 / 18.0) * base + extra);
      break;
  }
  return {era, Variant::LeadingQuadratic, v};
}

Chi chi_linear(double k, double eta, const CosmoParams& cp) {
  if (!(k > 0) || !(eta < 0)) throw std::domain_error("chi_linear: need k > 0, eta < 0");
  const double eps = cp.eps_inf, e2 = cp.eps2;
  const xreal pre = pow(xreal(cp.h_inf), 3) * xreal(eps / std::sqrt(2.0 * eps));
  const xreal iy2 = xreal(1.0) / (xreal(k * eta) * xreal(k * eta));
  Chi c;
  c.alpha = pre * xreal(eta) * (xreal(-6.0 * eps * (e2 / 2.0 + 1.0)) * iy2 + xreal(e2 + 8.0));
  c.beta = -(pre * xreal(eta) * xreal(eta) * (xreal(6.0 * eps) * iy2 - xreal(2.0)));
  ModeState m = modes::mode_inflation(k, eta);
  c.chi = m.v * c.alpha + m.v_dot * c.beta;
  return c;
}

KernelEval kernel_linear(double q, double eta, double eta_e, const CosmoParams& cp, bool leading) {
  if (!(q > 0) || !(eta < 0) || !(eta_e < 0)) throw std::domain_error("kernel_linear: need q > 0, eta, eta_e < 0");
  if (leading) {
    const double eps = cp.eps_inf;
    xreal v = xreal(-18.0 * eps * eps * eps) * pow(xreal(cp.h_inf), 6) * xreal(eta) * xreal(eta) /
              (pow(xreal(q), 4) * xreal(eta_e) * xreal(eta_e));
    return {EraTag::Inflation, Variant::LinearizedAppE, v};
  }
  // F = 2Re[(chi* w)^2] - 2|chi* w|^2 = -4 Im(chi* w)^2 = -4 (alpha G + beta dG)^2
  Chi c = chi_linear(q, eta, cp);
  xreal g0, g1;
  green(EraTag::Inflation, q, eta, eta_e, cp, g0, g1);
  xreal s = c.alpha * g0 + c.beta * g1;
  return {EraTag::Inflation, Variant::LinearizedAppE, ldexp(-(s * s), 2)};
}

xreal kernel_linear_composed(double q, double eta, double eta_e, const CosmoParams& cp) {
  Chi c = chi_linear(q, eta, cp);
  xcomplex w = modes::mode_inflation(q, eta_e).v;
  xcomplex f = w * w;
  xcomplex cc = conj(c.chi);
  return re(cc * cc * f + c.chi * c.chi * conj(f)) - c.chi.norm() * ldexp(w.norm(), 1);
}

}  // namespace csl::kernels
