// Literal, precision-generic versions of the mode functions and kernels.
//
// Everything here is written exactly as the textbook expressions read: products
// of mode functions, the b/d/f/g bilinears, and the long closed-form kernel
// expressions.  In double these cancel catastrophically at superhorizon
// arguments; they exist as (a) the transcription route at moderate arguments
// and (b) a high-precision oracle when instantiated with an MPFR real.
//
// T must support + - * /, unary -, and sqrt/sin/cos/fabs found by ADL (or std).
#pragma once

#include <cmath>

namespace csl::kernels::generic {

template <class T>
struct cplx {
  T re{}, im{};
  cplx() = default;
  cplx(T r) : re(r), im(0) {}  // NOLINT
  cplx(T r, T i) : re(r), im(i) {}
};

template <class T> cplx<T> operator+(const cplx<T>& a, const cplx<T>& b) { return {a.re + b.re, a.im + b.im}; }
template <class T> cplx<T> operator-(const cplx<T>& a, const cplx<T>& b) { return {a.re - b.re, a.im - b.im}; }
template <class T> cplx<T> operator-(const cplx<T>& a) { return {-a.re, -a.im}; }
template <class T> cplx<T> operator*(const cplx<T>& a, const cplx<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T> cplx<T> operator*(const cplx<T>& a, const T& s) { return {a.re * s, a.im * s}; }
template <class T> cplx<T> operator*(const T& s, const cplx<T>& a) { return {a.re * s, a.im * s}; }
template <class T> cplx<T> operator/(const cplx<T>& a, const T& s) { return {a.re / s, a.im / s}; }
template <class T> cplx<T> conj(const cplx<T>& a) { return {a.re, -a.im}; }
template <class T> T norm(const cplx<T>& a) { return a.re * a.re + a.im * a.im; }
template <class T> cplx<T> expi(const T& phi) {
  using std::cos;
  using std::sin;
  return {cos(phi), sin(phi)};
}
template <class T> cplx<T> I() { return {T(0), T(1)}; }

template <class T>
struct Mode {
  cplx<T> v, vd;
};

// e^{-ik eta}(1 - i/(k eta))/sqrt(2k) and its derivative
template <class T>
Mode<T> v_inflation(const T& k, const T& eta) {
  using std::sqrt;
  const cplx<T> ph = expi<T>(-k * eta);
  const T n = 1 / sqrt(2 * k);
  Mode<T> m;
  m.v = ph * cplx<T>(T(1), -1 / (k * eta)) * n;
  m.vd = ph * cplx<T>(-1 / eta, -k + 1 / (k * eta * eta)) * n;
  return m;
}

// matched radiation-era mode, two-phase form P (A e^{-i theta} + B e^{i theta})
template <class T>
Mode<T> v_radiation(const T& k, const T& eta, const T& ee, const T& eps) {
  using std::sqrt;
  const T s3 = sqrt(T(3));
  const T x = k * ee;
  const cplx<T> P = expi<T>(-x) * (s3 / (2 * ee * ee * sqrt(eps) * k * k * sqrt(k)));
  const cplx<T> A((1 + s3) * x * x - s3, -(1 + s3) * x);
  const cplx<T> B((1 - s3) * x * x + s3, -(1 - s3) * x);
  const T th = k * (eta - ee) / s3;
  const cplx<T> em = expi<T>(-th), ep = expi<T>(th);
  const T w = k / s3;
  Mode<T> m;
  m.v = P * (A * em + B * ep);
  m.vd = P * (cplx<T>(T(0), -w) * A * em + cplx<T>(T(0), w) * B * ep);
  return m;
}

enum class Era { Inflation, Radiation };

template <class T>
struct Setup {
  Era era;
  T eta_e;  // end of inflation
  T eps;    // eps_inf (radiation modes)
};

template <class T>
Mode<T> v_era(const Setup<T>& s, const T& k, const T& eta) {
  return s.era == Era::Inflation ? v_inflation(k, eta) : v_radiation(k, eta, s.eta_e, s.eps);
}

template <class T>
T coupling(const Setup<T>& s, const T& p, const T& q, const T& ct, const T& eta) {
  return s.era == Era::Inflation ? p * q * ct + 2 / (eta * eta) : p * q * ct / 3;
}

// Re[b^{pq} d^{qp} (f^{qq}_end)^* - |b^{pq}|^2 g^{pp}_end]
template <class T>
T F(const Setup<T>& s, const T& p, const T& q, const T& ct, const T& eta, const T& eta_end) {
  const T c = coupling(s, p, q, ct, eta);
  const Mode<T> mp = v_era(s, p, eta), mq = v_era(s, q, eta);
  const cplx<T> b = mp.vd * mq.vd - mp.v * mq.v * c;
  const cplx<T> d = mq.vd * conj(mp.vd) - mq.v * conj(mp.v) * c;
  const cplx<T> wq = v_era(s, q, eta_end).v, wp = v_era(s, p, eta_end).v;
  return (b * d * conj(wq * wq)).re - norm(b) * norm(wp);
}

// per-external-mode kernel: same, with g^{qq}_end in the second term
template <class T>
T K(const Setup<T>& s, const T& p, const T& q, const T& ct, const T& eta, const T& eta_end) {
  const T c = coupling(s, p, q, ct, eta);
  const Mode<T> mp = v_era(s, p, eta), mq = v_era(s, q, eta);
  const cplx<T> b = mp.vd * mq.vd - mp.v * mq.v * c;
  const cplx<T> d = mq.vd * conj(mp.vd) - mq.v * conj(mp.v) * c;
  const cplx<T> wq = v_era(s, q, eta_end).v;
  return (b * d * conj(wq * wq)).re - norm(b) * norm(wq);
}

template <class T>
T F_sym(const Setup<T>& s, const T& p, const T& q, const T& ct, const T& eta, const T& eta_end) {
  return (F(s, p, q, ct, eta, eta_end) + F(s, q, p, ct, eta, eta_end)) / 2;
}

// Long-form inflation kernel (evaluation time eta_e); equals F.
template <class T>
T transcribed_inflation(const T& p, const T& q, const T& ct, const T& e, const T& ee) {
  const T pq = p * q * ct;
  const T e2 = e * e;
  auto C = [](const T& r, const T& im) { return cplx<T>(r, im); };
  const cplx<T> B1 = C(-e2 * p * p + 1, e * p) * C(e2 * q * q - 1, -e * q) - C(e * p, T(-1)) * C(e * q, T(-1)) * (e2 * pq + 2);
  const cplx<T> B2 = C(e2 * p * p - 1, e * p) * C(e2 * q * q - 1, -e * q) - C(e * p, T(1)) * C(e * q, T(-1)) * (e2 * pq + 2);
  const cplx<T> B3 = -(C(e2 * p * p - 1, e * p) * C(e2 * q * q - 1, e * q)) - C(e * p, T(1)) * C(e * q, T(1)) * (e2 * pq + 2);
  const T e8 = e2 * e2 * e2 * e2;
  const cplx<T> a = C(T(1), 1 / (ee * q));
  const cplx<T> t1 = a * a * expi<T>(-2 * q * (e - ee)) * B1 * B2 / (8 * e8 * p * p * p * q * q * q * q);
  const T bb = 1 + 1 / (ee * ee * p * p);  // (1 - i/(ee p))(1 + i/(ee p))
  const cplx<T> t2 = B1 * B3 * (bb / (8 * e8 * p * p * p * p * q * q * q));
  return (t1 - t2).re;
}

// Long-form radiation kernel (evaluation time er).  Algebraically this is the
// per-external-mode kernel K, not F (the g term carries q, not p).
template <class T>
T transcribed_radiation(const T& p, const T& q, const T& ct, const T& e, const T& ee, const T& er, const T& eps) {
  using std::sqrt;
  const T s = p * q * ct;
  const T s3 = sqrt(T(3));
  auto E = [&](const T& z) { return expi<T>(2 * z / s3); };
  auto C = [](const T& r, const T& im) { return cplx<T>(r, im); };
  const T p2 = p * p, q2 = q * q, q3 = q2 * q, p5 = p2 * p2 * p;
  const T ee2 = ee * ee, ee3 = ee2 * ee, ee4 = ee2 * ee2;
  const T pp = p2 * q2 - s * s;
  const T pplus = (p * q + s) * (p * q + s), pminus = (-p * q + s) * (-p * q + s);
  // 2 p ee (p^3 ee^3 - 2 p ee -/+ sqrt3 i) + 3
  const cplx<T> Wm = C(2 * p * ee * (p * p2 * ee3 - 2 * p * ee) + 3, -2 * p * ee * s3);
  const cplx<T> Wp = C(2 * p * ee * (p * p2 * ee3 - 2 * p * ee) + 3, 2 * p * ee * s3);
  const T Q4 = 4 * p2 * p2 * ee4 - 2 * p2 * ee2 + 3;
  // -2 q ee (q^3 ee^3 - 2 q ee + sqrt3 i) - 3  and  2 q ee(-q^3 ee^3 + 2 q ee + sqrt3 i) - 3
  const cplx<T> U1 = C(-2 * q * ee * (q * q2 * ee3 - 2 * q * ee) - 3, -2 * q * ee * s3);
  const cplx<T> U2 = C(2 * q * ee * (-q * q2 * ee3 + 2 * q * ee) - 3, 2 * q * ee * s3);
  const T M = 4 * p2 * p2 * q3 * pplus * ee4 - 2 * p2 * q2 * (2 * s * p * p2 + q3 * p2 + q * s * s) * ee2 +
              3 * (2 * s * p5 + q2 * q3 * p2 + q3 * s * s);
  cplx<T> tot = E((p + q) * (e - ee)) * U1 * (4 * s * p5);
  tot = tot + E(p * (e - ee) + q * (e + 2 * er - 3 * ee)) * U2 * (4 * s * p5);
  tot = tot + E((p + 2 * q) * (e - ee)) * (2 * q3 * pp * Q4);
  tot = tot + E(p * e + 2 * q * er - (p + 2 * q) * ee) * (2 * q3 * pp * Q4);
  tot = tot + E(p * (e - ee) + q * (e + er - 2 * ee)) * (4 * M);
  tot = tot + E(2 * (p * e + q * er - (p + q) * ee)) * Wm * (q3 * pminus);
  tot = tot + E(2 * (p + q) * (e - ee)) * Wm * (q3 * pplus);
  tot = tot + E(2 * p * e + q * e + q * er - 2 * (p + q) * ee) * Wm * (2 * q3 * pp);
  tot = tot + E(2 * q * (e - ee)) * Wp * (q3 * pminus);
  tot = tot + E(2 * q * (er - ee)) * Wp * (q3 * pplus);
  tot = tot + E(q * (e + er - 2 * ee)) * Wp * (2 * q3 * pp);
  const T q5 = q2 * q3;
  const cplx<T> pre =
      expi<T>(-2 * (p * (e - ee) + q * (e + er - 2 * ee)) / s3) * (T(-9) / (8 * p5 * q5 * eps * eps * eps * ee4));
  return (pre * tot).re;
}

// Green's function G(e1,e2) = Im[v(e1) v*(e2)] and d/de1, literal
template <class T>
void green_literal(const Setup<T>& s, const T& k, const T& e1, const T& e2, T& g0, T& g1) {
  const Mode<T> a = v_era(s, k, e1);
  const cplx<T> b = v_era(s, k, e2).v;
  g0 = (a.v * conj(b)).im;
  g1 = (a.vd * conj(b)).im;
}

// linear-operator kernel: chi = alpha v + beta v', F = chi*^2 f + chi^2 f* - |chi|^2 (g + g*)
template <class T>
T F_linear(const T& q, const T& eta, const T& ee, const T& h, const T& eps, const T& eps2) {
  using std::sqrt;
  const T pre = h * h * h * eps / sqrt(2 * eps);
  const T y2 = eta * eta * q * q;
  const T al = pre * eta * (-6 * eps * (eps2 / 2 + 1) / y2 + eps2 + 8);
  const T be = -pre * eta * eta * (6 * eps / y2 - 2);
  const Mode<T> m = v_inflation(q, eta);
  const cplx<T> chi = m.v * al + m.vd * be;
  const cplx<T> w = v_inflation(q, ee).v;
  const cplx<T> f = w * w;
  const T g = norm(w);
  return (conj(chi) * conj(chi) * f + chi * chi * conj(f)).re - norm(chi) * (2 * g);
}

}  // namespace csl::kernels::generic
