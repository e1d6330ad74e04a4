// Scaled (mantissa, binary exponent) reals and complexes.
//
// Values are m * 2^e with |m| in [0.5, 1) (or m == 0).  Complex numbers share a
// single exponent, normalised on the larger component.  Enough to carry kernel
// intermediates far beyond double range; not a general bignum.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace csl {

struct xreal {
  double m = 0.0;
  std::int64_t e = 0;

  xreal() = default;
  xreal(double v) { set(v, 0); }  // NOLINT: implicit on purpose
  xreal(double mant, std::int64_t ex) { set(mant, ex); }

  void set(double mant, std::int64_t ex) {
    if (mant == 0.0 || !std::isfinite(mant)) {
      if (!std::isfinite(mant)) throw std::overflow_error("xreal: non-finite mantissa");
      m = 0.0;
      e = 0;
      return;
    }
    int k = 0;
    m = std::frexp(mant, &k);
    e = ex + k;
  }

  bool is_zero() const { return m == 0.0; }
  int sign() const { return (m > 0) - (m < 0); }

  // to double; throws if the value does not fit
  double to_double() const {
    if (m == 0.0) return 0.0;
    if (e > 1024) throw std::overflow_error("xreal: value exceeds double range");
    if (e < -1074) return 0.0;
    return std::ldexp(m, static_cast<int>(e));
  }
  // saturating variant (for diagnostics only)
  double to_double_sat() const {
    if (m == 0.0) return 0.0;
    if (e > 1024) return m > 0 ? HUGE_VAL : -HUGE_VAL;
    if (e < -1074) return 0.0;
    return std::ldexp(m, static_cast<int>(e));
  }

  double log10_abs() const {
    if (m == 0.0) return -HUGE_VAL;
    return std::log10(std::fabs(m)) + static_cast<double>(e) * 0.30102999566398119521;
  }
  // decimal split: value = d_mant * 10^d_exp with 1 <= |d_mant| < 10
  void decimal(double& d_mant, std::int64_t& d_exp) const;
  std::string str(int digits = 17) const;
};

xreal operator*(const xreal& a, const xreal& b);
xreal operator/(const xreal& a, const xreal& b);
xreal operator+(const xreal& a, const xreal& b);
inline xreal operator-(const xreal& a) { return xreal(-a.m, a.e); }
inline xreal operator-(const xreal& a, const xreal& b) { return a + (-b); }
inline xreal& operator*=(xreal& a, const xreal& b) { return a = a * b; }
inline xreal& operator+=(xreal& a, const xreal& b) { return a = a + b; }
inline xreal& operator-=(xreal& a, const xreal& b) { return a = a - b; }
inline xreal& operator/=(xreal& a, const xreal& b) { return a = a / b; }
inline xreal abs(const xreal& a) { return xreal(std::fabs(a.m), a.e); }
xreal sqrt(const xreal& a);
xreal ldexp(const xreal& a, std::int64_t k);
// integer power, exact exponent bookkeeping
xreal pow(const xreal& a, int n);
bool operator<(const xreal& a, const xreal& b);
inline bool operator>(const xreal& a, const xreal& b) { return b < a; }
// relative difference |a-b|/|b| as double (b != 0)
double rel_diff(const xreal& a, const xreal& b);
xreal from_log10(double lg, int sign = 1);

struct xcomplex {
  std::complex<double> m{0.0, 0.0};
  std::int64_t e = 0;

  xcomplex() = default;
  xcomplex(std::complex<double> z) { set(z, 0); }  // NOLINT
  xcomplex(std::complex<double> z, std::int64_t ex) { set(z, ex); }
  xcomplex(const xreal& r) { set({r.m, 0.0}, r.e); }  // NOLINT

  void set(std::complex<double> z, std::int64_t ex) {
    double big = std::max(std::fabs(z.real()), std::fabs(z.imag()));
    if (big == 0.0) {
      m = {0.0, 0.0};
      e = 0;
      return;
    }
    if (!std::isfinite(big)) throw std::overflow_error("xcomplex: non-finite mantissa");
    int k = 0;
    std::frexp(big, &k);
    m = {std::ldexp(z.real(), -k), std::ldexp(z.imag(), -k)};
    e = ex + k;
  }

  xreal real() const { return xreal(m.real(), e); }
  xreal imag() const { return xreal(m.imag(), e); }
  xcomplex conj() const { return xcomplex(std::conj(m), e); }
  xreal norm() const;  // |z|^2
  std::complex<double> to_complex() const;
};

xcomplex operator*(const xcomplex& a, const xcomplex& b);
xcomplex operator*(const xcomplex& a, const xreal& b);
inline xcomplex operator*(const xreal& b, const xcomplex& a) { return a * b; }
xcomplex operator+(const xcomplex& a, const xcomplex& b);
inline xcomplex operator-(const xcomplex& a) { return xcomplex(-a.m, a.e); }
inline xcomplex operator-(const xcomplex& a, const xcomplex& b) { return a + (-b); }
inline xcomplex conj(const xcomplex& a) { return a.conj(); }
inline xcomplex operator/(const xcomplex& a, const xreal& b) { return a * (xreal(1.0) / b); }
xcomplex operator*(const xcomplex& a, std::complex<double> b);

}  // namespace csl
