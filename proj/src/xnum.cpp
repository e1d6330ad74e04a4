#include "csl/xnum.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace csl {

namespace {
// beyond this exponent gap the smaller addend is below half an ulp
constexpr std::int64_t kGap = 110;
}

xreal operator*(const xreal& a, const xreal& b) {
  if (a.m == 0.0 || b.m == 0.0) return {};
  return xreal(a.m * b.m, a.e + b.e);
}

xreal operator/(const xreal& a, const xreal& b) {
  if (b.m == 0.0) throw std::domain_error("xreal: division by zero");
  if (a.m == 0.0) return {};
  return xreal(a.m / b.m, a.e - b.e);
}

xreal operator+(const xreal& a, const xreal& b) {
  if (a.m == 0.0) return b;
  if (b.m == 0.0) return a;
  if (a.e >= b.e) {
    std::int64_t d = a.e - b.e;
    if (d > kGap) return a;
    return xreal(a.m + std::ldexp(b.m, -static_cast<int>(d)), a.e);
  }
  std::int64_t d = b.e - a.e;
  if (d > kGap) return b;
  return xreal(b.m + std::ldexp(a.m, -static_cast<int>(d)), b.e);
}

xreal sqrt(const xreal& a) {
  if (a.m < 0) throw std::domain_error("xreal: sqrt of negative");
  if (a.m == 0.0) return {};
  // make the exponent even
  double m = a.m;
  std::int64_t e = a.e;
  if (e & 1) {
    m *= 2.0;
    e -= 1;
  }
  return xreal(std::sqrt(m), e / 2);
}

xreal ldexp(const xreal& a, std::int64_t k) {
  if (a.m == 0.0) return a;
  xreal r = a;
  r.e += k;
  return r;
}

xreal pow(const xreal& a, int n) {
  if (n == 0) return xreal(1.0);
  if (n < 0) return xreal(1.0) / pow(a, -n);
  xreal r(1.0), b = a;
  while (n) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

bool operator<(const xreal& a, const xreal& b) { return (a - b).m < 0.0; }

double rel_diff(const xreal& a, const xreal& b) {
  xreal d = (a - b) / b;
  return std::fabs(d.to_double_sat());
}

xreal from_log10(double lg, int sign) {
  // 10^lg = 2^(lg*log2(10)); split into integer and fractional binary exponent
  double l2 = lg * 3.32192809488736234787;
  double ip = std::floor(l2);
  return xreal(sign * std::exp2(l2 - ip), static_cast<std::int64_t>(ip));
}

void xreal::decimal(double& d_mant, std::int64_t& d_exp) const {
  if (m == 0.0) {
    d_mant = 0.0;
    d_exp = 0;
    return;
  }
  double lg = log10_abs();
  d_exp = static_cast<std::int64_t>(std::floor(lg));
  // recompute the mantissa from the binary form to keep full precision
  double l2_rest = static_cast<double>(e) - static_cast<double>(d_exp) * 3.32192809488736234787;
  double ip = std::floor(l2_rest);
  double frac = l2_rest - ip;
  d_mant = std::ldexp(m * std::exp2(frac), static_cast<int>(ip));
  // guard against the mantissa landing on 10 or just below 1 from rounding
  if (std::fabs(d_mant) >= 10.0) {
    d_mant /= 10.0;
    ++d_exp;
  } else if (std::fabs(d_mant) < 1.0) {
    d_mant *= 10.0;
    --d_exp;
  }
}

std::string xreal::str(int digits) const {
  if (m == 0.0) return "0";
  if (e > -1000 && e < 1000) return fmt::format("{:.{}e}", to_double(), digits - 1);
  double dm = 0;
  std::int64_t de = 0;
  decimal(dm, de);
  return fmt::format("{:.{}f}e{:+d}", dm, digits - 1, de);
}

xreal xcomplex::norm() const {
  return xreal(m.real() * m.real() + m.imag() * m.imag(), 2 * e);
}

std::complex<double> xcomplex::to_complex() const {
  if (m == 0.0) return {0.0, 0.0};
  if (e > 1024) throw std::overflow_error("xcomplex: value exceeds double range");
  int k = static_cast<int>(std::max<std::int64_t>(e, -2000));
  return {std::ldexp(m.real(), k), std::ldexp(m.imag(), k)};
}

xcomplex operator*(const xcomplex& a, const xcomplex& b) {
  return xcomplex(a.m * b.m, a.e + b.e);
}

xcomplex operator*(const xcomplex& a, const xreal& b) {
  return xcomplex(a.m * b.m, a.e + b.e);
}

xcomplex operator*(const xcomplex& a, std::complex<double> b) { return xcomplex(a.m * b, a.e); }

xcomplex operator+(const xcomplex& a, const xcomplex& b) {
  if (a.m == 0.0) return b;
  if (b.m == 0.0) return a;
  if (a.e >= b.e) {
    std::int64_t d = a.e - b.e;
    if (d > kGap) return a;
    int k = -static_cast<int>(d);
    return xcomplex(a.m + std::complex<double>(std::ldexp(b.m.real(), k), std::ldexp(b.m.imag(), k)),
                    a.e);
  }
  return b + a;
}

}  // namespace csl
