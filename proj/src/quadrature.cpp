#include "csl/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace csl::quad {

const Nodes& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Nodes> cache;
  if (n < 2) throw std::invalid_argument("gauss_legendre: order must be >= 2");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
  if (!t) throw std::runtime_error("gauss_legendre: allocation failed");
  Nodes nd;
  for (int i = 0; i < n; ++i) {
    double xi = 0, wi = 0;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &xi, &wi, t);
    nd.x.push_back(xi);
    nd.w.push_back(wi);
  }
  gsl_integration_glfixed_table_free(t);
  return cache.emplace(n, std::move(nd)).first->second;
}

void append_panels(Nodes& out, double a, double b, int panels, int n) {
  if (panels < 1) panels = 1;
  const Nodes& g = gauss_legendre(n);
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h, mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < g.size(); ++i) {
      out.x.push_back(mid + 0.5 * h * g.x[i]);
      out.w.push_back(0.5 * h * g.w[i]);
    }
  }
}

Moments angular_moments(double beta) {
  if (!(beta >= 0) || !std::isfinite(beta)) throw std::domain_error("angular_moments: beta must be finite, >= 0");
  Moments m;
  if (2.0 * beta < 1.0) {
    // sum_j (-beta)^j/j! 2^{n+j+1}/(n+j+1)
    double s0 = 0, s1 = 0, s2 = 0, t = 1.0, p2 = 2.0;
    for (int j = 0; j < 40; ++j) {
      s0 += t * p2 / (j + 1);
      s1 += t * 2.0 * p2 / (j + 2);
      s2 += t * 4.0 * p2 / (j + 3);
      t *= -beta / (j + 1);
      p2 *= 2.0;
      if (std::fabs(t * p2) < 1e-18) break;
    }
    m.m0 = s0;
    m.m1 = s1;
    m.m2 = s2;
    return m;
  }
  const double e = std::exp(-2.0 * beta);
  const xreal b(beta);
  m.m0 = xreal(-std::expm1(-2.0 * beta)) / b;
  m.m1 = xreal(1.0 - e * (1.0 + 2.0 * beta)) / (b * b);
  m.m2 = xreal(2.0 - e * (2.0 + 4.0 * beta + 4.0 * beta * beta)) / (b * b * b);
  return m;
}

Moments angular_moments_gl(double beta, int order, int panels) {
  // w = 1 + ct in [0, 2]; substitute w = e^tau - c with c = 1/max(beta, 1)
  const double c = 1.0 / std::max(beta, 1.0);
  Nodes nd;
  // the tau interval grows like ln(beta); keep the panel length bounded
  const double len = std::log(2.0 + c) - std::log(c);
  append_panels(nd, std::log(c), std::log(2.0 + c), panels * std::max(1, static_cast<int>(std::ceil(len / 4.0))), order);
  double s0 = 0, s1 = 0, s2 = 0;
  for (std::size_t i = 0; i < nd.size(); ++i) {
    const double et = std::exp(nd.x[i]);
    const double w = et - c;
    const double f = nd.w[i] * et * std::exp(-beta * w);
    s0 += f;
    s1 += f * w;
    s2 += f * w * w;
  }
  return {xreal(s0), xreal(s1), xreal(s2)};
}

}  // namespace csl::quad
