// Quadrature building blocks: Gauss-Legendre panels and the analytic
// angular moments of the collapse Gaussian.
#pragma once

#include <functional>
#include <vector>

#include "csl/xnum.hpp"

namespace csl::quad {

constexpr int kPanelOrder = 8;

struct Nodes {
  std::vector<double> x;  // abscissae (in the integration variable)
  std::vector<double> w;  // weights
  void clear() { x.clear(); w.clear(); }
  std::size_t size() const { return x.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1] (cached; thread-safe after first use)
const Nodes& gauss_legendre(int n);

// append `panels` equal GL panels of order n on [a, b]
void append_panels(Nodes& out, double a, double b, int panels, int n = kPanelOrder);

// M_n(beta) = int_0^2 e^{-beta w} w^n dw, n = 0, 1, 2, beta >= 0
struct Moments {
  xreal m0, m1, m2;
};
Moments angular_moments(double beta);

// the same moments by GL on [-1,1] in cos(theta) (cross-check route);
// panels are equal slices of tau = ln(w + 1/beta) so steep exponentials resolve;
// `panels` per ~4 units of tau
Moments angular_moments_gl(double beta, int order, int panels = 4);

}  // namespace csl::quad
