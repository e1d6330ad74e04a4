#pragma once

#include <cmath>

#include "csl/xnum.hpp"

inline double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
inline double rel(const csl::xreal& a, double b) { return csl::rel_diff(a, csl::xreal(b)); }
