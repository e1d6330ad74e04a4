// Headline-number reproduction: closed-form chain, leading-kernel quadrature
// cross-checks, and the collapse-rate bound.
#pragma once

#include <string>
#include <vector>

#include "csl/config.hpp"

namespace csl::cli {

struct ReproRow {
  std::string name;
  double value = 0;   // signed value
  double lo = 0, hi = 0;  // accepted range for |value|; lo == hi == 0 means informational
  bool pass = true;
  std::string detail;
};

struct ReproReport {
  std::vector<ReproRow> rows;
  bool all_pass() const;
  std::string table() const;
};

ReproReport run_reproduce(const RunConfig& cfg, bool with_quadrature = true);

}  // namespace csl::cli
