#pragma once

#include <string>
#include <vector>

namespace shockcontract::cli {

struct CheckRow {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Regression suite for the closed-form results on the 3x3 example and the
/// isentropic MHD state: restricted matrices and feasible intervals, MHD
/// speeds and infeasibility, and the small-shock limit convergence.
[[nodiscard]] std::vector<CheckRow> paper_checks(int jobs);

}  // namespace shockcontract::cli
