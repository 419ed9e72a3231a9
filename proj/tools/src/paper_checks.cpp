#include "shockcontract/cli/paper_checks.hpp"

#include "shockcontract/cli/output.hpp"
#include "shockcontract/criterion.hpp"
#include "shockcontract/numerics.hpp"

#include <cmath>
#include <sstream>

namespace shockcontract::cli {

namespace {

// Restricted matrix of the 3x3 example at the origin, family 2, in the
// basis (r_1, r_3) = (e_3, e_1).
Matrix example_closed_form(double alpha, double C) {
  Matrix m(2, 2);
  m << 2 * C - 6, 2 * alpha, 2 * alpha, -2 * C - 2;
  return m;
}

CheckRow restricted_matrix_row(double alpha) {
  const auto data = criterion_data(example3x3(alpha), Vector::Zero(3), Family{2});
  double err = 0.0;
  for (double C : {-3.0, 0.0, 1.0, 2.5}) {
    err = std::max(err, numerics::max_abs(data.restricted(C) - example_closed_form(alpha, C)));
  }
  return {"example3x3 restricted matrix alpha=" + fmt(alpha), err <= 1e-12, "max entry error " + fmt(err)};
}

CheckRow interval_row(double alpha) {
  const auto data = criterion_data(example3x3(alpha), Vector::Zero(3), Family{2});
  const auto rep = feasibility(data);
  // (C+1)(3-C) > alpha^2 with negative trace.
  const double disc = 4.0 - alpha * alpha;
  std::ostringstream d;
  bool pass = true;
  if (disc > 0) {
    const double lo = 1.0 - std::sqrt(disc);
    const double hi = 1.0 + std::sqrt(disc);
    pass = rep.feasible && std::abs(rep.c_lo - lo) < 1e-6 && std::abs(rep.c_hi - hi) < 1e-6;
    const double plo = std::abs(alpha) - 1.0;
    const double phi = 3.0 - std::abs(alpha);
    if (plo < phi) pass = pass && rep.c_lo <= plo && rep.c_hi >= phi;
    d << "interval (" << fmt(rep.c_lo) << ", " << fmt(rep.c_hi) << ") oracle (" << fmt(lo) << ", " << fmt(hi) << ")";
  } else {
    pass = !rep.feasible && rep.certified;
    d << "empty, min lambda_max " << fmt(rep.lambda_best) << " at C=" << fmt(rep.c_best);
  }
  return {"example3x3 feasible interval alpha=" + fmt(alpha), pass, d.str()};
}

CheckRow mhd_speeds_row() {
  const State u{{100.0, 1.0, 0.0, 0.0}};
  const auto sys = mhd2d(1.0, 5.0 / 3.0);
  const auto w = mhd_wave_data(1.0, 5.0 / 3.0, u);
  const auto eig = eigenstructure(sys, u);
  const Matrix J = flux_jacobian(sys, u);
  const double scale = std::pow(J.cwiseAbs().maxCoeff(), 4);
  double speed_err = 0.0;
  double poly = 0.0;
  for (Eigen::Index k = 0; k < 4; ++k) {
    speed_err = std::max(speed_err, std::abs(eig.eigenvalues(k) - w.speeds(k)) / std::abs(w.speeds(k)));
    const Matrix shifted = J - w.speeds(k) * Matrix::Identity(4, 4);
    poly = std::max(poly, std::abs(shifted.determinant()) / scale);
  }
  return {"mhd2d speeds", speed_err < 1e-9 && poly < 1e-9,
          "relative speed error " + fmt(speed_err) + ", characteristic residual " + fmt(poly)};
}

CheckRow mhd_infeasible_row() {
  const auto data = criterion_data(mhd2d(1.0, 5.0 / 3.0), State{{100.0, 1.0, 0.0, 0.0}}, Family{2});
  const auto rep = feasibility(data);
  return {"mhd2d infeasible on [-1e3, 1e3]", !rep.feasible && rep.certified && rep.bracket >= 1e3,
          "min lambda_max " + fmt(rep.lambda_best) + " at C=" + fmt(rep.c_best) + ", bracket " + fmt(rep.bracket)};
}

CheckRow convergence_row() {
  const auto rows = limit_convergence(example3x3(1.0), Vector::Zero(3), Family{2}, 1.0, {1e-2, 5e-3, 2.5e-3});
  bool pass = true;
  std::ostringstream d;
  d << "block errors";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    d << ' ' << fmt(rows[k].block_error);
    if (k) {
      const double ratio = rows[k - 1].block_error / rows[k].block_error;
      pass = pass && ratio >= 1.5 && ratio <= 2.5;
    }
  }
  const double ii = rows.back().ii_entry;
  pass = pass && std::abs(ii + 1.0) <= 0.05;
  d << ", (i,i) entry " << fmt(ii);
  return {"limit convergence example3x3 alpha=1", pass, d.str()};
}

}  // namespace

std::vector<CheckRow> paper_checks(int jobs) {
  std::vector<std::function<CheckRow()>> tasks;
  for (double alpha : {0.0, 1.0, 2.0, 3.9}) {
    tasks.emplace_back([alpha] { return restricted_matrix_row(alpha); });
    tasks.emplace_back([alpha] { return interval_row(alpha); });
  }
  tasks.emplace_back(mhd_speeds_row);
  tasks.emplace_back(mhd_infeasible_row);
  tasks.emplace_back(convergence_row);

  std::vector<CheckRow> rows(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t k) {
    try {
      rows[k] = tasks[k]();
    } catch (const std::exception& e) {
      rows[k] = {"task " + std::to_string(k), false, e.what()};
    }
  });
  return rows;
}

}  // namespace shockcontract::cli
