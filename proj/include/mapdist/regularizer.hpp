#pragma once

#include <cstddef>

namespace mapdist {

/// Which per-term penalty the regularized criterion uses.
enum class PhiMode {
  /// (rho_i - rho_ci)^2 / rho_ci, the large-sample form with the constant
  /// factor folded into lambda.
  Approximate,
  /// Full Gaussian log-density term, including the (D - 1) / n shifts.
  Exact,
};

/// (probe_distance - interclass)^2 / interclass. Requires interclass > 0.
double phi_approx(double probe_distance, double interclass) noexcept;

/// (1/2n) ln(4 rho_ci + (pi + D - 1)/n)
///   + (rho_i - rho_ci - (D - 1)/n)^2 / (4 rho_ci + (D - 1)/n).
double phi_exact(double probe_distance, double interclass, std::size_t dim,
                 double scale) noexcept;

struct RegularizerParams {
  double scale = 100.0;  // n
  double lambda = 7.0;
  PhiMode mode = PhiMode::Approximate;
  std::size_t phi_dim = 0;  // D used by PhiMode::Exact
};

}  // namespace mapdist
