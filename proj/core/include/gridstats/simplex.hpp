#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gridstats {

struct SimplexOptions {
  std::size_t max_iterations = 2000;
  /// Converged once max f - min f over the simplex vertices falls below this.
  double f_tolerance = 1e-9;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Nelder-Mead minimization (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). The objective may return +inf for infeasible points.
SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& objective,
                               std::vector<double> start, std::span<const double> step,
                               const SimplexOptions& options = {});

}  // namespace gridstats
