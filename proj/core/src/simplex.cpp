#include "gridstats/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gridstats/error.hpp"

namespace gridstats {

namespace {

double safe_eval(const std::function<double(std::span<const double>)>& f, const std::vector<double>& x) {
  const double v = f(x);
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

}  // namespace

SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& objective,
                               std::vector<double> start, std::span<const double> step,
                               const SimplexOptions& options) {
  const std::size_t dim = start.size();
  if (dim == 0 || step.size() != dim) throw Error("simplex: start and step dimensions differ");

  std::vector<std::vector<double>> vertices(dim + 1, start);
  for (std::size_t i = 0; i < dim; ++i) vertices[i + 1][i] += step[i];
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = safe_eval(objective, vertices[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  SimplexResult result;

  auto point_along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t j = 0; j < dim; ++j) out[j] = centroid[j] + t * (worst[j] - centroid[j]);
  };

  std::size_t iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    if (std::isfinite(values[worst]) && values[worst] - values[best] < options.f_tolerance) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += vertices[order[k]][j];
    for (double& c : centroid) c /= static_cast<double>(dim);

    point_along(-1.0, trial, vertices[worst]);
    const double reflected = safe_eval(objective, trial);

    if (reflected < values[best]) {
      point_along(-2.0, trial2, vertices[worst]);
      const double expanded = safe_eval(objective, trial2);
      if (expanded < reflected) {
        vertices[worst] = trial2;
        values[worst] = expanded;
      } else {
        vertices[worst] = trial;
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      vertices[worst] = trial;
      values[worst] = reflected;
      continue;
    }

    // Outside contraction when the reflection improved on the worst vertex,
    // inside contraction otherwise.
    const bool outside = reflected < values[worst];
    point_along(outside ? -0.5 : 0.5, trial2, vertices[worst]);
    const double contracted = safe_eval(objective, trial2);
    if (contracted < (outside ? reflected : values[worst])) {
      vertices[worst] = trial2;
      values[worst] = contracted;
      continue;
    }

    for (std::size_t k = 1; k <= dim; ++k) {
      auto& v = vertices[order[k]];
      for (std::size_t j = 0; j < dim; ++j) v[j] = vertices[best][j] + 0.5 * (v[j] - vertices[best][j]);
      values[order[k]] = safe_eval(objective, v);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best_index = static_cast<std::size_t>(best_it - values.begin());
  result.x = vertices[best_index];
  result.value = *best_it;
  result.iterations = iter;
  return result;
}

}  // namespace gridstats
