#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>

namespace qkr {

template <std::size_t Dim>
struct SimplexResult {
  std::array<double, Dim> point{};
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead downhill simplex with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// Stops when max - min of the vertex values drops below value_tolerance or
/// after max_evaluations calls. The returned value never exceeds f(start).
template <std::size_t Dim, class F>
SimplexResult<Dim> nelder_mead(F&& f, const std::array<double, Dim>& start, double initial_step,
                               double value_tolerance, int max_evaluations) {
  using Point = std::array<double, Dim>;
  std::array<Point, Dim + 1> vertex;
  std::array<double, Dim + 1> value;
  int evaluations = 0;
  auto eval = [&](const Point& p) {
    ++evaluations;
    return f(p);
  };

  vertex[0] = start;
  value[0] = eval(start);
  for (std::size_t i = 0; i < Dim; ++i) {
    vertex[i + 1] = start;
    vertex[i + 1][i] += initial_step;
    value[i + 1] = eval(vertex[i + 1]);
  }

  std::array<std::size_t, Dim + 1> order;
  bool converged = false;
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return value[a] < value[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[Dim - 1];
    if (value[worst] - value[best] < value_tolerance) {
      converged = true;
      break;
    }
    if (evaluations >= max_evaluations) break;

    Point centroid{};
    for (std::size_t v = 0; v <= Dim; ++v) {
      if (v == worst) continue;
      for (std::size_t i = 0; i < Dim; ++i) centroid[i] += vertex[v][i] / static_cast<double>(Dim);
    }
    auto along = [&](double t) {
      Point p;
      for (std::size_t i = 0; i < Dim; ++i) p[i] = centroid[i] + t * (vertex[worst][i] - centroid[i]);
      return p;
    };

    const Point reflected = along(-1.0);
    const double f_reflected = eval(reflected);
    if (f_reflected < value[best]) {
      const Point expanded = along(-2.0);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        vertex[worst] = expanded;
        value[worst] = f_expanded;
      } else {
        vertex[worst] = reflected;
        value[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < value[second_worst]) {
      vertex[worst] = reflected;
      value[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < value[worst];
    const Point contracted = along(outside ? -0.5 : 0.5);
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : value[worst])) {
      vertex[worst] = contracted;
      value[worst] = f_contracted;
      continue;
    }
    for (std::size_t v = 0; v <= Dim; ++v) {
      if (v == best) continue;
      for (std::size_t i = 0; i < Dim; ++i)
        vertex[v][i] = vertex[best][i] + 0.5 * (vertex[v][i] - vertex[best][i]);
      value[v] = eval(vertex[v]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(value.begin(), value.end()) - value.begin());
  return {vertex[best], value[best], evaluations, converged};
}

}  // namespace qkr
