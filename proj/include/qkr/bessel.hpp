#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace qkr {

/// J_0(x) ... J_{max_order}(x) for integer orders.
///
/// Miller's backward recurrence J_{v-1} = (2v/x) J_v - J_{v+1}, started well
/// above both max_order and x and normalized with J_0 + 2 sum_k J_{2k} = 1.
/// Accurate to ~1e-15 absolute for any x; stable at orders far above x
/// where forward recurrence blows up.
inline std::vector<double> bessel_j_sequence(int max_order, double x) {
  if (max_order < 0) throw std::invalid_argument("bessel_j_sequence: negative order");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double ax = std::abs(x);
  const double reach = std::max(static_cast<double>(max_order), ax);
  int start = static_cast<int>(reach + 30.0 + 10.0 * std::cbrt(reach) + std::sqrt(40.0 * reach));
  start += start % 2;  // even, so the normalization sum picks up J_start's partner

  constexpr double big = 1e250;
  const double two_over_x = 2.0 / ax;
  double upper = 0.0;  // J_{v+1}
  double current = 1e-300;  // J_v, arbitrary seed
  double norm_sum = 0.0;
  for (int v = start; v >= 1; --v) {
    const double lower = v * two_over_x * current - upper;  // J_{v-1}
    upper = current;
    current = lower;
    if (std::abs(current) > big) {
      current /= big;
      upper /= big;
      norm_sum /= big;
      for (auto& o : out) o /= big;
    }
    const int order = v - 1;
    if (order <= max_order) out[static_cast<std::size_t>(order)] = current;
    if (order > 0 && order % 2 == 0) norm_sum += 2.0 * current;
  }
  norm_sum += current;  // J_0
  for (auto& o : out) o /= norm_sum;
  if (x < 0.0)
    for (std::size_t n = 1; n < out.size(); n += 2) out[n] = -out[n];
  return out;
}

/// J_n(x) for any integer n, using J_{-n} = (-1)^n J_n.
inline double bessel_j(int n, double x) {
  const int an = std::abs(n);
  const double value = bessel_j_sequence(an, x)[static_cast<std::size_t>(an)];
  return (n < 0 && an % 2 == 1) ? -value : value;
}

}  // namespace qkr
