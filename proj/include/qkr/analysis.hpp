#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qkr/bessel.hpp"
#include "qkr/errors.hpp"
#include "qkr/propagator.hpp"
#include "qkr/search.hpp"
#include "qkr/state.hpp"

namespace qkr {

/// Mass-normalized standard deviation of n.
inline double width(const Distribution& dist) {
  const double mass = dist.total_mass();
  if (!(mass > 0.0)) throw std::domain_error("width of a zero-mass distribution");
  double mean = 0.0;
  for (int n = -dist.halfwidth(); n <= dist.halfwidth(); ++n) mean += n * dist[n];
  mean /= mass;
  double var = 0.0;
  for (int n = -dist.halfwidth(); n <= dist.halfwidth(); ++n) var += (n - mean) * (n - mean) * dist[n];
  return std::sqrt(var / mass);
}

/// Outermost |n| whose probability reaches `threshold`; -1 if none does.
inline int support_extent(const Distribution& dist, double threshold = 1e-6) {
  for (int n = dist.halfwidth(); n >= 0; --n)
    if (dist[n] >= threshold || dist[-n] >= threshold) return n;
  return -1;
}

/// p_0(t) = |<psi(0)|psi(t)>|^2 along a recorded evolution.
inline std::vector<double> survival_probability(std::span<const MomentumState> evolution) {
  std::vector<double> p;
  p.reserve(evolution.size());
  for (const auto& s : evolution) p.push_back(fidelity(evolution.front(), s));
  return p;
}

/// Window that holds a single-site walk of cumulative strength x with
/// negligible tail: the Bessel edge is ~x^{1/3} wide, so the margin grows.
inline int spread_window(double x) {
  return static_cast<int>(std::ceil(x)) + 16 + static_cast<int>(std::ceil(8.0 * std::cbrt(x)));
}

/// Least-squares slope of log(block mean of p) against log(block centre)
/// over dyadic blocks [2^j, 2^{j+1} - 1] lying inside [1, T], j >= first_exponent.
/// series[t] is the value at time t. The block centre is the harmonic mean
/// of its times, which makes an exact 1/t law come out at exactly -1.
inline double fit_power_law(std::span<const double> series, int first_exponent = 3) {
  const long last_t = static_cast<long>(series.size()) - 1;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int j = std::max(0, first_exponent);; ++j) {
    const long lo = 1L << j;
    const long hi = (1L << (j + 1)) - 1;
    if (hi > last_t) break;
    double sum_p = 0.0;
    double sum_inv_t = 0.0;
    for (long t = lo; t <= hi; ++t) {
      sum_p += series[static_cast<std::size_t>(t)];
      sum_inv_t += 1.0 / static_cast<double>(t);
    }
    const double count = static_cast<double>(hi - lo + 1);
    if (!(sum_p > 0.0)) throw std::domain_error("fit_power_law: non-positive block mean");
    xs.push_back(std::log(count / sum_inv_t));
    ys.push_back(std::log(sum_p / count));
  }
  if (xs.size() < 3)
    throw insufficient_data("fit_power_law: need at least 3 complete dyadic blocks, got " +
                            std::to_string(xs.size()));
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

/// Earliest t in the refocus leg (2t, 3t] with P(n_t) >= threshold.
inline std::optional<int> one_shot_hitting_time(const SearchRecord& record, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("threshold must lie in (0, 1]");
  const int legs = record.kicks();
  for (int t = 2 * legs + 1; t <= 3 * legs && t < static_cast<int>(record.distributions.size()); ++t)
    if (record.distributions[static_cast<std::size_t>(t)].at(record.target()) >= threshold) return t;
  return std::nullopt;
}

/// S(T) = sum_{t=1}^{T} p_0(t) for a walker started at n = 0. At resonance
/// the return amplitude after t kicks is exactly J_0(kt).
inline std::vector<double> polya_partial_sum(double k, int t_max) {
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  std::vector<double> sums;
  sums.reserve(static_cast<std::size_t>(t_max));
  double s = 0.0;
  for (int t = 1; t <= t_max; ++t) {
    const double j0 = bessel_j(0, k * t);
    s += j0 * j0;
    sums.push_back(s);
  }
  return sums;
}

struct ScalingReport {
  double kick_strength = 0.0;
  std::vector<int> times;
  std::vector<double> widths;
  std::vector<double> survival;
  std::vector<double> diffusive_reference;  // sigma(1) * sqrt(t), for plots only
  double fitted_width_slope = 0.0;
  std::optional<double> fitted_survival_exponent;
  std::vector<double> polya_partial_sums;  // index 0 is T = 1
  std::optional<int> hitting_time;
  std::vector<std::string> warnings;
};

/// Single-site walk from n = 0 for t_max kicks: width, survival and its
/// power-law fit, and the running sum of return probabilities.
inline ScalingReport scaling_report(double k, int t_max) {
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  ScalingReport rep;
  rep.kick_strength = k;
  const int window = spread_window(k * t_max);
  const auto states = evolve(new_basis_state(0, window), k, t_max, Direction::forward);
  rep.survival = survival_probability(states);
  double num = 0.0, den = 0.0, running = 0.0;
  for (int t = 0; t <= t_max; ++t) {
    rep.times.push_back(t);
    rep.widths.push_back(width(distribution(states[static_cast<std::size_t>(t)])));
    num += t * rep.widths.back();
    den += static_cast<double>(t) * t;
    if (t >= 1) {
      running += rep.survival[static_cast<std::size_t>(t)];
      rep.polya_partial_sums.push_back(running);
    }
  }
  rep.fitted_width_slope = num / den;
  for (int t = 0; t <= t_max; ++t) rep.diffusive_reference.push_back(rep.widths[1] * std::sqrt(static_cast<double>(t)));
  try {
    rep.fitted_survival_exponent = fit_power_law(rep.survival);
  } catch (const insufficient_data& e) {
    rep.warnings.emplace_back(e.what());
  }
  return rep;
}

}  // namespace qkr
