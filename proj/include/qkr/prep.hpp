#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qkr/nelder_mead.hpp"
#include "qkr/parallel.hpp"
#include "qkr/propagator.hpp"
#include "qkr/state.hpp"

namespace qkr {

/// Amplitudes on n = -1, 0, +1, in that order.
using InitialCoefficients = std::array<complex, 3>;

inline MomentumState initial_state(const InitialCoefficients& c, int halfwidth) {
  return superpose({{-1, c[0]}, {0, c[1]}, {1, c[2]}}, halfwidth);
}

struct NamedPreset {
  std::string name;
  InitialCoefficients coefficients;
};

/// The three-site initial states of the preparation study:
/// "b" uniform, "c" with c_{-1} sign-flipped, "d" the flattened optimum.
inline std::vector<NamedPreset> canonical_states() {
  const double s = 1.0 / std::sqrt(3.0);
  // (0.4815, 0.7323, 0.4815) is normalized only to ~1e-5; rescale exactly.
  const double d_norm = std::sqrt(2 * 0.4815 * 0.4815 + 0.7323 * 0.7323);
  return {
      {"b", {s, s, s}},
      {"c", {-s, s, s}},
      {"d", {0.4815 / d_norm, 0.7323 / d_norm, 0.4815 / d_norm}},
  };
}

inline InitialCoefficients preset(std::string_view name) {
  for (auto& p : canonical_states())
    if (p.name == name) return p.coefficients;
  throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected b, c or d)");
}

namespace detail {

/// Per-site target u_N = 1/(N+1) over n = -N/2 .. N/2.
inline double flatness_from_probs(std::span<const double> window_probs) {
  const double uniform = 1.0 / static_cast<double>(window_probs.size());
  double cost = 0.0;
  for (double p : window_probs) cost += std::abs(p - uniform);
  return cost;
}

inline void check_flat_window(int flat_window, int halfwidth) {
  if (flat_window < 0 || flat_window % 2 != 0)
    throw std::invalid_argument("flat window N must be a non-negative even integer");
  if (flat_window / 2 > halfwidth)
    throw range_error("flat window half-width " + std::to_string(flat_window / 2) + " exceeds momentum window");
}

/// Evolved images of |-1>, |0>, |+1> restricted to the flat window, so the
/// cost of any superposition is a cheap linear combination.
class FlatnessLandscape {
 public:
  FlatnessLandscape(const WalkParams& params, int flat_window) : half_(flat_window / 2) {
    check_flat_window(flat_window, params.window_halfwidth);
    const KickOperator op(params.kick_strength, Direction::forward);
    for (int j = 0; j < 3; ++j) {
      MomentumState s = new_basis_state(j - 1, params.window_halfwidth);
      for (int t = 0; t < params.kicks_per_leg; ++t) s = op.apply(s);
      images_[static_cast<std::size_t>(j)].reserve(static_cast<std::size_t>(2 * half_ + 1));
      for (int n = -half_; n <= half_; ++n) images_[static_cast<std::size_t>(j)].push_back(s[n]);
    }
    probs_.resize(static_cast<std::size_t>(2 * half_ + 1));
  }

  double cost(const InitialCoefficients& c) {
    for (std::size_t i = 0; i < probs_.size(); ++i)
      probs_[i] = std::norm(c[0] * images_[0][i] + c[1] * images_[1][i] + c[2] * images_[2][i]);
    return flatness_from_probs(probs_);
  }

 private:
  int half_;
  std::array<std::vector<complex>, 3> images_;
  std::vector<double> probs_;
};

inline InitialCoefficients real_from_angles(double theta, double phi) {
  return {std::abs(std::sin(theta) * std::cos(phi)), std::abs(std::cos(theta)),
          std::abs(std::sin(theta) * std::sin(phi))};
}

}  // namespace detail

/// Sum over n in [-N/2, N/2] of |P(n, t; C) - 1/(N+1)| after t forward kicks.
inline double flatness_cost(const InitialCoefficients& c, const WalkParams& params, int flat_window) {
  detail::check_flat_window(flat_window, params.window_halfwidth);
  const MomentumState final_state =
      evolve_final(initial_state(c, params.window_halfwidth), params.kick_strength, params.kicks_per_leg,
                   Direction::forward);
  std::vector<double> probs;
  for (int n = -flat_window / 2; n <= flat_window / 2; ++n) probs.push_back(std::norm(final_state[n]));
  return detail::flatness_from_probs(probs);
}

struct OptimizerOptions {
  int restarts = 16;
  double tolerance = 1e-8;
  int max_evaluations = 2000;
  std::uint64_t seed = 0;
  bool complex_coefficients = false;
};

struct PreparationResult {
  InitialCoefficients coefficients{};
  double cost = 0.0;
  double baseline_cost = 0.0;  // preset "b"
  int flat_window = 0;
  int kicks = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Multi-start Nelder-Mead over normalized three-site coefficients.
///
/// Real mode searches two angles on the positive octant of the unit sphere;
/// complex mode adds the phases of c_{-1} and c_{+1} relative to c_0. The
/// first start is always the uniform preset, so the result is never worse
/// than it. Start points come from a Kronecker sequence offset by the seed.
inline PreparationResult optimize_initial_state(const WalkParams& params, int flat_window,
                                                const OptimizerOptions& options = {}) {
  if (options.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  params.validate();
  detail::check_flat_window(flat_window, params.window_halfwidth);

  constexpr double quarter_turn = std::numbers::pi / 2.0;
  const double theta_uniform = std::acos(1.0 / std::sqrt(3.0));
  const double phi_uniform = quarter_turn / 2.0;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::array<double, 4> offset{unit(rng), unit(rng), unit(rng), unit(rng)};
  // Generalized golden ratios for a 4-d low-discrepancy sequence.
  const std::array<double, 4> stride{0.8566748838545029, 0.7338837197292946, 0.6287067210378087,
                                     0.5385972572236101};
  auto quasi = [&](std::size_t i, std::size_t axis) {
    const double v = offset[axis] + static_cast<double>(i) * stride[axis];
    return v - std::floor(v);
  };

  struct Outcome {
    InitialCoefficients coefficients{};
    double cost = 0.0;
    int evaluations = 0;
    bool converged = false;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(options.restarts));

  parallel_for(outcomes.size(), [&](std::size_t r) {
    detail::FlatnessLandscape landscape(params, flat_window);
    const double theta0 = r == 0 ? theta_uniform : quarter_turn * quasi(r, 0);
    const double phi0 = r == 0 ? phi_uniform : quarter_turn * quasi(r, 1);
    Outcome& out = outcomes[r];
    if (!options.complex_coefficients) {
      auto f = [&](const std::array<double, 2>& p) { return landscape.cost(detail::real_from_angles(p[0], p[1])); };
      const auto res = nelder_mead<2>(f, {theta0, phi0}, 0.2, options.tolerance, options.max_evaluations);
      out = {detail::real_from_angles(res.point[0], res.point[1]), res.value, res.evaluations, res.converged};
    } else {
      auto coeffs = [](const std::array<double, 4>& p) {
        auto c = detail::real_from_angles(p[0], p[1]);
        c[0] *= std::polar(1.0, p[2]);
        c[2] *= std::polar(1.0, p[3]);
        return c;
      };
      auto f = [&](const std::array<double, 4>& p) { return landscape.cost(coeffs(p)); };
      const double alpha0 = r == 0 ? 0.0 : 2.0 * std::numbers::pi * quasi(r, 2);
      const double beta0 = r == 0 ? 0.0 : 2.0 * std::numbers::pi * quasi(r, 3);
      const auto res =
          nelder_mead<4>(f, {theta0, phi0, alpha0, beta0}, 0.2, options.tolerance, options.max_evaluations);
      out = {coeffs(res.point), res.value, res.evaluations, res.converged};
    }
  });

  PreparationResult result;
  result.flat_window = flat_window;
  result.kicks = params.kicks_per_leg;
  result.baseline_cost = flatness_cost(preset("b"), params, flat_window);
  std::size_t best = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.evaluations += outcomes[r].evaluations;
    if (outcomes[r].cost < outcomes[best].cost) best = r;
  }
  result.coefficients = outcomes[best].coefficients;
  result.cost = outcomes[best].cost;
  result.converged = outcomes[best].converged;
  return result;
}

}  // namespace qkr
