#pragma once

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>
#include <vector>

#include "qkr/bessel.hpp"
#include "qkr/state.hpp"

namespace qkr {

enum class Direction { forward, backward };

/// Norm loss per kick above which the window is declared too small.
inline constexpr double truncation_tolerance = 1e-12;

namespace detail {

/// (-i)^d for integer d.
inline complex minus_i_power(int d) {
  switch (((d % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

inline double signed_strength(double k, Direction dir) { return dir == Direction::forward ? k : -k; }

inline void check_truncation(double norm_before, double norm_after) {
  const double lost = norm_before - norm_after;
  if (lost > truncation_tolerance)
    throw truncation_error("kick pushed " + std::to_string(lost) +
                               " probability past the window edge; enlarge the window",
                           lost);
}

}  // namespace detail

/// <n| exp(-i k cos theta) |m> = (-i)^{n-m} J_{n-m}(k)  (Jacobi-Anger).
inline complex kick_matrix_element(int n, int m, double k) {
  const int d = n - m;
  return detail::minus_i_power(d) * bessel_j(d, k);
}

/// Banded one-kick operator. U^dagger has elements i^d J_d(k) = (-i)^d J_d(-k),
/// so the backward operator is the forward one at strength -k.
class KickOperator {
 public:
  KickOperator(double k, Direction dir) : strength_(k), direction_(dir) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("kick strength must be >= 0");
    const double x = detail::signed_strength(k, dir);
    // Smallest band with |J_B(k)| < 1e-17 and at least ceil(k)+12.
    const int floor_band = static_cast<int>(std::ceil(k)) + 12;
    const auto j = bessel_j_sequence(floor_band + 64 + static_cast<int>(2 * k), std::abs(x));
    int band = floor_band;
    while (band + 1 < static_cast<int>(j.size()) && std::abs(j[static_cast<std::size_t>(band)]) >= 1e-17)
      ++band;
    bandwidth_ = k == 0.0 ? 0 : band;
    coeffs_.resize(static_cast<std::size_t>(2 * bandwidth_ + 1));
    for (int d = -bandwidth_; d <= bandwidth_; ++d) {
      const double jd = j[static_cast<std::size_t>(std::abs(d))];
      double value = (d < 0 && (-d) % 2 == 1) ? -jd : jd;   // J_{-d} = (-1)^d J_d
      if (x < 0.0 && std::abs(d) % 2 == 1) value = -value;   // J_d(-x) = (-1)^d J_d(x)
      coeffs_[static_cast<std::size_t>(d + bandwidth_)] = detail::minus_i_power(d) * value;
    }
  }

  double strength() const noexcept { return strength_; }
  Direction direction() const noexcept { return direction_; }
  int bandwidth() const noexcept { return bandwidth_; }
  /// Element for momentum transfer d = n - m.
  complex element(int d) const {
    return std::abs(d) > bandwidth_ ? complex{} : coeffs_[static_cast<std::size_t>(d + bandwidth_)];
  }

  MomentumState apply(const MomentumState& in) const {
    const int m_half = in.halfwidth();
    const auto src = in.amplitudes();
    std::vector<complex> out(src.size());
    for (int n = -m_half; n <= m_half; ++n) {
      complex acc = 0.0;
      const int lo = std::max(-m_half, n - bandwidth_);
      const int hi = std::min(m_half, n + bandwidth_);
      for (int m = lo; m <= hi; ++m)
        acc += coeffs_[static_cast<std::size_t>(n - m + bandwidth_)] * src[static_cast<std::size_t>(m + m_half)];
      out[static_cast<std::size_t>(n + m_half)] = acc;
    }
    MomentumState result(m_half, std::move(out));
    detail::check_truncation(in.norm_squared(), result.norm_squared());
    return result;
  }

 private:
  double strength_;
  Direction direction_;
  int bandwidth_ = 0;
  std::vector<complex> coeffs_;
};

inline MomentumState apply_kick(const MomentumState& state, double k, Direction dir) {
  return KickOperator(k, dir).apply(state);
}

/// Same operator computed on the angle grid: inverse transform to theta,
/// multiply by exp(-/+ i k cos theta), transform back. The grid has
/// the next power of two >= 4M points.
inline MomentumState apply_kick_spectral(const MomentumState& state, double k, Direction dir) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("kick strength must be >= 0");
  const int m_half = state.halfwidth();
  const std::size_t grid = std::bit_ceil(std::max<std::size_t>(4 * static_cast<std::size_t>(m_half), 2 * m_half + 1));
  std::vector<complex> buffer(grid);
  const auto src = state.amplitudes();
  for (int n = -m_half; n <= m_half; ++n)
    buffer[static_cast<std::size_t>((n + static_cast<long>(grid)) % static_cast<long>(grid))] =
        src[static_cast<std::size_t>(n + m_half)];

  auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
  // Planning is not thread-safe in FFTW; execution is.
  static std::mutex planner_mutex;
  fftw_plan to_angle;
  fftw_plan to_momentum;
  {
    std::lock_guard lock(planner_mutex);
    const int len = static_cast<int>(grid);
    to_angle = fftw_plan_dft_1d(len, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    to_momentum = fftw_plan_dft_1d(len, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(to_angle);  // psi(theta_j) = sum_n psi_n e^{i n theta_j}
  const double x = detail::signed_strength(k, dir);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(grid);
  for (std::size_t j = 0; j < grid; ++j)
    buffer[j] *= std::polar(1.0 / static_cast<double>(grid), -x * std::cos(step * static_cast<double>(j)));
  fftw_execute(to_momentum);
  {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(to_angle);
    fftw_destroy_plan(to_momentum);
  }

  std::vector<complex> out(src.size());
  for (int n = -m_half; n <= m_half; ++n)
    out[static_cast<std::size_t>(n + m_half)] =
        buffer[static_cast<std::size_t>((n + static_cast<long>(grid)) % static_cast<long>(grid))];
  MomentumState result(m_half, std::move(out));
  detail::check_truncation(state.norm_squared(), result.norm_squared());
  return result;
}

/// States after 0, 1, ..., t kicks.
inline std::vector<MomentumState> evolve(const MomentumState& state, double k, int t, Direction dir) {
  if (t < 0) throw std::invalid_argument("evolve: negative kick count");
  const KickOperator op(k, dir);
  std::vector<MomentumState> out;
  out.reserve(static_cast<std::size_t>(t) + 1);
  out.push_back(state);
  for (int i = 0; i < t; ++i) out.push_back(op.apply(out.back()));
  return out;
}

/// Final state only.
inline MomentumState evolve_final(const MomentumState& state, double k, int t, Direction dir) {
  if (t < 0) throw std::invalid_argument("evolve: negative kick count");
  const KickOperator op(k, dir);
  MomentumState s = state;
  for (int i = 0; i < t; ++i) s = op.apply(s);
  return s;
}

}  // namespace qkr
