#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qkr/errors.hpp"

namespace qkr {

using complex = std::complex<double>;

/// Kick period at the principal quantum resonance. Free evolution between
/// kicks is exp(-i n^2 tau / 2) = 1 on integer momenta.
inline constexpr double resonance_period = 4.0 * std::numbers::pi;

/// Wavefunction on the integer momentum lattice n in [-M, M].
///
/// Immutable after construction; every operation in this library returns a
/// fresh state. The norm is whatever the amplitudes say: cut states keep
/// their reduced mass and are never renormalized behind the caller's back.
class MomentumState {
 public:
  MomentumState() = default;

  explicit MomentumState(int halfwidth)
      : halfwidth_(checked_halfwidth(halfwidth)), amps_(2 * halfwidth + 1) {}

  MomentumState(int halfwidth, std::vector<complex> amplitudes)
      : halfwidth_(checked_halfwidth(halfwidth)), amps_(std::move(amplitudes)) {
    if (amps_.size() != static_cast<std::size_t>(2 * halfwidth_ + 1))
      throw std::invalid_argument("MomentumState: amplitude count must be 2M+1");
  }

  int halfwidth() const noexcept { return halfwidth_; }
  std::size_t size() const noexcept { return amps_.size(); }
  bool contains(int n) const noexcept { return n >= -halfwidth_ && n <= halfwidth_; }

  /// Amplitude at momentum n (not storage index).
  complex operator[](int n) const { return amps_[index_of(n)]; }
  complex at(int n) const {
    if (!contains(n)) throw range_error("momentum " + std::to_string(n) + " outside window");
    return (*this)[n];
  }

  std::span<const complex> amplitudes() const noexcept { return amps_; }
  std::vector<complex> release() && { return std::move(amps_); }

  double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  std::size_t index_of(int n) const noexcept { return static_cast<std::size_t>(n + halfwidth_); }
  int momentum_of(std::size_t i) const noexcept { return static_cast<int>(i) - halfwidth_; }

 private:
  static int checked_halfwidth(int m) {
    if (m < 0) throw std::invalid_argument("window half-width must be non-negative");
    return m;
  }

  int halfwidth_ = 0;
  std::vector<complex> amps_ = std::vector<complex>(1);
};

/// Probability by momentum, with the total mass carried alongside.
class Distribution {
 public:
  Distribution() = default;

  Distribution(int halfwidth, std::vector<double> probs)
      : halfwidth_(halfwidth), probs_(std::move(probs)) {
    if (probs_.size() != static_cast<std::size_t>(2 * halfwidth_ + 1))
      throw std::invalid_argument("Distribution: entry count must be 2M+1");
    for (double p : probs_) {
      if (!(p >= 0.0)) throw std::invalid_argument("Distribution: negative probability");
      mass_ += p;
    }
  }

  int halfwidth() const noexcept { return halfwidth_; }
  std::size_t size() const noexcept { return probs_.size(); }
  bool contains(int n) const noexcept { return n >= -halfwidth_ && n <= halfwidth_; }
  double operator[](int n) const { return probs_[static_cast<std::size_t>(n + halfwidth_)]; }
  double at(int n) const { return contains(n) ? (*this)[n] : 0.0; }
  std::span<const double> probs() const noexcept { return probs_; }
  double total_mass() const noexcept { return mass_; }

 private:
  int halfwidth_ = 0;
  std::vector<double> probs_ = std::vector<double>(1);
  double mass_ = 0.0;
};

/// Kick strength, kicks per protocol leg and window half-width.
struct WalkParams {
  double kick_strength = 0.8775;
  int kicks_per_leg = 15;
  int window_halfwidth = 56;
  double period = resonance_period;

  /// Smallest window for which three legs of ballistic spreading stay inside.
  static int minimum_window(double k, int kicks) {
    return static_cast<int>(std::ceil(3.0 * k * kicks)) + 16;
  }

  static WalkParams with_auto_window(double k, int kicks) {
    return WalkParams{k, kicks, minimum_window(k, kicks), resonance_period};
  }

  void validate() const {
    if (!(kick_strength >= 0.0) || !std::isfinite(kick_strength))
      throw std::invalid_argument("kick strength must be a finite non-negative number");
    if (kicks_per_leg < 1) throw std::invalid_argument("kicks per leg must be positive");
    if (period != resonance_period)
      throw std::invalid_argument("only the principal resonance period 4*pi is supported");
    if (window_halfwidth < minimum_window(kick_strength, kicks_per_leg))
      throw std::invalid_argument("window half-width " + std::to_string(window_halfwidth) +
                                  " below sizing rule ceil(3kt)+16 = " +
                                  std::to_string(minimum_window(kick_strength, kicks_per_leg)));
  }
};

inline MomentumState new_basis_state(int n0, int halfwidth) {
  if (n0 < -halfwidth || n0 > halfwidth)
    throw range_error("basis momentum " + std::to_string(n0) + " outside window [-" +
                      std::to_string(halfwidth) + ", " + std::to_string(halfwidth) + "]");
  std::vector<complex> amps(2 * halfwidth + 1);
  amps[static_cast<std::size_t>(n0 + halfwidth)] = 1.0;
  return {halfwidth, std::move(amps)};
}

/// Normalized superposition of basis states. Repeated momenta accumulate.
inline MomentumState superpose(std::span<const std::pair<int, complex>> coeffs, int halfwidth) {
  std::vector<complex> amps(2 * halfwidth + 1);
  for (const auto& [n, c] : coeffs) {
    if (n < -halfwidth || n > halfwidth)
      throw range_error("momentum " + std::to_string(n) + " outside window");
    amps[static_cast<std::size_t>(n + halfwidth)] += c;
  }
  double norm2 = 0.0;
  for (const auto& a : amps) norm2 += std::norm(a);
  if (!(norm2 > 0.0)) throw std::invalid_argument("superpose: coefficient vector has zero norm");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& a : amps) a *= scale;
  return {halfwidth, std::move(amps)};
}

inline MomentumState superpose(std::initializer_list<std::pair<int, complex>> coeffs, int halfwidth) {
  return superpose(std::span<const std::pair<int, complex>>(coeffs.begin(), coeffs.size()), halfwidth);
}

inline Distribution distribution(const MomentumState& state) {
  std::vector<double> probs;
  probs.reserve(state.size());
  for (const auto& a : state.amplitudes()) probs.push_back(std::norm(a));
  return {state.halfwidth(), std::move(probs)};
}

/// Strategy (ii): pointwise difference, negatives clamped to zero.
inline Distribution subtract_reference(const Distribution& dist, const Distribution& ref) {
  if (dist.halfwidth() != ref.halfwidth())
    throw std::invalid_argument("subtract_reference: window mismatch");
  std::vector<double> out(dist.size());
  auto p = dist.probs();
  auto q = ref.probs();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(0.0, p[i] - q[i]);
  return {dist.halfwidth(), std::move(out)};
}

inline complex inner_product(const MomentumState& bra, const MomentumState& ket) {
  if (bra.halfwidth() != ket.halfwidth()) throw std::invalid_argument("inner_product: window mismatch");
  complex s = 0.0;
  auto a = bra.amplitudes();
  auto b = ket.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// |<a|b>|^2
inline double fidelity(const MomentumState& a, const MomentumState& b) {
  return std::norm(inner_product(a, b));
}

inline double l2_distance(const MomentumState& a, const MomentumState& b) {
  if (a.halfwidth() != b.halfwidth()) throw std::invalid_argument("l2_distance: window mismatch");
  double s = 0.0;
  auto x = a.amplitudes();
  auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(x[i] - y[i]);
  return std::sqrt(s);
}

}  // namespace qkr
