#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qkr/prep.hpp"
#include "qkr/propagator.hpp"
#include "qkr/state.hpp"

namespace qkr {

/// Multiplies the amplitude at n_t by -1 (pi phase rotation).
inline MomentumState mark_state(const MomentumState& state, int target) {
  if (!state.contains(target))
    throw range_error("target momentum " + std::to_string(target) + " outside window");
  std::vector<complex> amps(state.amplitudes().begin(), state.amplitudes().end());
  amps[state.index_of(target)] = -amps[state.index_of(target)];
  return {state.halfwidth(), std::move(amps)};
}

struct CutResult {
  MomentumState state;
  double removed_mass = 0.0;
};

/// Zeroes |n| <= w_cut. The remainder is left unnormalized.
inline CutResult cut_window(const MomentumState& state, int cut_halfwidth) {
  if (cut_halfwidth < 0) throw std::invalid_argument("cut half-width must be >= 0");
  std::vector<complex> amps(state.amplitudes().begin(), state.amplitudes().end());
  double removed = 0.0;
  const int w = std::min(cut_halfwidth, state.halfwidth());
  for (int n = -w; n <= w; ++n) {
    removed += std::norm(amps[state.index_of(n)]);
    amps[state.index_of(n)] = 0.0;
  }
  return {MomentumState(state.halfwidth(), std::move(amps)), removed};
}

enum class Strategy { cut, subtract };

inline std::string to_string(Strategy s) { return s == Strategy::cut ? "cut" : "subtract"; }

inline Strategy parse_strategy(std::string_view s) {
  if (s == "cut") return Strategy::cut;
  if (s == "subtract") return Strategy::subtract;
  throw std::invalid_argument("unknown strategy '" + std::string(s) + "' (expected cut or subtract)");
}

struct SearchEvent {
  int t = 0;
  std::string kind;  // "mark", "cut", "warning"
  std::string detail;
  double value = 0.0;
};

struct SearchOptions {
  int target = 5;
  int cut_halfwidth = 3;
  Strategy strategy = Strategy::cut;
  bool oracle_enabled = true;
  int flat_window = 20;
};

/// Everything recorded over the forward / backward / refocus legs.
///
/// states[t] for t = 0 .. 3t. states[2t] is the state before the cut; the
/// cut (strategy cut only) sits between 2t and 2t+1 and is kept in post_cut.
struct SearchRecord {
  WalkParams params;
  SearchOptions options;
  std::vector<MomentumState> states;
  std::vector<Distribution> distributions;
  std::vector<Distribution> reference_distributions;
  std::optional<MomentumState> post_cut;
  std::optional<MomentumState> reference_post_cut;
  std::vector<SearchEvent> events;

  int target() const noexcept { return options.target; }
  int kicks() const noexcept { return params.kicks_per_leg; }
  int final_time() const noexcept { return 3 * params.kicks_per_leg; }
  const Distribution& final_distribution() const { return distributions.back(); }

  /// Distribution at t = 2t with the initial walk suppressed by the
  /// record's strategy: the post-cut distribution, or marked minus unmarked.
  Distribution suppressed_distribution() const {
    const auto mid = static_cast<std::size_t>(2 * params.kicks_per_leg);
    if (options.strategy == Strategy::cut) return distribution(*post_cut);
    return subtract_reference(distributions[mid], reference_distributions[mid]);
  }

  /// |<psi(0)|psi(2t)>|^2
  double round_trip_fidelity() const {
    return fidelity(states.front(), states[static_cast<std::size_t>(2 * params.kicks_per_leg)]);
  }
};

namespace detail {

struct LegOutput {
  std::vector<MomentumState> states;
  std::optional<MomentumState> post_cut;
  double removed_mass = 0.0;
};

inline LegOutput run_protocol(const MomentumState& initial, const WalkParams& params, const SearchOptions& opt,
                              bool mark) {
  const KickOperator forward(params.kick_strength, Direction::forward);
  const KickOperator backward(params.kick_strength, Direction::backward);
  const int legs = params.kicks_per_leg;
  LegOutput out;
  out.states.reserve(static_cast<std::size_t>(3 * legs) + 1);
  out.states.push_back(initial);
  for (int t = 0; t < legs; ++t) out.states.push_back(forward.apply(out.states.back()));
  MomentumState current = mark ? mark_state(out.states.back(), opt.target) : out.states.back();
  for (int t = 0; t < legs; ++t) {
    current = backward.apply(current);
    out.states.push_back(current);
  }
  if (opt.strategy == Strategy::cut) {
    auto cut = cut_window(current, opt.cut_halfwidth);
    out.removed_mass = cut.removed_mass;
    current = std::move(cut.state);
    out.post_cut = current;
  }
  for (int t = 0; t < legs; ++t) {
    current = forward.apply(current);
    out.states.push_back(current);
  }
  return out;
}

}  // namespace detail

/// Forward t kicks, mark n_t, t backward kicks, suppress the centre, t more
/// forward kicks. The unmarked reference protocol is run alongside.
inline SearchRecord run_search(const WalkParams& params, const InitialCoefficients& initial,
                               const SearchOptions& options) {
  params.validate();
  if (!(options.target >= -params.window_halfwidth && options.target <= params.window_halfwidth))
    throw range_error("target momentum " + std::to_string(options.target) + " outside window");
  if (options.cut_halfwidth < 0) throw std::invalid_argument("cut half-width must be >= 0");

  SearchRecord rec;
  rec.params = params;
  rec.options = options;
  const MomentumState psi0 = initial_state(initial, params.window_halfwidth);
  const int legs = params.kicks_per_leg;

  if (std::abs(options.target) > options.flat_window / 2)
    rec.events.push_back({legs, "warning",
                          "target " + std::to_string(options.target) + " outside flat window +/-" +
                              std::to_string(options.flat_window / 2),
                          0.0});

  auto marked = detail::run_protocol(psi0, params, options, options.oracle_enabled);
  auto reference = detail::run_protocol(psi0, params, options, false);

  if (options.oracle_enabled)
    rec.events.push_back({legs, "mark", "phase flip at n=" + std::to_string(options.target),
                          std::norm(marked.states[static_cast<std::size_t>(legs)][options.target])});
  if (options.strategy == Strategy::cut)
    rec.events.push_back({2 * legs, "cut", "zeroed |n| <= " + std::to_string(options.cut_halfwidth),
                          marked.removed_mass});

  rec.states = std::move(marked.states);
  rec.post_cut = std::move(marked.post_cut);
  rec.reference_post_cut = std::move(reference.post_cut);
  rec.distributions.reserve(rec.states.size());
  for (const auto& s : rec.states) rec.distributions.push_back(distribution(s));
  rec.reference_distributions.reserve(reference.states.size());
  for (const auto& s : reference.states) rec.reference_distributions.push_back(distribution(s));
  return rec;
}

}  // namespace qkr
