#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qkr/parallel.hpp"
#include "qkr/search.hpp"
#include "qkr/state.hpp"

namespace qkr {

enum class Method { flank, refocus };

inline std::string to_string(Method m) { return m == Method::flank ? "flank" : "refocus"; }

struct Estimate {
  int n_hat = 0;
  Method method = Method::refocus;
  double confidence_weight = 0.0;
  std::optional<int> n_left;   // flank only
  std::optional<int> n_right;  // flank only
};

inline constexpr double default_prominence = 0.25;

/// Strict local maxima (over +/-1, outside the window counts as zero) whose
/// height is at least `prominence` times the global maximum. Sites with
/// |n| <= exclusion_halfwidth are ignored; pass a negative value for none.
inline std::vector<int> prominent_peaks(const Distribution& dist, int exclusion_halfwidth,
                                        double prominence = default_prominence) {
  const int m = dist.halfwidth();
  auto value = [&](int n) { return (std::abs(n) <= exclusion_halfwidth) ? 0.0 : dist.at(n); };
  double global = 0.0;
  for (int n = -m; n <= m; ++n) global = std::max(global, value(n));
  std::vector<int> peaks;
  if (global <= 0.0) return peaks;
  for (int n = -m; n <= m; ++n) {
    const double v = value(n);
    if (v > 0.0 && v >= prominence * global && v > value(n - 1) && v > value(n + 1)) peaks.push_back(n);
  }
  return peaks;
}

inline double mass_near(const Distribution& dist, int centre, int radius) {
  double s = 0.0;
  for (int n = centre - radius; n <= centre + radius; ++n) s += dist.at(n);
  return std::min(1.0, s);
}

/// Method (a): n_t = (n_l + n_r) / 2 from the outermost prominent peaks of
/// the centre-suppressed distribution. Half-integers round toward zero.
inline Estimate extract_flank(const Distribution& dist, int exclusion_halfwidth,
                              double prominence = default_prominence) {
  double remaining = 0.0;
  for (int n = -dist.halfwidth(); n <= dist.halfwidth(); ++n)
    if (std::abs(n) > exclusion_halfwidth) remaining += dist[n];
  if (!(remaining > 0.0)) throw estimation_error("flank estimator: no probability outside the excluded centre");
  auto peaks = prominent_peaks(dist, exclusion_halfwidth, prominence);
  if (peaks.size() < 2)
    throw estimation_error("flank estimator: found " + std::to_string(peaks.size()) + " prominent peak(s), need 2",
                           std::move(peaks));
  Estimate e;
  e.method = Method::flank;
  e.n_left = peaks.front();
  e.n_right = peaks.back();
  e.n_hat = (peaks.front() + peaks.back()) / 2;  // integer division truncates toward zero
  e.confidence_weight = mass_near(dist, e.n_hat, 2);
  return e;
}

/// Method (b): argmax of the t = 3t distribution. Ties go to smaller |n|,
/// then to smaller n.
inline Estimate extract_refocus(const SearchRecord& record) {
  if (record.options.strategy != Strategy::cut || !record.post_cut)
    throw std::invalid_argument("refocus estimator needs a record run with the cut strategy");
  if (record.distributions.size() != static_cast<std::size_t>(record.final_time()) + 1)
    throw std::invalid_argument("refocus estimator needs the full three-leg record");
  const Distribution& fin = record.final_distribution();
  if (!(fin.total_mass() > 0.0)) throw estimation_error("refocus estimator: final distribution is empty");
  const int m = fin.halfwidth();
  int best = 0;
  double best_p = -1.0;
  for (int n = -m; n <= m; ++n) {
    const double p = fin[n];
    const bool better = p > best_p || (p == best_p && (std::abs(n) < std::abs(best) ||
                                                        (std::abs(n) == std::abs(best) && n < best)));
    if (better) {
      best = n;
      best_p = p;
    }
  }
  return {best, Method::refocus, std::min(1.0, best_p), std::nullopt, std::nullopt};
}

struct SweepRow {
  double k = 0.0;
  int target = 0;
  std::optional<int> n_hat_flank;
  bool flank_ok = false;
  std::optional<int> n_hat_refocus;
  bool refocus_ok = false;
  double weight = 0.0;  // final probability at the true target
  std::string error;
};

/// Full protocol plus both estimators per target. Failures are recorded in
/// the row and the sweep carries on. Row order follows `targets`.
inline std::vector<SweepRow> success_sweep(const WalkParams& params, const InitialCoefficients& initial,
                                           std::span<const int> targets, int cut_halfwidth, int flat_window = 20) {
  std::vector<SweepRow> rows(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.k = params.kick_strength;
    row.target = targets[i];
    try {
      SearchOptions opt;
      opt.target = targets[i];
      opt.cut_halfwidth = cut_halfwidth;
      opt.flat_window = flat_window;
      const SearchRecord rec = run_search(params, initial, opt);
      row.weight = rec.final_distribution().at(targets[i]);
      try {
        row.n_hat_flank = extract_flank(rec.suppressed_distribution(), cut_halfwidth).n_hat;
        row.flank_ok = *row.n_hat_flank == targets[i];
      } catch (const estimation_error& e) {
        row.error = e.what();
      }
      try {
        row.n_hat_refocus = extract_refocus(rec).n_hat;
        row.refocus_ok = *row.n_hat_refocus == targets[i];
      } catch (const estimation_error& e) {
        row.error += (row.error.empty() ? "" : "; ") + std::string(e.what());
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

}  // namespace qkr
