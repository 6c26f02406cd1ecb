#pragma once

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qkr/analysis.hpp"
#include "qkr/extract.hpp"
#include "qkr/io.hpp"
#include "qkr/prep.hpp"
#include "qkr/search.hpp"
#include "qkr/svg.hpp"

namespace qkr::cli {

/// Kick strength at which a t = 15 walk from the three-site presets has the
/// flat-centred shape and flatness optimum of the preparation study.
inline constexpr double calibrated_kick_strength = 0.8775;

enum exit_code : int { success = 0, estimation_failure = 1, config_failure = 2, numerical_failure = 3 };

class config_error : public std::invalid_argument {
 public:
  config_error(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  double kick_strength = calibrated_kick_strength;
  int kicks = 15;
  std::string window = "auto";
  std::string preset;  // empty: optimize (prepare) or "b" (search/sweep)
  std::vector<double> coefficients;  // explicit real c_{-1}, c_0, c_{+1}
  std::string targets = "5";
  std::vector<double> kick_list;  // sweep only; empty means {kick_strength}
  int cut_halfwidth = 3;
  std::string strategy = "cut";
  int flat_window = 20;
  std::uint64_t seed = 0;
  int restarts = 16;
  bool oracle = true;
  bool complex_coefficients = false;
  int t_max = 128;
  double threshold = 0.05;
  std::filesystem::path out = "out";

  WalkParams walk_params(double k) const {
    WalkParams p = WalkParams::with_auto_window(k, kicks);
    if (window != "auto") p.window_halfwidth = std::stoi(window);
    return p;
  }
  WalkParams walk_params() const { return walk_params(kick_strength); }

  InitialCoefficients initial() const {
    if (!coefficients.empty()) {
      InitialCoefficients c{coefficients[0], coefficients[1], coefficients[2]};
      const double norm = std::sqrt(std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]));
      for (auto& v : c) v /= norm;
      return c;
    }
    return qkr::preset(preset.empty() ? "b" : preset);
  }
};

/// "5", "3,4,5" or "-10..10".
inline std::vector<int> parse_target_list(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw config_error("target", "empty range '" + text + "'");
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    const int value = std::stoi(item, &used);
    if (used != item.size()) throw config_error("target", "not an integer: '" + item + "'");
    out.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// Checks every field against the library preconditions before any work.
inline void validate(const ExperimentConfig& c) {
  auto check_k = [](double k) {
    if (!(k >= 0.0) || !std::isfinite(k)) throw config_error("k", "kick strength must be >= 0, got " + fmt::format("{}", k));
  };
  check_k(c.kick_strength);
  for (double k : c.kick_list) check_k(k);
  if (c.kicks < 1) throw config_error("kicks", "must be a positive integer");
  if (c.window != "auto") {
    std::size_t used = 0;
    int m = 0;
    try {
      m = std::stoi(c.window, &used);
    } catch (const std::exception&) {
      throw config_error("window", "expected 'auto' or an integer, got '" + c.window + "'");
    }
    if (used != c.window.size()) throw config_error("window", "expected 'auto' or an integer, got '" + c.window + "'");
    const double k_max = c.kick_list.empty() ? c.kick_strength : *std::max_element(c.kick_list.begin(), c.kick_list.end());
    const int need = WalkParams::minimum_window(std::max(k_max, c.kick_strength), c.kicks);
    if (m < need) throw config_error("window", fmt::format("{} is below the sizing rule ceil(3kt)+16 = {}", m, need));
  }
  if (!c.preset.empty()) {
    try {
      qkr::preset(c.preset);
    } catch (const std::invalid_argument& e) {
      throw config_error("preset", e.what());
    }
  }
  if (!c.coefficients.empty()) {
    if (c.coefficients.size() != 3) throw config_error("coefficients", "expected three values c_-1,c_0,c_+1");
    if (std::all_of(c.coefficients.begin(), c.coefficients.end(), [](double v) { return v == 0.0; }))
      throw config_error("coefficients", "zero norm");
  }
  try {
    parse_target_list(c.targets);
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error("target", "expected an integer, a comma list or a range a..b, got '" + c.targets + "'");
  }
  if (c.cut_halfwidth < 0) throw config_error("wcut", "must be >= 0");
  try {
    parse_strategy(c.strategy);
  } catch (const std::invalid_argument& e) {
    throw config_error("strategy", e.what());
  }
  if (c.flat_window < 0 || c.flat_window % 2 != 0) throw config_error("flat-window", "must be a non-negative even integer");
  if (c.flat_window / 2 > c.walk_params().window_halfwidth) throw config_error("flat-window", "exceeds the momentum window");
  if (c.restarts < 1) throw config_error("restarts", "must be >= 1");
  if (c.t_max < 1) throw config_error("t-max", "must be >= 1");
  if (!(c.threshold > 0.0 && c.threshold <= 1.0)) throw config_error("threshold", "must lie in (0, 1]");
  const auto params = c.walk_params();
  for (int n : parse_target_list(c.targets))
    if (std::abs(n) > params.window_halfwidth) throw config_error("target", fmt::format("{} outside the window", n));
}

namespace detail {

using nlohmann::ordered_json;

inline ordered_json params_json(const WalkParams& p) {
  return {{"k", p.kick_strength},
          {"kicks_per_leg", p.kicks_per_leg},
          {"window_halfwidth", p.window_halfwidth},
          {"period", p.period}};
}

inline ordered_json coefficients_json(const InitialCoefficients& c) {
  ordered_json arr = ordered_json::array();
  for (int j = 0; j < 3; ++j)
    arr.push_back({{"n", j - 1}, {"re", c[static_cast<std::size_t>(j)].real()}, {"im", c[static_cast<std::size_t>(j)].imag()}});
  return arr;
}

inline ordered_json estimate_json(const Estimate& e) {
  ordered_json j{{"n_hat", e.n_hat}, {"method", to_string(e.method)}, {"confidence_weight", e.confidence_weight}};
  if (e.n_left) j["n_left"] = *e.n_left;
  if (e.n_right) j["n_right"] = *e.n_right;
  return j;
}

inline std::vector<double> probs_vector(const Distribution& d) { return {d.probs().begin(), d.probs().end()}; }

inline std::vector<double> momentum_axis(int halfwidth) {
  std::vector<double> x;
  for (int n = -halfwidth; n <= halfwidth; ++n) x.push_back(n);
  return x;
}

inline std::string distribution_plot(const std::string& title, const std::vector<std::pair<std::string, Distribution>>& items) {
  std::vector<svg::Series> series;
  for (const auto& [label, d] : items) series.push_back({label, momentum_axis(d.halfwidth()), probs_vector(d)});
  return svg::line_plot(title, series, "momentum n", "probability");
}

inline std::string evolution_heat_map(const std::string& title, std::span<const Distribution> dists, int first_t) {
  std::vector<std::vector<double>> rows;
  for (const auto& d : dists) rows.push_back(probs_vector(d));
  const int half = dists.empty() ? 0 : dists.front().halfwidth();
  return svg::heat_map(title, rows, -half, first_t);
}

inline void ensure_dir(const std::filesystem::path& dir) { std::filesystem::create_directories(dir); }

}  // namespace detail

struct PrepareOutcome {
  PreparationResult result;
  bool optimized = false;
  Distribution final_distribution;
};

/// Optimize (or evaluate a preset) and write coefficients.json,
/// distribution.csv and the preparation plots.
inline PrepareOutcome cmd_prepare(const ExperimentConfig& cfg) {
  validate(cfg);
  const WalkParams params = cfg.walk_params();
  PrepareOutcome out;
  if (cfg.preset.empty() && cfg.coefficients.empty()) {
    OptimizerOptions opt;
    opt.restarts = cfg.restarts;
    opt.seed = cfg.seed;
    opt.complex_coefficients = cfg.complex_coefficients;
    out.result = optimize_initial_state(params, cfg.flat_window, opt);
    out.optimized = true;
  } else {
    auto& r = out.result;
    r.coefficients = cfg.initial();
    r.cost = flatness_cost(r.coefficients, params, cfg.flat_window);
    r.baseline_cost = flatness_cost(preset("b"), params, cfg.flat_window);
    r.flat_window = cfg.flat_window;
    r.kicks = cfg.kicks;
    r.converged = true;
  }
  const auto evolution = evolve(initial_state(out.result.coefficients, params.window_halfwidth), params.kick_strength,
                                params.kicks_per_leg, Direction::forward);
  out.final_distribution = distribution(evolution.back());

  detail::ensure_dir(cfg.out);
  detail::ordered_json j{{"params", detail::params_json(params)},
                         {"calibrated_k", calibrated_kick_strength},
                         {"source", out.optimized ? "optimized" : (cfg.coefficients.empty() ? "preset " + (cfg.preset.empty() ? std::string("b") : cfg.preset) : "explicit")},
                         {"coefficients", detail::coefficients_json(out.result.coefficients)},
                         {"cost", out.result.cost},
                         {"baseline_cost", out.result.baseline_cost},
                         {"flat_window", out.result.flat_window},
                         {"kicks", out.result.kicks},
                         {"seed", cfg.seed},
                         {"restarts", out.optimized ? cfg.restarts : 0},
                         {"evaluations", out.result.evaluations},
                         {"converged", out.result.converged}};
  io::write_text(cfg.out / "coefficients.json", j.dump(2) + "\n");
  const std::vector<int> times{params.kicks_per_leg};
  io::write_timeseries_csv(cfg.out / "distribution.csv", times, std::span(&out.final_distribution, 1));

  std::vector<std::pair<std::string, Distribution>> items;
  for (const auto& p : canonical_states())
    items.emplace_back("preset " + p.name,
                       distribution(evolve_final(initial_state(p.coefficients, params.window_halfwidth),
                                                 params.kick_strength, params.kicks_per_leg, Direction::forward)));
  items.emplace_back(out.optimized ? "optimized" : "selected", out.final_distribution);
  io::write_text(cfg.out / "prepare_distributions.svg",
                 detail::distribution_plot(fmt::format("P(n) after {} kicks, k = {}", params.kicks_per_leg, params.kick_strength), items));

  auto round_trip = evolution;
  for (int t = 0; t < params.kicks_per_leg; ++t) round_trip.push_back(apply_kick(round_trip.back(), params.kick_strength, Direction::backward));
  std::vector<Distribution> dists;
  for (const auto& s : round_trip) dists.push_back(distribution(s));
  io::write_text(cfg.out / "prepare_roundtrip.svg", detail::evolution_heat_map("forward-backward evolution", dists, 0));
  return out;
}

struct SearchOutcome {
  SearchRecord record;
  std::optional<Estimate> flank;
  std::optional<Estimate> refocus;
  std::vector<std::string> errors;
  int exit = success;
};

/// Full protocol for one target; writes timeseries.csv,
/// reference_timeseries.csv, suppressed.csv, summary.json and the plots.
inline SearchOutcome cmd_search(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto targets = parse_target_list(cfg.targets);
  if (targets.size() != 1) throw config_error("target", "search takes exactly one target");
  const WalkParams params = cfg.walk_params();
  SearchOptions opt;
  opt.target = targets.front();
  opt.cut_halfwidth = cfg.cut_halfwidth;
  opt.strategy = parse_strategy(cfg.strategy);
  opt.oracle_enabled = cfg.oracle;
  opt.flat_window = cfg.flat_window;

  SearchOutcome out;
  out.record = run_search(params, cfg.initial(), opt);
  const SearchRecord& rec = out.record;
  const int legs = params.kicks_per_leg;
  const Distribution suppressed = rec.suppressed_distribution();

  using detail::ordered_json;
  ordered_json estimates{{"flank", nullptr}, {"refocus", nullptr}};
  if (cfg.oracle) {
    try {
      out.flank = extract_flank(suppressed, opt.cut_halfwidth);
      estimates["flank"] = detail::estimate_json(*out.flank);
    } catch (const estimation_error& e) {
      estimates["flank"] = {{"error", e.what()}, {"peaks", e.peaks()}};
      out.errors.emplace_back(e.what());
    }
    if (opt.strategy == Strategy::cut) {
      try {
        out.refocus = extract_refocus(rec);
        estimates["refocus"] = detail::estimate_json(*out.refocus);
      } catch (const estimation_error& e) {
        estimates["refocus"] = {{"error", e.what()}};
        out.errors.emplace_back(e.what());
      }
    }
  }
  out.exit = out.errors.empty() ? success : estimation_failure;

  ordered_json events = ordered_json::array();
  for (const auto& e : rec.events) events.push_back({{"t", e.t}, {"kind", e.kind}, {"detail", e.detail}, {"value", e.value}});
  ordered_json params_j = detail::params_json(params);
  params_j["target"] = opt.target;
  params_j["cut_halfwidth"] = opt.cut_halfwidth;
  params_j["strategy"] = to_string(opt.strategy);
  params_j["flat_window"] = opt.flat_window;
  params_j["oracle_enabled"] = opt.oracle_enabled;
  params_j["initial"] = detail::coefficients_json(cfg.initial());
  const Distribution& fin = rec.final_distribution();
  ordered_json summary{{"params", params_j},
                       {"calibrated_k", calibrated_kick_strength},
                       {"estimates", estimates},
                       {"weights",
                        {{"final_at_target", fin.at(opt.target)},
                         {"final_total_mass", fin.total_mass()},
                         {"suppressed_total_mass", suppressed.total_mass()},
                         {"suppressed_at_target", suppressed.at(opt.target)}}},
                       {"events", events},
                       {"fidelity", rec.round_trip_fidelity()}};

  detail::ensure_dir(cfg.out);
  io::write_text(cfg.out / "summary.json", summary.dump(2) + "\n");
  io::write_timeseries_csv(cfg.out / "timeseries.csv", rec.distributions);
  io::write_timeseries_csv(cfg.out / "reference_timeseries.csv", rec.reference_distributions);
  const std::vector<int> mid{2 * legs};
  io::write_timeseries_csv(cfg.out / "suppressed.csv", mid, std::span(&suppressed, 1));

  const std::span<const Distribution> all(rec.distributions);
  io::write_text(cfg.out / "search_evolution.svg",
                 detail::evolution_heat_map(fmt::format("marked at n = {}, t = {}", opt.target, legs),
                                            all.subspan(0, static_cast<std::size_t>(2 * legs) + 1), 0));
  io::write_text(cfg.out / "search_suppressed.svg",
                 detail::distribution_plot(fmt::format("t = {}, centre suppressed ({})", 2 * legs, to_string(opt.strategy)),
                                           {{"suppressed", suppressed}}));
  std::vector<Distribution> refocus_leg;
  refocus_leg.push_back(opt.strategy == Strategy::cut ? distribution(*rec.post_cut) : rec.distributions[static_cast<std::size_t>(2 * legs)]);
  for (int t = 2 * legs + 1; t <= 3 * legs; ++t) refocus_leg.push_back(rec.distributions[static_cast<std::size_t>(t)]);
  io::write_text(cfg.out / "search_refocus.svg", detail::evolution_heat_map("refocusing leg", refocus_leg, 2 * legs));
  io::write_text(cfg.out / "search_final.svg",
                 detail::distribution_plot(fmt::format("t = {}", 3 * legs), {{"final", fin}}));
  return out;
}

/// Sweep over (k, n_t); rows sorted by (k, n_t). Writes sweep.csv.
inline std::vector<SweepRow> cmd_sweep(const ExperimentConfig& cfg, std::ostream& log = std::cout) {
  validate(cfg);
  auto targets = parse_target_list(cfg.targets);
  std::vector<double> ks = cfg.kick_list.empty() ? std::vector<double>{cfg.kick_strength} : cfg.kick_list;
  if (targets.empty() || ks.empty()) throw config_error("target", "sweep needs at least one target and one k");
  std::sort(targets.begin(), targets.end());
  std::sort(ks.begin(), ks.end());

  std::vector<SweepRow> rows;
  for (double k : ks) {
    const auto part = success_sweep(cfg.walk_params(k), cfg.initial(), targets, cfg.cut_halfwidth, cfg.flat_window);
    rows.insert(rows.end(), part.begin(), part.end());
  }

  detail::ensure_dir(cfg.out);
  std::string csv = "k,n_t,n_hat_flank,flank_ok,n_hat_refocus,refocus_ok,weight\n";
  auto opt_int = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  int flank_hits = 0, refocus_hits = 0;
  for (const auto& r : rows) {
    csv += fmt::format("{},{},{},{},{},{},{}\n", r.k, r.target, opt_int(r.n_hat_flank), r.flank_ok ? "true" : "false",
                       opt_int(r.n_hat_refocus), r.refocus_ok ? "true" : "false", io::exact(r.weight));
    flank_hits += r.flank_ok;
    refocus_hits += r.refocus_ok;
  }
  io::write_text(cfg.out / "sweep.csv", csv);
  log << fmt::format("sweep: {} rows, flank {}/{}, refocus {}/{}\n", rows.size(), flank_hits, rows.size(), refocus_hits,
                     rows.size());
  return rows;
}

/// Width, survival, power-law fit and Polya partial sums for a single-site
/// walk, plus the one-shot hitting time of a default search run.
inline ScalingReport cmd_scaling(const ExperimentConfig& cfg, std::ostream& log = std::cout) {
  validate(cfg);
  ScalingReport rep = scaling_report(cfg.kick_strength, cfg.t_max);
  const auto targets = parse_target_list(cfg.targets);
  if (!targets.empty() && cfg.kick_strength > 0.0) {
    SearchOptions opt;
    opt.target = targets.front();
    opt.cut_halfwidth = cfg.cut_halfwidth;
    opt.flat_window = cfg.flat_window;
    rep.hitting_time = one_shot_hitting_time(run_search(cfg.walk_params(), cfg.initial(), opt), cfg.threshold);
  }
  for (const auto& w : rep.warnings) log << "warning: " << w << '\n';

  detail::ensure_dir(cfg.out);
  using detail::ordered_json;
  ordered_json j{{"k", rep.kick_strength},
                 {"t_max", cfg.t_max},
                 {"fitted_width_slope", rep.fitted_width_slope},
                 {"width_slope_theory", rep.kick_strength / std::sqrt(2.0)},
                 {"fitted_survival_exponent", rep.fitted_survival_exponent ? ordered_json(*rep.fitted_survival_exponent) : ordered_json(nullptr)},
                 {"hitting_time", rep.hitting_time ? ordered_json(*rep.hitting_time) : ordered_json(nullptr)},
                 {"hitting_threshold", cfg.threshold},
                 {"warnings", rep.warnings},
                 {"times", rep.times},
                 {"widths", rep.widths},
                 {"survival", rep.survival},
                 {"polya_partial_sums", rep.polya_partial_sums}};
  io::write_text(cfg.out / "scaling.json", j.dump(2) + "\n");
  std::string csv = "t,width,survival,polya_partial_sum,diffusive_reference\n";
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    csv += fmt::format("{},{},{},{},{}\n", rep.times[i], io::exact(rep.widths[i]), io::exact(rep.survival[i]),
                       i == 0 ? std::string() : io::exact(rep.polya_partial_sums[i - 1]), io::exact(rep.diffusive_reference[i]));
  io::write_text(cfg.out / "scaling.csv", csv);

  std::vector<double> t(rep.times.begin(), rep.times.end());
  io::write_text(cfg.out / "scaling_width.svg",
                 svg::line_plot("width vs kicks", {{"sigma(t)", t, rep.widths}, {"diffusive sqrt(t)", t, rep.diffusive_reference}},
                                "kick t", "sigma"));
  std::vector<double> envelope;
  for (double ti : t) envelope.push_back(ti > 0 ? 1.0 / (std::numbers::pi * rep.kick_strength * ti) : 0.0);
  io::write_text(cfg.out / "scaling_survival.svg",
                 svg::line_plot(rep.fitted_survival_exponent ? fmt::format("survival, fitted exponent {:.3f}", *rep.fitted_survival_exponent)
                                                             : std::string("survival"),
                                {{"p0(t)", t, rep.survival}, {"1/(pi k t)", t, envelope}}, "kick t", "p0", true, true));
  std::vector<double> tp(t.begin() + 1, t.end());
  io::write_text(cfg.out / "scaling_polya.svg",
                 svg::line_plot("Polya partial sums", {{"S(T)", tp, rep.polya_partial_sums}}, "T", "sum p0", true, false));
  return rep;
}

/// Entry point shared by the executable and the tests. Returns the exit code.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Quantum search with a resonant kicked-rotor walk in momentum space", "qkr-search"};
  app.set_config("--config", "", "flat key = value file; command-line flags override it");
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);

  ExperimentConfig cfg;
  app.add_option("--k", cfg.kick_strength, "kick strength")->capture_default_str();
  app.add_option("--kicks", cfg.kicks, "kicks per leg")->capture_default_str();
  app.add_option("--window", cfg.window, "momentum window half-width or 'auto'")->capture_default_str();
  app.add_option("--preset", cfg.preset, "initial preset b, c or d (prepare: skip optimization)");
  app.add_option("--coefficients", cfg.coefficients, "explicit real c_-1,c_0,c_+1")->expected(3)->delimiter(',');
  app.add_option("--target", cfg.targets, "target momentum, list a,b,c or range a..b")->capture_default_str();
  app.add_option("--wcut", cfg.cut_halfwidth, "cut half-width")->capture_default_str();
  app.add_option("--strategy", cfg.strategy, "cut or subtract")->capture_default_str();
  app.add_option("--flat-window", cfg.flat_window, "flat window N (even)")->capture_default_str();
  app.add_option("--seed", cfg.seed, "optimizer seed")->capture_default_str();
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  app.add_option("--restarts", cfg.restarts, "optimizer restarts (prepare)")->capture_default_str();
  app.add_flag("--complex", cfg.complex_coefficients, "optimize complex coefficients (prepare)");
  app.add_flag("!--no-oracle", cfg.oracle, "skip the marking step (search)");
  app.add_option("--ks", cfg.kick_list, "comma-separated kick strengths (sweep)")->delimiter(',');
  app.add_option("--t-max", cfg.t_max, "number of kicks (scaling)")->capture_default_str();
  app.add_option("--threshold", cfg.threshold, "one-shot hitting-time threshold (scaling)")->capture_default_str();

  auto* prepare = app.add_subcommand("prepare", "optimize (or evaluate) the initial superposition");
  auto* search = app.add_subcommand("search", "run the marked search protocol for one target");
  auto* sweep = app.add_subcommand("sweep", "run the protocol over target and k lists");
  auto* scaling = app.add_subcommand("scaling", "ballistic width, survival and recurrence diagnostics");
  for (auto* sub : {prepare, search, sweep, scaling}) sub->fallthrough();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return success;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return config_failure;
  }

  try {
    if (*prepare) {
      const auto r = cmd_prepare(cfg);
      out << fmt::format("coefficients ({:.6f}, {:.6f}, {:.6f}) cost {:.6g} (preset b {:.6g})\n", r.result.coefficients[0].real(),
                         r.result.coefficients[1].real(), r.result.coefficients[2].real(), r.result.cost, r.result.baseline_cost);
      return success;
    }
    if (*search) {
      const auto r = cmd_search(cfg);
      out << fmt::format("target {}: flank {}, refocus {}, fidelity {:.12f}\n", r.record.target(),
                         r.flank ? std::to_string(r.flank->n_hat) : "-", r.refocus ? std::to_string(r.refocus->n_hat) : "-",
                         r.record.round_trip_fidelity());
      for (const auto& e : r.errors) err << "estimation failed: " << e << '\n';
      return r.exit;
    }
    if (*sweep) {
      cmd_sweep(cfg, out);
      return success;
    }
    if (*scaling) {
      const auto r = cmd_scaling(cfg, out);
      out << fmt::format("width slope {:.6f}, survival exponent {}\n", r.fitted_width_slope,
                         r.fitted_survival_exponent ? fmt::format("{:.4f}", *r.fitted_survival_exponent) : "n/a");
      return success;
    }
  } catch (const truncation_error& e) {
    err << "numerical error: " << e.what() << '\n';
    return numerical_failure;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return config_failure;
  } catch (const std::out_of_range& e) {
    err << "config error: " << e.what() << '\n';
    return config_failure;
  }
  return config_failure;
}

}  // namespace qkr::cli
