#pragma once

#include <fmt/format.h>
#include <fmt/os.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qkr/state.hpp"

namespace qkr::io {

/// 17 significant digits: enough for a lossless double round trip.
inline std::string exact(double v) { return fmt::format("{:.17g}", v); }

/// "t,n,probability" rows sorted by (t, n). times[i] labels dists[i].
inline void write_timeseries_csv(const std::filesystem::path& path, std::span<const int> times,
                                 std::span<const Distribution> dists) {
  if (times.size() != dists.size()) throw std::invalid_argument("write_timeseries_csv: size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "t,n,probability\n";
  for (std::size_t i = 0; i < dists.size(); ++i)
    for (int n = -dists[i].halfwidth(); n <= dists[i].halfwidth(); ++n)
      out << times[i] << ',' << n << ',' << exact(dists[i][n]) << '\n';
}

inline void write_timeseries_csv(const std::filesystem::path& path, std::span<const Distribution> dists,
                                 int first_time = 0) {
  std::vector<int> times(dists.size());
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = first_time + static_cast<int>(i);
  write_timeseries_csv(path, times, dists);
}

/// Inverse of write_timeseries_csv. Returns t -> Distribution.
inline std::map<int, Distribution> read_timeseries_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "t,n,probability") throw std::runtime_error(path.string() + ": unexpected header '" + line + "'");
  std::map<int, std::vector<std::pair<int, double>>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string t, n, p;
    std::getline(fields, t, ',');
    std::getline(fields, n, ',');
    std::getline(fields, p);
    rows[std::stoi(t)].emplace_back(std::stoi(n), std::stod(p));
  }
  std::map<int, Distribution> out;
  for (auto& [t, entries] : rows) {
    const int half = static_cast<int>(entries.size() / 2);
    std::vector<double> probs(entries.size());
    for (const auto& [n, p] : entries) {
      if (n < -half || n > half) throw std::runtime_error("non-contiguous momentum rows at t=" + std::to_string(t));
      probs[static_cast<std::size_t>(n + half)] = p;
    }
    out.emplace(t, Distribution(half, std::move(probs)));
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace qkr::io
