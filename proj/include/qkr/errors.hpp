#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qkr {

/// A momentum index fell outside the simulation window.
class range_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Probability leaked past the window edge during a kick.
class truncation_error : public std::runtime_error {
 public:
  truncation_error(const std::string& what, double lost_mass)
      : std::runtime_error(what), lost_mass_(lost_mass) {}
  double lost_mass() const noexcept { return lost_mass_; }

 private:
  double lost_mass_;
};

/// An estimator could not produce a target. Carries the peaks it did find.
class estimation_error : public std::runtime_error {
 public:
  estimation_error(const std::string& what, std::vector<int> peaks = {})
      : std::runtime_error(what), peaks_(std::move(peaks)) {}
  const std::vector<int>& peaks() const noexcept { return peaks_; }

 private:
  std::vector<int> peaks_;
};

class insufficient_data : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qkr
