#include <gtest/gtest.h>

#include "qkr/extract.hpp"

using namespace qkr;

namespace {

const WalkParams calibrated = WalkParams::with_auto_window(0.8775, 15);

/// Low flat background with strict peaks at a and b.
Distribution two_peaks(int a, int b, int halfwidth = 40) {
  std::vector<double> p(static_cast<std::size_t>(2 * halfwidth + 1), 1e-3);
  p[static_cast<std::size_t>(a + halfwidth)] = 0.3;
  p[static_cast<std::size_t>(b + halfwidth)] = 0.2;
  return {halfwidth, std::move(p)};
}

SearchRecord run_default(int target, int cut = 3) {
  SearchOptions opt;
  opt.target = target;
  opt.cut_halfwidth = cut;
  return run_search(calibrated, preset("b"), opt);
}

}  // namespace

TEST(FlankEstimator, MidpointOfFlankPeaks) {
  const auto e = extract_flank(two_peaks(-10, 20), -1);
  EXPECT_EQ(e.n_hat, 5);
  EXPECT_EQ(e.method, Method::flank);
  EXPECT_EQ(e.n_left, -10);
  EXPECT_EQ(e.n_right, 20);
  EXPECT_EQ(extract_flank(two_peaks(-12, 12), -1).n_hat, 0);
}

TEST(FlankEstimator, ExactOnAllSyntheticPairs) {
  for (int a = -30; a <= 30; ++a)
    for (int b = a + 2; b <= 30; ++b) {
      const int sum = a + b;
      // Round half toward zero.
      const int expected = sum % 2 == 0 ? sum / 2 : (sum > 0 ? (sum - 1) / 2 : (sum + 1) / 2);
      const auto e = extract_flank(two_peaks(a, b), -1);
      ASSERT_EQ(e.n_hat, expected) << a << "," << b;
      ASSERT_GE(e.confidence_weight, 0.0);
      ASSERT_LE(e.confidence_weight, 1.0);
    }
}

TEST(FlankEstimator, HalfIntegerTiesRoundTowardZero) {
  EXPECT_EQ(extract_flank(two_peaks(2, 5), -1).n_hat, 3);
  EXPECT_EQ(extract_flank(two_peaks(-5, -2), -1).n_hat, -3);
  EXPECT_EQ(extract_flank(two_peaks(-4, 5), -1).n_hat, 0);
}

TEST(FlankEstimator, IgnoresLowPeaksAndExcludedCentre) {
  auto p = std::vector<double>(81, 0.0);
  p[40 - 10] = 1.0;
  p[40 + 20] = 0.5;
  p[40 + 30] = 0.1;  // below 25% of the maximum
  p[40 + 0] = 5.0;   // inside the exclusion window
  const Distribution d(40, std::move(p));
  const auto e = extract_flank(d, 3);
  EXPECT_EQ(e.n_left, -10);
  EXPECT_EQ(e.n_right, 20);
  EXPECT_EQ(prominent_peaks(d, 3, 0.05).back(), 30);
}

TEST(FlankEstimator, FailsWithDiagnostics) {
  const Distribution empty(10, std::vector<double>(21, 0.0));
  EXPECT_THROW(extract_flank(empty, 3), estimation_error);

  std::vector<double> p(21, 0.0);
  p[15] = 0.4;
  try {
    extract_flank(Distribution(10, p), 3);
    FAIL() << "expected estimation_error";
  } catch (const estimation_error& e) {
    ASSERT_EQ(e.peaks().size(), 1u);
    EXPECT_EQ(e.peaks().front(), 5);
  }
}

TEST(FlankEstimator, EndToEndTargetFive) {
  const auto rec = run_default(5);
  EXPECT_EQ(extract_flank(rec.suppressed_distribution(), 3).n_hat, 5);
}

TEST(FlankEstimator, SubtractionStrategyAlsoLocatesTarget) {
  SearchOptions opt;
  opt.target = 5;
  opt.strategy = Strategy::subtract;
  const auto rec = run_search(calibrated, preset("b"), opt);
  EXPECT_EQ(extract_flank(rec.suppressed_distribution(), 3).n_hat, 5);
}

TEST(RefocusEstimator, TargetFiveWithAboutTenPercentWeight) {
  const auto e = extract_refocus(run_default(5));
  EXPECT_EQ(e.n_hat, 5);
  EXPECT_EQ(e.method, Method::refocus);
  EXPECT_NEAR(e.confidence_weight, 0.0927, 0.001);
  EXPECT_FALSE(e.n_left.has_value());
}

TEST(RefocusEstimator, MirroredTarget) {
  const auto plus = extract_refocus(run_default(7));
  const auto minus = extract_refocus(run_default(-7));
  EXPECT_EQ(minus.n_hat, -7);
  EXPECT_NEAR(minus.confidence_weight, plus.confidence_weight, 1e-10);
}

TEST(RefocusEstimator, EmptyFinalDistributionFails) {
  EXPECT_THROW(extract_refocus(run_default(5, calibrated.window_halfwidth)), estimation_error);
}

TEST(RefocusEstimator, NeedsCutRecord) {
  SearchOptions opt;
  opt.strategy = Strategy::subtract;
  EXPECT_THROW(extract_refocus(run_search(calibrated, preset("b"), opt)), std::invalid_argument);
}

TEST(RefocusEstimator, TiesPreferSmallerMomentum) {
  auto rec = run_default(5);
  std::vector<double> p(rec.final_distribution().size(), 0.0);
  const int m = calibrated.window_halfwidth;
  p[static_cast<std::size_t>(m + 6)] = 0.1;
  p[static_cast<std::size_t>(m - 4)] = 0.1;
  p[static_cast<std::size_t>(m + 4)] = 0.1;
  rec.distributions.back() = Distribution(m, p);
  EXPECT_EQ(extract_refocus(rec).n_hat, -4);
}

TEST(SuccessSweep, RefocusFindsEveryBulkTarget) {
  std::vector<int> targets;
  for (int n = -10; n <= 10; ++n) targets.push_back(n);
  const auto rows = success_sweep(calibrated, preset("b"), targets, 3);
  ASSERT_EQ(rows.size(), 21u);
  int flank_bulk = 0;
  for (const auto& r : rows) {
    EXPECT_EQ(r.k, calibrated.kick_strength);
    if (std::abs(r.target) <= 8) EXPECT_TRUE(r.refocus_ok) << r.target;
    if (std::abs(r.target) >= 3 && std::abs(r.target) <= 8) flank_bulk += r.flank_ok;
    EXPECT_GE(r.weight, 0.0);
  }
  EXPECT_GE(flank_bulk, 10);  // 80% of the 12 bulk targets
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].target, targets[i]);
}

TEST(SuccessSweep, CentreTargetIsRecordedHonestly) {
  const std::vector<int> targets{0};
  const auto rows = success_sweep(calibrated, preset("b"), targets, 3);
  ASSERT_EQ(rows.size(), 1u);
  // The target sits inside the cut, yet the refocused walk still returns to it.
  EXPECT_EQ(rows[0].n_hat_refocus, 0);
  EXPECT_EQ(rows[0].n_hat_flank, 0);
  EXPECT_LT(rows[0].weight, 0.1);
}

TEST(SuccessSweep, EmptyAndFailingTargets) {
  EXPECT_TRUE(success_sweep(calibrated, preset("b"), {}, 3).empty());
  const std::vector<int> bad{500};
  const auto rows = success_sweep(calibrated, preset("b"), bad, 3);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_FALSE(rows[0].refocus_ok);
}
