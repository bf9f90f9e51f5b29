#include <cstdio>
#include <numeric>

#include <gtest/gtest.h>

#include "knights/core.h"
#include "knights/errors.h"
#include "knights/simulator.h"

using namespace knights;

namespace {

SimConfig config(std::string strategy, std::string behavior, std::vector<int> ns,
                 int trials) {
  SimConfig c;
  c.strategy = std::move(strategy);
  c.behavior = std::move(behavior);
  c.ns = std::move(ns);
  c.trials = trials;
  c.seed = 99;
  return c;
}

}  // namespace

TEST(EllRules, HalfQuarterExplicit) {
  EXPECT_EQ(ell_for(EllRule::kHalf, 21, 0), 10);
  EXPECT_EQ(ell_for(EllRule::kHalf, 20, 0), 9);
  EXPECT_EQ(ell_for(EllRule::kQuarter, 21, 0), 5);
  EXPECT_EQ(ell_for(EllRule::kExplicit, 21, 3), 3);
  EXPECT_EQ(parse_ell_rule("quarter"), EllRule::kQuarter);
  EXPECT_THROW(parse_ell_rule("third"), ParameterError);
}

TEST(Batch, ReproducibleAndIndependentOfThreads) {
  SimConfig c = config("chain-building", "random:5", {15, 40}, 300);
  c.threads = 1;
  const std::string one = to_csv(run_batch(c));
  c.threads = 4;
  const SimReport four = run_batch(c);
  EXPECT_EQ(to_csv(four), one);
  EXPECT_EQ(histogram_csv(four.points[0]), histogram_csv(run_batch(c).points[0]));
  c.seed = 100;
  EXPECT_NE(to_csv(run_batch(c)), one);
  EXPECT_EQ(trial_seed(7, 10, 3), trial_seed(7, 10, 3));
  EXPECT_NE(trial_seed(7, 10, 3), trial_seed(7, 10, 4));
  EXPECT_NE(trial_seed(7, 10, 3), trial_seed(7, 11, 3));
}

TEST(Batch, TruthfulSpiderAsksTheFullBudgetEveryTrial) {
  const SimReport r = run_batch(config("spider", "truthful", {11, 30, 61}, 200));
  for (const SimPoint& p : r.points) {
    EXPECT_EQ(p.min, p.n + p.ell - 1);
    EXPECT_EQ(p.max, p.n + p.ell - 1);
    EXPECT_EQ(p.stddev, 0);
    EXPECT_EQ(p.violations, 0);
  }
}

TEST(Batch, ChainBuildingBeatsSpiderAtOneHundred) {
  const SimPoint spider = run_batch(config("spider", "spyish", {100}, 1000)).points[0];
  const SimPoint chains =
      run_batch(config("chain-building", "spyish", {100}, 1000)).points[0];
  EXPECT_LT(chains.mean, spider.mean);
  EXPECT_EQ(spider.violations, 0);
  // Average-case target n + 3l/4: reported only.
  RecordProperty("spider_mean", std::to_string(spider.mean));
  RecordProperty("spider_within_three_quarters", spider.within_three_quarters());
  std::printf("n=100 spyish: spider mean %.2f, chain-building mean %.2f, target %.2f\n",
              spider.mean, chains.mean, 100 + 0.75 * spider.ell);
}

TEST(Batch, HistogramTotalsTrials) {
  const SimReport r = run_batch(config("modified-spider", "knavish", {25}, 500));
  const SimPoint& p = r.points.at(0);
  const std::int64_t total = std::accumulate(
      p.histogram.begin(), p.histogram.end(), std::int64_t{0},
      [](std::int64_t acc, const auto& kv) { return acc + kv.second; });
  EXPECT_EQ(total, 500);
  EXPECT_EQ(p.histogram.begin()->first, p.min);
  EXPECT_EQ(p.histogram.rbegin()->first, p.max);
  EXPECT_LE(p.min, p.mean);
  EXPECT_GE(p.max, p.mean);
}

TEST(Batch, ExplicitSpyCount) {
  SimConfig c = config("spider", "knavish", {21}, 100);
  c.spies = 0;
  const SimPoint p = run_batch(c).points.at(0);
  EXPECT_EQ(p.spies, 0);
  EXPECT_EQ(p.max, 21 + p.ell - 1);
}

TEST(Batch, CsvLayout) {
  EXPECT_EQ(csv_header(), "n,l,s,strategy,behavior,trials,mean,stddev,min,max,violations,seed");
  const std::string csv = to_csv(run_batch(config("spider", "spyish", {9}, 10)));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), csv_header());
  EXPECT_NE(csv.find("\n9,4,4,spider,spyish,10,"), std::string::npos);
}

TEST(Batch, LineFitOverSeveralSizes) {
  const SimReport r = run_batch(config("spider", "truthful", {11, 21, 31}, 20));
  ASSERT_TRUE(r.fit.has_value());
  // n + l - 1 with l = (n - 1) / 2 is exactly 1.5 n - 1.5 for odd n.
  EXPECT_NEAR(r.fit->slope, 1.5, 1e-9);
  EXPECT_NEAR(r.fit->intercept, -1.5, 1e-9);
  EXPECT_FALSE(run_batch(config("spider", "truthful", {11}, 5)).fit.has_value());
}

TEST(FitGradient, ExactLineAndDegenerateInput) {
  const LineFit f = fit_gradient({{0, 1}, {1, 3}, {2, 5}});
  EXPECT_NEAR(f.slope, 2, 1e-12);
  EXPECT_NEAR(f.intercept, 1, 1e-12);
  EXPECT_THROW(fit_gradient({{1, 1}, {1, 2}}), ParameterError);
  EXPECT_THROW(fit_gradient({}), ParameterError);
}

TEST(Batch, RejectsBadConfigs) {
  EXPECT_THROW(run_batch(config("oracle", "spyish", {9}, 10)), ParameterError);
  EXPECT_THROW(run_batch(config("spider", "sneaky", {9}, 10)), ParameterError);
  EXPECT_THROW(run_batch(config("spider", "mole", {9}, 10)), UnsupportedModeError);
  EXPECT_THROW(run_batch(config("spider", "spyish", {9}, 0)), ParameterError);
  EXPECT_THROW(run_batch(config("spider", "spyish", {2}, 10)), ParameterError);
  EXPECT_THROW(run_batch(config("spider", "spyish", {}, 10)), ParameterError);
}
