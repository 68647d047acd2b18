#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "kmedian/kmedian.hpp"
#include "test_util.hpp"

using namespace kmedian;

namespace {

const auto lev = [](const std::string& a, const std::string& b) { return static_cast<double>(levenshtein(a, b)); };

}  // namespace

TEST(LowerBound, TwoObjectsAndIdenticalCopies) {
  ObjectSet<std::string> pair({"kitten", "sitting"});
  EXPECT_DOUBLE_EQ(lower_bound_pairwise(pair, lev), 3.0);
  ObjectSet<std::string> same({"abc", "abc", "abc", "abc"});
  EXPECT_DOUBLE_EQ(lower_bound_pairwise(same, lev), 0.0);
  ObjectSet<std::string> one({"abc"});
  EXPECT_DOUBLE_EQ(lower_bound_pairwise(one, lev), 0.0);
}

TEST(LowerBound, MatrixOverloadAgrees) {
  ObjectSet<std::string> set({"ab", "ba", "aab", "bbb", "a"});
  const auto d = DistanceMatrix::build(set.size(), [&](std::size_t i, std::size_t j) { return lev(set[i], set[j]); });
  EXPECT_DOUBLE_EQ(lower_bound_pairwise(DistanceMatrix(d), set.size()), lower_bound_pairwise(set, lev));
}

TEST(LowerBound, BelowExhaustiveMinimum) {
  const auto universe = testutil::all_strings("ab", 6);
  Rng rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::string> objs;
    for (int i = 0; i < 4; ++i) objs.push_back(testutil::random_string(rng, 1, 6, "ab"));
    ObjectSet<std::string> set(objs);
    double best = 1e300;
    for (const auto& u : universe) best = std::min(best, sod(set, u, lev));
    EXPECT_LE(lower_bound_pairwise(set, lev), best + 1e-12);
  }
}

TEST(NormalizedSod, Examples) {
  EXPECT_DOUBLE_EQ(normalized_sod(5.0, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(normalized_sod(10.0, 5.0), 1.0);
  EXPECT_DOUBLE_EQ(normalized_sod(7.5, 5.0), 0.5);
  EXPECT_THROW(normalized_sod(1.0, 0.0), ComputationError);
}

TEST(Ncc, Examples) {
  const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8}, z{4, 3, 2, 1};
  EXPECT_NEAR(ncc(x, y), 1.0, 1e-15);
  EXPECT_NEAR(ncc(x, z), -1.0, 1e-15);
  const std::vector<double> shifted{101, 102, 103, 104};
  EXPECT_NEAR(ncc(x, shifted), 1.0, 1e-12);
  const std::vector<double> flat{3, 3, 3, 3};
  EXPECT_THROW(ncc(x, flat), ComputationError);
  EXPECT_THROW(ncc(x, std::vector<double>{1, 2}), ComputationError);
}

TEST(Ncc, MatchesPearsonOracle) {
  Rng rng(17);
  std::vector<double> x, y;
  for (int i = 0; i < 40; ++i) {
    x.push_back(rng.uniform01());
    y.push_back(x.back() * 0.5 + rng.uniform01());
  }
  double mx = 0, my = 0;
  for (int i = 0; i < 40; ++i) {
    mx += x[i] / 40;
    my += y[i] / 40;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 40; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  EXPECT_NEAR(ncc(x, y), sxy / std::sqrt(sxx * syy), 1e-12);
}

TEST(Histogram, CountsEveryValue) {
  const std::vector<double> v{0.0, 0.1, 0.5, 0.99, 1.0, 1.0};
  const auto h = histogram(v, 4, 0.0, 1.0);
  ASSERT_EQ(h.edges.size(), 5u);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{2, 0, 1, 3}));
  EXPECT_THROW(histogram(v, 0, 0.0, 1.0), ConfigError);
}

TEST(Distortion, ExactScaleForDistanceSubstitutionKernels) {
  StringGenParams p;
  p.count = 12;
  p.min_length = 5;
  p.max_length = 25;
  ObjectSet<std::string> set(gen_strings(21, p));
  struct Case {
    KernelVariant v;
    double c;
  };
  for (const auto& [v, c] : {Case{KernelVariant::lin, 1.0}, Case{KernelVariant::nd, 1.0 / std::sqrt(2.0)},
                             Case{KernelVariant::pol, 1.0}, Case{KernelVariant::comb, 1.0 / std::sqrt(3.0)}}) {
    KernelSpec spec;
    spec.variant = v;
    const auto r = distortion_ratios(set, spec, StringAdapter{});
    ASSERT_FALSE(r.ratios.empty());
    for (double x : r.ratios) EXPECT_NEAR(x, c, 1e-9);
    EXPECT_LT(r.stddev(), 1e-9);
    ASSERT_TRUE(r.ncc.has_value());
    EXPECT_NEAR(*r.ncc, 1.0, 1e-9);
    std::size_t total = 0;
    for (auto n : r.histogram.counts) total += n;
    EXPECT_EQ(total, r.ratios.size());
  }
}

TEST(Distortion, SkipsZeroDistancePairs) {
  ObjectSet<std::string> set({"abc", "abc", "abd"});
  const auto r = distortion_ratios(set, KernelSpec{}, StringAdapter{});
  EXPECT_EQ(r.zero_distance_pairs, 1u);
  EXPECT_EQ(r.ratios.size(), 2u);
  EXPECT_FALSE(r.ncc.has_value());
  ObjectSet<std::string> one({"abc"});
  EXPECT_THROW(distortion_ratios(one, KernelSpec{}, StringAdapter{}), DataError);
}

TEST(LaplaceSigma, MeanAbsoluteDeviation) {
  ObjectSet<std::string> set({"aaa", "aab", "abb", "bbb"});
  EXPECT_DOUBLE_EQ(laplace_sigma(set, std::string("aab"), lev), (1.0 + 0.0 + 1.0 + 2.0) / 4.0);
}

TEST(LaplaceSigma, MaximizesLikelihood) {
  // log L(sigma) = -n log(2 sigma) - sod / sigma; scan sigma on a fine grid
  ObjectSet<std::string> set({"kitten", "sitting", "mitten", "knitting", "bitten"});
  const std::string m = "kitten";
  const double s = sod(set, m, lev);
  const double n = static_cast<double>(set.size());
  double best = 0.0, best_ll = -1e300;
  for (double sigma = 0.01; sigma < 10.0; sigma += 0.001) {
    const double ll = -n * std::log(2.0 * sigma) - s / sigma;
    if (ll > best_ll) {
      best_ll = ll;
      best = sigma;
    }
  }
  EXPECT_NEAR(laplace_sigma(set, m, lev), best, 1e-3);
}

TEST(ConvergenceStats, MaxMedianAndComplexCounts) {
  std::vector<WeightVector> runs(3);
  runs[0].iteration = 5;
  runs[1].iteration = 30;
  runs[1].complex_count = 2;
  runs[2].iteration = 9;
  runs[0].converged = runs[2].converged = true;
  const auto r = convergence_stats(runs);
  EXPECT_EQ(r.max_iter, 30);
  EXPECT_EQ(r.med_iter, 9);
  EXPECT_EQ(r.complex_weight_count, 2u);
  EXPECT_EQ(r.runs_with_complex, 1u);
  EXPECT_EQ(r.converged_runs, 2u);
  runs.pop_back();
  EXPECT_EQ(convergence_stats(runs).med_iter, 5);
  EXPECT_THROW(convergence_stats(std::span<const WeightVector>{}), DataError);
}
