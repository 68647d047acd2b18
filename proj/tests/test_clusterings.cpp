#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "kmedian/kmedian.hpp"
#include "test_util.hpp"

using namespace kmedian;

namespace {

// Maximum agreement over all injective label correspondences.
std::size_t brute_force_distance(const Labels& a, const Labels& b) {
  std::vector<int> la(a.begin(), a.end()), lb(b.begin(), b.end());
  std::sort(la.begin(), la.end());
  la.erase(std::unique(la.begin(), la.end()), la.end());
  std::sort(lb.begin(), lb.end());
  lb.erase(std::unique(lb.begin(), lb.end()), lb.end());
  const std::size_t k = std::max(la.size(), lb.size());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t agree = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto ia = static_cast<std::size_t>(std::lower_bound(la.begin(), la.end(), a[i]) - la.begin());
      const auto ib = static_cast<std::size_t>(std::lower_bound(lb.begin(), lb.end(), b[i]) - lb.begin());
      if (perm[ia] == static_cast<int>(ib)) ++agree;
    }
    best = std::max(best, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return a.size() - best;
}

}  // namespace

TEST(PartitionDistance, Examples) {
  EXPECT_EQ(partition_distance(Labels{1, 1, 2}, Labels{1, 2, 2}), 1u);
  EXPECT_EQ(partition_distance(Labels{1, 1, 2, 2}, Labels{1, 2, 1, 2}), 2u);
  EXPECT_EQ(partition_distance(Labels{0, 0, 0}, Labels{5, 5, 5}), 0u);
  EXPECT_EQ(partition_distance(Labels{0, 1, 2}, Labels{0, 0, 0}), 2u);
  EXPECT_THROW(partition_distance(Labels{0, 1}, Labels{0}), DataError);
}

TEST(PartitionDistance, MatchesBruteForce) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng.uniform_index(10);
    const auto a = testutil::random_labels(rng, m, 1 + static_cast<int>(rng.uniform_index(5)));
    const auto b = testutil::random_labels(rng, m, 1 + static_cast<int>(rng.uniform_index(5)));
    EXPECT_EQ(partition_distance(a, b), brute_force_distance(a, b));
  }
}

TEST(PartitionDistance, MetricAndRelabelInvariance) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.uniform_index(12);
    const auto a = testutil::random_labels(rng, m, 4), b = testutil::random_labels(rng, m, 4),
               c = testutil::random_labels(rng, m, 4);
    EXPECT_EQ(partition_distance(a, b), partition_distance(b, a));
    EXPECT_LE(partition_distance(a, c), partition_distance(a, b) + partition_distance(b, c));
    Labels relabeled(a);
    for (auto& x : relabeled) x = 100 - 7 * x;
    EXPECT_EQ(partition_distance(relabeled, b), partition_distance(a, b));
    EXPECT_EQ(partition_distance(relabeled, a), 0u);
  }
}

TEST(MaxWeightAssignment, MatchesBruteForce) {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(6);
    std::vector<std::vector<long long>> w(n, std::vector<long long>(n));
    for (auto& row : w)
      for (auto& x : row) x = static_cast<long long>(rng.uniform_index(20));
    const auto a = max_weight_assignment(w);
    long long got = 0;
    for (std::size_t i = 0; i < n; ++i) got += w[i][a[i]];
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    long long best = 0;
    do {
      long long s = 0;
      for (std::size_t i = 0; i < n; ++i) s += w[i][perm[i]];
      best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(got, best);
  }
}

TEST(ClusteringWeightedMean, Endpoints) {
  const Labels a{0, 0, 1, 1, 2}, b{3, 1, 1, 3, 3};
  EXPECT_EQ(partition_distance(clustering_weighted_mean(a, b, 0.0), a), 0u);
  EXPECT_EQ(partition_distance(clustering_weighted_mean(a, b, 1.0), b), 0u);
}

TEST(ClusteringWeightedMean, HalfwayExample) {
  const Labels a{1, 1, 2, 2}, b{1, 2, 1, 2};
  const auto m = clustering_weighted_mean(a, b, 0.5);
  EXPECT_EQ(partition_distance(a, m), 1u);
  EXPECT_EQ(partition_distance(m, b), 1u);
}

TEST(ClusteringWeightedMean, GeodesicWithExactStepCount) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng.uniform_index(20);
    const auto a = testutil::random_labels(rng, m, 1 + static_cast<int>(rng.uniform_index(6)));
    const auto b = testutil::random_labels(rng, m, 1 + static_cast<int>(rng.uniform_index(6)));
    const double alpha = rng.uniform01();
    const auto w = clustering_weighted_mean(a, b, alpha);
    const auto d = partition_distance(a, b);
    const auto d1 = partition_distance(a, w), d2 = partition_distance(w, b);
    EXPECT_EQ(d1 + d2, d);
    EXPECT_EQ(static_cast<long long>(d1), detail::round_half_up(alpha * static_cast<double>(d)));
  }
}

TEST(ClusteringAdapter, KernelSupport) {
  const ClusteringAdapter ad;
  KernelSpec spec;
  spec.variant = KernelVariant::partition;
  EXPECT_DOUBLE_EQ(ad.native_kernel(spec, Labels{0, 0, 1}, Labels{0, 0, 1}), partition_kernel(Labels{0, 0, 1}, Labels{0, 0, 1}));
  spec.variant = KernelVariant::ssk;
  EXPECT_THROW(ad.native_kernel(spec, Labels{0}, Labels{0}), ConfigError);
}
