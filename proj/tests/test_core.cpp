#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "kmedian/core.hpp"
#include "kmedian/euclidean.hpp"

using namespace kmedian;

TEST(ObjectSet, RejectsEmpty) {
  EXPECT_THROW(ObjectSet<int>(std::vector<int>{}), DataError);
  ObjectSet<int> s({3, 1, 2});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s[1], 1);
}

TEST(NormalizeDistance, SymmetrizesAndZeroesDiagonal) {
  // d(x, y) = 2x + y is neither symmetric nor zero on the diagonal.
  auto d = normalize_distance([](int x, int y) { return 2.0 * x + y; });
  for (int a = 0; a < 4; ++a) {
    EXPECT_DOUBLE_EQ(d(a, a), 0.0);
    for (int b = 0; b < 4; ++b) {
      EXPECT_DOUBLE_EQ(d(a, b), d(b, a));
      EXPECT_GE(d(a, b), 0.0);
    }
  }
  // symmetric part 1.5(a+b), shifted by the mean of the diagonal terms: 0
  EXPECT_DOUBLE_EQ(d(1, 3), 0.0);
}

TEST(Sod, MatchesManualSum) {
  ObjectSet<int> s({1, 4, 9});
  const auto d = [](int a, int b) { return std::abs(a - b); };
  EXPECT_DOUBLE_EQ(sod(s, 4, d), 3.0 + 0.0 + 5.0);
}

TEST(SymmetricMatrix, BuildAndAppend) {
  auto m = SymmetricMatrix::build(3, [](std::size_t i, std::size_t j) { return 10.0 * i + j; });
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      EXPECT_DOUBLE_EQ(m(i, j), 10.0 * i + j);
      EXPECT_DOUBLE_EQ(m(j, i), m(i, j));
    }
  std::vector<double> row{1, 2, 3, 4};
  m.append(row);
  EXPECT_EQ(m.size(), 4u);
  EXPECT_DOUBLE_EQ(m(3, 1), 2.0);
  EXPECT_DOUBLE_EQ(m(1, 3), 2.0);
  EXPECT_DOUBLE_EQ(m(3, 3), 4.0);
}

TEST(PrincipalSqrt, Branches) {
  EXPECT_EQ(principal_sqrt(Complex(4.0, 0.0)), Complex(2.0, 0.0));
  EXPECT_EQ(principal_sqrt(Complex(-4.0, 0.0)), Complex(0.0, 2.0));
  EXPECT_EQ(principal_sqrt(Complex(-4.0, -0.0)), Complex(0.0, 2.0));
  const Complex z(3.0, -4.0);
  EXPECT_NEAR(std::abs(principal_sqrt(z) - Complex(2.0, -1.0)), 0.0, 1e-12);
}

TEST(KernelSquaredDistance, DotProductGramGivesSquaredEuclidean) {
  const std::vector<Point> pts{{0, 0}, {3, 4}, {-1, 2}};
  const auto g = GramMatrix::build(3, [&](std::size_t i, std::size_t j) { return dot(pts[i], pts[j]); });
  const EuclideanAdapter e;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double d = e.distance(pts[i], pts[j]);
      EXPECT_NEAR(kernel_squared_distance(g, i, j), d * d, 1e-12);
      EXPECT_NEAR(std::abs(kernel_norm(g, i, j)), d, 1e-12);
    }
}

TEST(KernelNorm, NegativeSquaredDistanceIsImaginary) {
  GramMatrix g = GramMatrix::build(2, [](std::size_t i, std::size_t j) { return i == j ? 0.0 : 1.0; });
  EXPECT_DOUBLE_EQ(kernel_squared_distance(g, 0, 1), -2.0);
  const Complex n = kernel_norm(g, 0, 1);
  EXPECT_DOUBLE_EQ(n.real(), 0.0);
  EXPECT_NEAR(n.imag(), std::sqrt(2.0), 1e-15);
}

TEST(RoundHalfUp, Ties) {
  EXPECT_EQ(detail::round_half_up(2.5), 3);
  EXPECT_EQ(detail::round_half_up(0.5), 1);
  EXPECT_EQ(detail::round_half_up(2.4), 2);
  EXPECT_EQ(detail::round_half_up(0.0), 0);
  // 0.3 * 5 is 1.4999999999999998 in binary
  EXPECT_EQ(detail::round_half_up(0.3 * 5.0), 2);
}

TEST(EuclideanAdapter, Interpolates) {
  const EuclideanAdapter e;
  const auto m = e.weighted_mean({0, 0}, {4, 2}, 0.25);
  EXPECT_DOUBLE_EQ(m[0], 1.0);
  EXPECT_DOUBLE_EQ(m[1], 0.5);
  EXPECT_THROW(e.distance({0}, {0, 1}), DataError);
}
