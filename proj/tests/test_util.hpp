#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kmedian/kmedian.hpp"

namespace testutil {

inline std::string random_string(kmedian::Rng& rng, std::size_t min_len, std::size_t max_len,
                                 const std::string& alphabet = "abc") {
  const auto n = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(min_len),
                                                          static_cast<std::int64_t>(max_len)));
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[rng.uniform_index(alphabet.size())]);
  return s;
}

inline kmedian::Labels random_labels(kmedian::Rng& rng, std::size_t m, int k) {
  kmedian::Labels l(m);
  for (auto& x : l) x = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k)));
  return l;
}

inline std::vector<double> random_point(kmedian::Rng& rng, std::size_t dim, double scale = 10.0) {
  std::vector<double> p(dim);
  for (auto& x : p) x = (rng.uniform01() * 2.0 - 1.0) * scale;
  return p;
}

/// Smallest eigenvalue of the leading n x n block.
inline double min_eigenvalue(const kmedian::GramMatrix& g, std::size_t n) {
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().minCoeff();
}

/// Levenshtein distance by plain recursion; exponential, for short strings.
inline int levenshtein_recursive(const std::string& s, const std::string& t) {
  if (s.empty()) return static_cast<int>(t.size());
  if (t.empty()) return static_cast<int>(s.size());
  const std::string s1 = s.substr(1), t1 = t.substr(1);
  if (s[0] == t[0]) return levenshtein_recursive(s1, t1);
  return 1 + std::min({levenshtein_recursive(s1, t1), levenshtein_recursive(s1, t), levenshtein_recursive(s, t1)});
}

/// All strings over `alphabet` of length <= max_len.
inline std::vector<std::string> all_strings(const std::string& alphabet, std::size_t max_len) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char c : alphabet) out.push_back(out[i] + c);
    begin = end;
  }
  return out;
}

/// All 13 weak orders on {a, b, c}.
inline std::vector<kmedian::Ranking> weak_orders_abc() {
  using kmedian::Ranking;
  std::vector<Ranking> out;
  std::vector<std::string> items{"a", "b", "c"};
  // assign each item a level in {0,1,2}; keep assignments whose used levels are contiguous from 0
  for (int x = 0; x < 27; ++x) {
    int lv[3] = {x % 3, (x / 3) % 3, x / 9};
    const int top = *std::max_element(lv, lv + 3);
    bool ok = true;
    for (int l = 0; l <= top; ++l) ok = ok && std::count(lv, lv + 3, l) > 0;
    if (!ok) continue;
    std::vector<std::vector<std::string>> buckets(static_cast<std::size_t>(top) + 1);
    for (int i = 0; i < 3; ++i) buckets[static_cast<std::size_t>(lv[i])].push_back(items[static_cast<std::size_t>(i)]);
    out.emplace_back(buckets);
  }
  return out;
}

}  // namespace testutil
