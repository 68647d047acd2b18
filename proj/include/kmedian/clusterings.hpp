#pragma once

// Clustering object space: label vectors under the partition distance.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kmedian/core.hpp"
#include "kmedian/kernels.hpp"

namespace kmedian {

using Labels = std::vector<int>;

/// Maximum-weight perfect assignment on a square matrix (Hungarian method
/// with potentials). Returns the column assigned to each row.
inline std::vector<std::size_t> max_weight_assignment(const std::vector<std::vector<long long>>& weight) {
  const std::size_t n = weight.size();
  if (n == 0) return {};
  constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
  // 1-based potentials over rows (u) and columns (v); col_owner[j] = row.
  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> col_owner(n + 1, 0), way(n + 1, 0);
  const auto cost = [&](std::size_t i, std::size_t j) { return -weight[i - 1][j - 1]; };

  for (std::size_t row = 1; row <= n; ++row) {
    col_owner[0] = row;
    std::size_t j0 = 0;
    std::vector<long long> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = col_owner[j0];
      long long delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[col_owner[j] - 1] = j - 1;
  return row_to_col;
}

/// Optimal correspondence between the clusters of two label vectors.
struct ClusterMatching {
  std::vector<int> labels1, labels2;  // distinct labels, ascending
  /// For each entry of labels1, the matched index into labels2, or -1.
  std::vector<long long> match;
  std::size_t agreement = 0;  // elements covered by matched cluster pairs
};

inline ClusterMatching match_clusters(std::span<const int> c1, std::span<const int> c2) {
  if (c1.size() != c2.size()) throw DataError("clusterings differ in length");
  ClusterMatching out;
  std::map<int, std::size_t> id1, id2;
  for (int l : c1) id1.emplace(l, 0);
  for (int l : c2) id2.emplace(l, 0);
  for (auto& [label, id] : id1) {
    id = out.labels1.size();
    out.labels1.push_back(label);
  }
  for (auto& [label, id] : id2) {
    id = out.labels2.size();
    out.labels2.push_back(label);
  }
  const std::size_t side = std::max(out.labels1.size(), out.labels2.size());
  std::vector<std::vector<long long>> table(side, std::vector<long long>(side, 0));
  for (std::size_t i = 0; i < c1.size(); ++i) ++table[id1[c1[i]]][id2[c2[i]]];

  const auto assignment = max_weight_assignment(table);
  out.match.assign(out.labels1.size(), -1);
  for (std::size_t r = 0; r < out.labels1.size(); ++r) {
    const std::size_t c = assignment[r];
    if (c < out.labels2.size() && table[r][c] > 0) {
      out.match[r] = static_cast<long long>(c);
      out.agreement += static_cast<std::size_t>(table[r][c]);
    }
  }
  return out;
}

/// Minimum number of elements that must change cluster for the two
/// partitions to coincide. Labels themselves are irrelevant.
inline std::size_t partition_distance(std::span<const int> c1, std::span<const int> c2) {
  return c1.size() - match_clusters(c1, c2).agreement;
}

/// Moves round(alpha * d) disagreeing elements of `c1`, lowest index first,
/// into the cluster they occupy in `c2`. The result keeps c1's labels;
/// clusters of c2 without a counterpart get fresh labels above c1's maximum.
inline Labels clustering_weighted_mean(std::span<const int> c1, std::span<const int> c2, double alpha) {
  const auto matching = match_clusters(c1, c2);
  const std::size_t d = c1.size() - matching.agreement;
  long long steps = detail::round_half_up(alpha * static_cast<double>(d));
  steps = std::clamp<long long>(steps, 0, static_cast<long long>(d));

  std::map<int, int> forward;   // c1 label -> c2 label, matched clusters only
  std::map<int, int> backward;  // c2 label -> label in c1's space
  for (std::size_t r = 0; r < matching.labels1.size(); ++r) {
    if (matching.match[r] >= 0) {
      const int l2 = matching.labels2[static_cast<std::size_t>(matching.match[r])];
      forward[matching.labels1[r]] = l2;
      backward[l2] = matching.labels1[r];
    }
  }
  int fresh = c1.empty() ? 0 : *std::max_element(c1.begin(), c1.end()) + 1;
  for (int l2 : matching.labels2) {
    if (!backward.contains(l2)) backward[l2] = fresh++;
  }

  Labels out(c1.begin(), c1.end());
  long long remaining = steps;
  for (std::size_t i = 0; i < c1.size() && remaining > 0; ++i) {
    const auto it = forward.find(c1[i]);
    const bool agrees = it != forward.end() && it->second == c2[i];
    if (agrees) continue;
    out[i] = backward[c2[i]];
    --remaining;
  }
  return out;
}

struct ClusteringAdapter {
  using object_type = Labels;

  double distance(const Labels& a, const Labels& b) const {
    return static_cast<double>(partition_distance(a, b));
  }
  Labels weighted_mean(const Labels& a, const Labels& b, double alpha) const {
    return clustering_weighted_mean(a, b, alpha);
  }
  double native_kernel(const KernelSpec& spec, const Labels& a, const Labels& b) const {
    if (spec.variant != KernelVariant::partition) {
      throw ConfigError("kernel '" + std::string(to_string(spec.variant)) + "' is not defined on clusterings");
    }
    return partition_kernel(a, b);
  }
};

}  // namespace kmedian
