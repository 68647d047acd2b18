#pragma once

// Kernel functions: the distance substitution family (lin, nd, pol, rbf),
// the summed multi-origin combination kernel, and the three domain kernels
// (string subsequence, partition, Kendall).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kmedian/core.hpp"
#include "kmedian/random.hpp"

namespace kmedian {

enum class KernelVariant { lin, nd, pol, rbf, comb, ssk, partition, kendall };

inline std::string_view to_string(KernelVariant v) {
  switch (v) {
    case KernelVariant::lin: return "lin";
    case KernelVariant::nd: return "nd";
    case KernelVariant::pol: return "pol";
    case KernelVariant::rbf: return "rbf";
    case KernelVariant::comb: return "comb";
    case KernelVariant::ssk: return "ssk";
    case KernelVariant::partition: return "partition";
    case KernelVariant::kendall: return "kendall";
  }
  return "?";
}

inline KernelVariant parse_kernel_variant(std::string_view name) {
  for (auto v : {KernelVariant::lin, KernelVariant::nd, KernelVariant::pol, KernelVariant::rbf,
                 KernelVariant::comb, KernelVariant::ssk, KernelVariant::partition,
                 KernelVariant::kendall}) {
    if (to_string(v) == name) return v;
  }
  throw ConfigError("unknown kernel '" + std::string(name) + "'");
}

/// True for kernels that only consume distances.
inline bool is_distance_substitution(KernelVariant v) {
  return v == KernelVariant::lin || v == KernelVariant::nd || v == KernelVariant::pol ||
         v == KernelVariant::rbf || v == KernelVariant::comb;
}

/// True for kernels that take a scalar product relative to origin objects.
inline bool uses_origins(KernelVariant v) {
  return v == KernelVariant::lin || v == KernelVariant::pol || v == KernelVariant::comb;
}

struct KernelSpec {
  KernelVariant variant = KernelVariant::lin;
  double beta = 2.0;               // nd exponent
  double gamma = 1.0;              // pol / rbf scale
  int degree = 1;                  // pol degree
  double lambda = 0.5;             // ssk decay
  int subsequence_length = 2;      // ssk |u|
  std::vector<std::size_t> origins;  // explicit origin indices; empty selects them
  std::size_t origin_count = 3;    // comb origin count when selected

  void validate() const {
    if (!(beta >= 0.0 && beta <= 2.0)) throw ConfigError("beta must lie in [0, 2]");
    if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
    if (degree < 1) throw ConfigError("polynomial degree must be >= 1");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in (0, 1]");
    if (subsequence_length < 1) throw ConfigError("subsequence length must be >= 1");
    if (variant == KernelVariant::comb && origins.empty() && origin_count < 1) {
      throw ConfigError("comb kernel needs at least one origin");
    }
  }
};

/// Reference objects for the scalar-product kernels, drawn from the input set.
template <class T>
struct OriginSet {
  std::vector<std::size_t> indices;
  std::vector<T> members;
};

/// <a,b> relative to origin o, from the three distances involved.
inline double dsk_scalar_product(double d_ao, double d_bo, double d_ab) {
  return 0.5 * (d_ao * d_ao + d_bo * d_bo - d_ab * d_ab);
}

/// Distance substitution kernel from precomputed distances. `d_a_origins`
/// and `d_b_origins` hold the distances of a and b to every origin.
inline double dsk_eval_distances(const KernelSpec& spec, double d_ab,
                                 std::span<const double> d_a_origins,
                                 std::span<const double> d_b_origins) {
  switch (spec.variant) {
    case KernelVariant::lin:
      if (d_a_origins.empty()) throw ConfigError("lin kernel needs an origin");
      return dsk_scalar_product(d_a_origins[0], d_b_origins[0], d_ab);
    case KernelVariant::nd:
      return -std::pow(d_ab, spec.beta);
    case KernelVariant::pol: {
      if (d_a_origins.empty()) throw ConfigError("pol kernel needs an origin");
      const double s = dsk_scalar_product(d_a_origins[0], d_b_origins[0], d_ab);
      return std::pow(1.0 + spec.gamma * s, spec.degree);
    }
    case KernelVariant::rbf:
      return std::exp(-spec.gamma * d_ab * d_ab);
    case KernelVariant::comb: {
      if (d_a_origins.empty()) throw ConfigError("comb kernel needs at least one origin");
      double total = 0.0;
      for (std::size_t k = 0; k < d_a_origins.size(); ++k) {
        total += dsk_scalar_product(d_a_origins[k], d_b_origins[k], d_ab);
      }
      return total;
    }
    default:
      throw ConfigError("kernel '" + std::string(to_string(spec.variant)) +
                        "' is not a distance substitution kernel");
  }
}

/// Distance substitution kernel evaluated on objects.
template <class T, class Distance>
double dsk_eval(const KernelSpec& spec, const T& a, const T& b, const Distance& distance,
                const OriginSet<T>& origins) {
  std::vector<double> da, db;
  if (uses_origins(spec.variant)) {
    if (origins.members.empty()) {
      throw ConfigError("kernel '" + std::string(to_string(spec.variant)) + "' needs origins");
    }
    const std::size_t used = spec.variant == KernelVariant::comb ? origins.members.size() : 1;
    for (std::size_t k = 0; k < used; ++k) {
      da.push_back(distance(a, origins.members[k]));
      db.push_back(distance(b, origins.members[k]));
    }
  }
  return dsk_eval_distances(spec, distance(a, b), da, db);
}

/// k-medians selection of `k` origin indices over a precomputed distance
/// matrix restricted to the first `n` indices.
///
/// Seeding picks the first medoid from `seed` and the rest farthest-first;
/// then assignment and medoid update alternate until stable. Each returned
/// index minimizes the within-cluster sum of distances of its cluster.
inline std::vector<std::size_t> select_origin_indices(const DistanceMatrix& dist, std::size_t n,
                                                      std::size_t k, std::uint64_t seed) {
  if (k < 1) throw ConfigError("origin count must be >= 1");
  if (k > n) throw ConfigError("origin count exceeds the number of objects");

  std::vector<std::size_t> medoids;
  std::vector<char> chosen(n, 0);
  Rng rng(seed);
  medoids.push_back(static_cast<std::size_t>(rng.uniform_index(n)));
  chosen[medoids[0]] = 1;
  while (medoids.size() < k) {
    std::size_t best = n;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      double gap = std::numeric_limits<double>::infinity();
      for (auto m : medoids) gap = std::min(gap, dist(i, m));
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    medoids.push_back(best);
    chosen[best] = 1;
  }

  std::vector<std::size_t> assignment(n, 0);
  for (int round = 0; round < 100; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t arg = 0;
      for (std::size_t c = 1; c < k; ++c) {
        if (dist(i, medoids[c]) < dist(i, medoids[arg])) arg = c;
      }
      assignment[i] = arg;
    }
    bool changed = false;
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t best = medoids[c];
      double best_sod = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (assignment[i] != c) continue;
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (assignment[j] == c) s += dist(i, j);
        }
        if (s < best_sod) {
          best_sod = s;
          best = i;
        }
      }
      // An empty cluster keeps its medoid.
      if (best_sod < std::numeric_limits<double>::infinity() && best != medoids[c]) {
        medoids[c] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return medoids;
}

template <class T, class Distance>
OriginSet<T> select_origins(const ObjectSet<T>& set, std::size_t k, const Distance& distance,
                            std::uint64_t seed) {
  const auto dist = DistanceMatrix(SymmetricMatrix::build(set.size(), [&](std::size_t i, std::size_t j) {
    return i == j ? 0.0 : static_cast<double>(distance(set[i], set[j]));
  }));
  OriginSet<T> out;
  out.indices = select_origin_indices(dist, set.size(), k, seed);
  for (auto i : out.indices) out.members.push_back(set[i]);
  return out;
}

/// String subsequence kernel: sum over all length-`length` subsequences u of
/// phi_u(s) * phi_u(t), where phi_u(s) sums lambda^(span) over occurrences.
/// Evaluated with the standard O(length * |s| * |t|) recursion.
inline double ssk_eval(std::string_view s, std::string_view t, int length, double lambda) {
  const std::size_t n = s.size(), m = t.size();
  const auto p = static_cast<std::size_t>(length);
  if (length < 1) throw ConfigError("subsequence length must be >= 1");
  if (n < p || m < p) return 0.0;

  // kp[i][j] holds K'_q(s[0:i], t[0:j]) for the current q.
  const std::size_t w = m + 1;
  std::vector<double> kp((n + 1) * w, 1.0);
  std::vector<double> next((n + 1) * w, 0.0);
  const double l2 = lambda * lambda;

  for (std::size_t q = 1; q < p; ++q) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = q; i <= n; ++i) {
      double kpp = 0.0;  // K''_q(s[0:i], t[0:j])
      for (std::size_t j = q; j <= m; ++j) {
        kpp = lambda * kpp + (s[i - 1] == t[j - 1] ? l2 * kp[(i - 1) * w + (j - 1)] : 0.0);
        next[i * w + j] = lambda * next[(i - 1) * w + j] + kpp;
      }
    }
    std::swap(kp, next);
  }

  double total = 0.0;
  for (std::size_t i = p; i <= n; ++i) {
    for (std::size_t j = p; j <= m; ++j) {
      if (s[i - 1] == t[j - 1]) total += l2 * kp[(i - 1) * w + (j - 1)];
    }
  }
  return total;
}

/// Number of element pairs (i < j) sharing a cluster in both label vectors.
inline double partition_kernel(std::span<const int> c1, std::span<const int> c2) {
  if (c1.size() != c2.size()) throw DataError("partition kernel: label vectors differ in length");
  std::unordered_map<std::uint64_t, std::uint64_t> cells;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    const auto key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c1[i])) << 32) |
                     static_cast<std::uint32_t>(c2[i]);
    ++cells[key];
  }
  std::uint64_t pairs = 0;
  for (const auto& [key, count] : cells) pairs += count * (count - 1) / 2;
  return static_cast<double>(pairs);
}

/// (concordant - discordant) / C(m, 2) for two total orders over the same
/// items, each listed from first to last.
inline double kendall_kernel(std::span<const std::string> order1, std::span<const std::string> order2) {
  if (order1.size() != order2.size()) throw DataError("kendall kernel: item sets differ");
  const std::size_t m = order1.size();
  std::unordered_map<std::string_view, std::size_t> pos2;
  for (std::size_t i = 0; i < m; ++i) pos2.emplace(order2[i], i);
  if (pos2.size() != m) throw DataError("kendall kernel: duplicate items");
  std::vector<std::size_t> mapped(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto it = pos2.find(order1[i]);
    if (it == pos2.end()) throw DataError("kendall kernel: item sets differ");
    mapped[i] = it->second;
  }
  if (m < 2) return 1.0;
  long long concordant_minus_discordant = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      concordant_minus_discordant += mapped[i] < mapped[j] ? 1 : -1;
    }
  }
  const double pairs = static_cast<double>(m) * static_cast<double>(m - 1) / 2.0;
  return static_cast<double>(concordant_minus_discordant) / pairs;
}

}  // namespace kmedian
