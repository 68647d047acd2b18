#pragma once

// Seeded synthetic datasets: random or perturbed strings, label vectors and
// rankings with ties. Every generator is a pure function of its seed and
// parameters.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kmedian/clusterings.hpp"
#include "kmedian/core.hpp"
#include "kmedian/random.hpp"
#include "kmedian/rankings.hpp"

namespace kmedian {

enum class GenMode { random, perturbed };

struct StringGenParams {
  std::size_t count = 10;
  std::size_t min_length = 50;
  std::size_t max_length = 100;
  std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
  double perturb_rate = 0.0;
  GenMode mode = GenMode::random;

  void validate() const {
    if (count < 1) throw ConfigError("count must be >= 1");
    if (min_length > max_length) throw ConfigError("invalid length range");
    if (alphabet.empty()) throw ConfigError("alphabet must not be empty");
    if (!(perturb_rate >= 0.0 && perturb_rate < 1.0)) throw ConfigError("perturb rate must lie in [0, 1)");
    if (mode == GenMode::perturbed && perturb_rate > 0.0 && alphabet.size() < 2) {
      throw ConfigError("substitution needs at least two letters");
    }
  }
};

namespace detail {

inline char random_letter(Rng& rng, const std::string& alphabet) {
  return alphabet[rng.uniform_index(alphabet.size())];
}

inline char other_letter(Rng& rng, const std::string& alphabet, char current) {
  const auto pos = alphabet.find(current);
  if (pos == std::string::npos) return random_letter(rng, alphabet);
  const std::size_t k = rng.uniform_index(alphabet.size() - 1);
  return alphabet[k < pos ? k : k + 1];
}

inline std::string random_string(Rng& rng, std::size_t length, const std::string& alphabet) {
  std::string s(length, ' ');
  for (auto& c : s) c = random_letter(rng, alphabet);
  return s;
}

}  // namespace detail

/// Copy of `base` where each position independently, with probability
/// `rate`, is substituted (by a different letter), preceded by an inserted
/// letter, or deleted, the three chosen uniformly.
inline std::string perturb_string(Rng& rng, const std::string& base, const std::string& alphabet, double rate) {
  std::string out;
  out.reserve(base.size() + base.size() / 4);
  for (char c : base) {
    if (!rng.bernoulli(rate)) {
      out.push_back(c);
      continue;
    }
    switch (rng.uniform_index(3)) {
      case 0: out.push_back(detail::other_letter(rng, alphabet, c)); break;
      case 1:
        out.push_back(detail::random_letter(rng, alphabet));
        out.push_back(c);
        break;
      default: break;
    }
  }
  return out;
}

/// Random mode: independent uniform strings. Perturbed mode: one uniform
/// base string and `count` perturbed copies; the base is returned through
/// `base_out` when given.
inline std::vector<std::string> gen_strings(std::uint64_t seed, const StringGenParams& p,
                                            std::string* base_out = nullptr) {
  p.validate();
  Rng rng(seed);
  const auto length = [&] {
    return static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(p.min_length),
                                                    static_cast<std::int64_t>(p.max_length)));
  };
  std::vector<std::string> out;
  if (p.mode == GenMode::random) {
    for (std::size_t i = 0; i < p.count; ++i) out.push_back(detail::random_string(rng, length(), p.alphabet));
    return out;
  }
  const std::string base = detail::random_string(rng, length(), p.alphabet);
  for (std::size_t i = 0; i < p.count; ++i) out.push_back(perturb_string(rng, base, p.alphabet, p.perturb_rate));
  if (base_out) *base_out = base;
  return out;
}

struct ClusteringGenParams {
  std::size_t count = 10;
  std::size_t size = 50;  // elements per label vector
  int min_clusters = 3;
  int max_clusters = 10;
  double perturb_rate = 0.0;
  GenMode mode = GenMode::random;

  void validate() const {
    if (count < 1) throw ConfigError("count must be >= 1");
    if (size < 1) throw ConfigError("clusterings need at least one element");
    if (min_clusters < 1 || min_clusters > max_clusters || static_cast<std::size_t>(max_clusters) > size) {
      throw ConfigError("invalid cluster count range");
    }
    if (!(perturb_rate >= 0.0 && perturb_rate < 1.0)) throw ConfigError("perturb rate must lie in [0, 1)");
  }
};

/// Random mode: for each output a cluster count k is drawn from the range
/// and every element gets a uniform label in [0, k). Perturbed mode: one
/// such base, and copies where each element moves with probability
/// `perturb_rate` to a different uniform label in [0, k).
inline std::vector<Labels> gen_clusterings(std::uint64_t seed, const ClusteringGenParams& p,
                                           Labels* base_out = nullptr) {
  p.validate();
  Rng rng(seed);
  const auto draw = [&](int& k) {
    k = static_cast<int>(rng.uniform_int(p.min_clusters, p.max_clusters));
    Labels l(p.size);
    for (auto& x : l) x = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k)));
    return l;
  };
  std::vector<Labels> out;
  int k = 0;
  if (p.mode == GenMode::random) {
    for (std::size_t i = 0; i < p.count; ++i) out.push_back(draw(k));
    return out;
  }
  const Labels base = draw(k);
  for (std::size_t i = 0; i < p.count; ++i) {
    Labels l = base;
    for (auto& x : l) {
      if (!rng.bernoulli(p.perturb_rate) || k < 2) continue;
      const int r = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k - 1)));
      x = r < x ? r : r + 1;
    }
    out.push_back(std::move(l));
  }
  if (base_out) *base_out = base;
  return out;
}

struct RankingGenParams {
  std::size_t count = 10;
  std::size_t items = 50;
  double tie_prob = 0.0;

  void validate() const {
    if (count < 1) throw ConfigError("count must be >= 1");
    if (items < 1) throw ConfigError("rankings need at least one item");
    if (!(tie_prob >= 0.0 && tie_prob < 1.0)) throw ConfigError("tie probability must lie in [0, 1)");
  }
};

/// Item tokens "1" ... "m".
inline std::vector<std::string> ranking_tokens(std::size_t m) {
  std::vector<std::string> t;
  for (std::size_t i = 1; i <= m; ++i) t.push_back(std::to_string(i));
  return t;
}

/// Uniform permutations of `items` tokens; each adjacent pair is then joined
/// into one bucket with probability `tie_prob`.
inline std::vector<Ranking> gen_rankings(std::uint64_t seed, const RankingGenParams& p) {
  p.validate();
  Rng rng(seed);
  const auto tokens = ranking_tokens(p.items);
  std::vector<Ranking> out;
  for (std::size_t r = 0; r < p.count; ++r) {
    auto perm = tokens;
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
    std::vector<std::vector<std::string>> buckets{{perm[0]}};
    for (std::size_t i = 1; i < perm.size(); ++i) {
      if (rng.bernoulli(p.tie_prob)) {
        buckets.back().push_back(perm[i]);
      } else {
        buckets.push_back({perm[i]});
      }
    }
    out.emplace_back(std::move(buckets));
  }
  return out;
}

}  // namespace kmedian
