#pragma once

// Rankings with ties under the generalized Kendall-tau distance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kmedian/core.hpp"
#include "kmedian/kernels.hpp"

namespace kmedian {

/// Weak order over unique string tokens, best bucket first. Tokens inside a
/// bucket are tied and kept sorted, so equal weak orders compare equal.
class Ranking {
 public:
  Ranking() = default;

  explicit Ranking(std::vector<std::vector<std::string>> buckets) : buckets_(std::move(buckets)) {
    std::set<std::string_view> seen;
    for (auto& bucket : buckets_) {
      if (bucket.empty()) throw DataError("ranking contains an empty bucket");
      std::sort(bucket.begin(), bucket.end());
      for (const auto& item : bucket) {
        if (item.empty()) throw DataError("ranking contains an empty item");
        if (!seen.insert(item).second) throw DataError("ranking repeats item '" + item + "'");
      }
    }
  }

  /// Parses `a>b=c>d`: `>` separates buckets, `=` ties items inside one.
  static Ranking parse(std::string_view text) {
    std::vector<std::vector<std::string>> buckets(1);
    std::string token;
    const auto flush = [&] {
      if (token.empty()) throw DataError("malformed ranking '" + std::string(text) + "'");
      buckets.back().push_back(token);
      token.clear();
    };
    for (char ch : text) {
      if (ch == '>') {
        flush();
        buckets.emplace_back();
      } else if (ch == '=') {
        flush();
      } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
        throw DataError("ranking tokens may not contain whitespace: '" + std::string(text) + "'");
      } else {
        token.push_back(ch);
      }
    }
    flush();
    return Ranking(std::move(buckets));
  }

  std::string str() const {
    std::string out;
    for (std::size_t b = 0; b < buckets_.size(); ++b) {
      if (b) out.push_back('>');
      for (std::size_t i = 0; i < buckets_[b].size(); ++i) {
        if (i) out.push_back('=');
        out += buckets_[b][i];
      }
    }
    return out;
  }

  const std::vector<std::vector<std::string>>& buckets() const noexcept { return buckets_; }
  std::size_t item_count() const noexcept {
    std::size_t n = 0;
    for (const auto& b : buckets_) n += b.size();
    return n;
  }
  bool has_ties() const noexcept {
    return std::any_of(buckets_.begin(), buckets_.end(), [](const auto& b) { return b.size() > 1; });
  }

  /// Items in ranked order; ties keep their sorted order.
  std::vector<std::string> items() const {
    std::vector<std::string> out;
    for (const auto& b : buckets_) out.insert(out.end(), b.begin(), b.end());
    return out;
  }

  friend bool operator==(const Ranking&, const Ranking&) = default;

 private:
  std::vector<std::vector<std::string>> buckets_;
};

namespace detail {

/// Two rankings over a shared item alphabet, as bucket levels per item id.
struct AlignedRankings {
  std::vector<std::string> tokens;  // id -> token, ascending
  std::vector<int> level1, level2;
};

inline std::vector<int> levels_for(const Ranking& r, const std::map<std::string_view, std::size_t>& ids) {
  std::vector<int> level(ids.size(), -1);
  for (std::size_t b = 0; b < r.buckets().size(); ++b) {
    for (const auto& item : r.buckets()[b]) {
      const auto it = ids.find(item);
      if (it == ids.end()) throw DataError("rankings rank different item sets");
      level[it->second] = static_cast<int>(b);
    }
  }
  return level;
}

inline AlignedRankings align(const Ranking& r1, const Ranking& r2) {
  if (r1.item_count() != r2.item_count()) throw DataError("rankings rank different item sets");
  std::map<std::string_view, std::size_t> ids;
  for (const auto& b : r1.buckets()) {
    for (const auto& item : b) ids.emplace(item, 0);
  }
  AlignedRankings out;
  for (auto& [token, id] : ids) {
    id = out.tokens.size();
    out.tokens.emplace_back(token);
  }
  out.level1 = levels_for(r1, ids);
  out.level2 = levels_for(r2, ids);
  return out;
}

inline int sign(int x) { return (x > 0) - (x < 0); }

/// Disagreement of one item pair: 1 if reversed, 0.5 if tied in exactly one.
inline double pair_disagreement(int a1, int b1, int a2, int b2) {
  const int s1 = sign(a1 - b1), s2 = sign(a2 - b2);
  if (s1 == s2) return 0.0;
  return (s1 == 0 || s2 == 0) ? 0.5 : 1.0;
}

inline double tau_levels(const std::vector<int>& l1, const std::vector<int>& l2) {
  double total = 0.0;
  for (std::size_t i = 0; i < l1.size(); ++i) {
    for (std::size_t j = i + 1; j < l1.size(); ++j) total += pair_disagreement(l1[i], l1[j], l2[i], l2[j]);
  }
  return total;
}

/// Disagreement contributed by all pairs containing item x.
inline double item_disagreement(const std::vector<int>& l1, const std::vector<int>& l2, std::size_t x) {
  double total = 0.0;
  for (std::size_t y = 0; y < l1.size(); ++y) {
    if (y != x) total += pair_disagreement(l1[x], l1[y], l2[x], l2[y]);
  }
  return total;
}

/// Mutable weak order used by the greedy weighted mean.
class WorkingOrder {
 public:
  explicit WorkingOrder(const std::vector<int>& levels) {
    int top = levels.empty() ? -1 : *std::max_element(levels.begin(), levels.end());
    buckets_.resize(static_cast<std::size_t>(top + 1));
    for (std::size_t x = 0; x < levels.size(); ++x) buckets_[static_cast<std::size_t>(levels[x])].push_back(x);
    std::erase_if(buckets_, [](const auto& b) { return b.empty(); });
  }

  std::size_t bucket_count() const { return buckets_.size(); }

  std::vector<int> levels(std::size_t items) const {
    std::vector<int> out(items, 0);
    for (std::size_t b = 0; b < buckets_.size(); ++b) {
      for (auto x : buckets_[b]) out[x] = static_cast<int>(b);
    }
    return out;
  }

  /// Levels after removing x and placing it at `slot` of the reduced order:
  /// even slot 2k opens a new bucket before bucket k, odd slot 2k+1 joins
  /// bucket k. Returns the reduced-order slot x currently occupies.
  std::size_t slot_of(std::size_t x) const {
    std::size_t b = 0;
    while (std::find(buckets_[b].begin(), buckets_[b].end(), x) == buckets_[b].end()) ++b;
    return buckets_[b].size() > 1 ? 2 * b + 1 : 2 * b;
  }

  /// Number of slots in the reduced order (x removed).
  std::size_t slot_count(std::size_t x) const {
    const std::size_t reduced = buckets_.size() - (singleton(x) ? 1 : 0);
    return 2 * reduced + 1;
  }

  std::vector<int> levels_with(std::size_t x, std::size_t slot, std::size_t items) const {
    // Doubled levels: reduced bucket k sits at 2k+1, gaps at even values.
    std::vector<int> doubled(items, 0);
    std::size_t k = 0;
    for (const auto& bucket : buckets_) {
      if (bucket.size() == 1 && bucket[0] == x) continue;
      for (auto y : bucket) {
        if (y != x) doubled[y] = static_cast<int>(2 * k + 1);
      }
      ++k;
    }
    doubled[x] = static_cast<int>(slot);
    return doubled;
  }

  void move(std::size_t x, std::size_t slot) {
    for (auto& b : buckets_) std::erase(b, x);
    std::erase_if(buckets_, [](const auto& b) { return b.empty(); });
    const std::size_t k = slot / 2;
    if (slot % 2 == 1) {
      buckets_[k].push_back(x);
    } else {
      buckets_.insert(buckets_.begin() + static_cast<std::ptrdiff_t>(k), std::vector<std::size_t>{x});
    }
  }

  Ranking to_ranking(const std::vector<std::string>& tokens) const {
    std::vector<std::vector<std::string>> out;
    for (const auto& b : buckets_) {
      std::vector<std::string> names;
      for (auto x : b) names.push_back(tokens[x]);
      out.push_back(std::move(names));
    }
    return Ranking(std::move(out));
  }

 private:
  bool singleton(std::size_t x) const {
    return std::any_of(buckets_.begin(), buckets_.end(),
                       [x](const auto& b) { return b.size() == 1 && b[0] == x; });
  }

  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace detail

/// Sum over item pairs: 1 when strictly reversed, 0.5 when tied in exactly
/// one ranking.
inline double kendall_tau_gen(const Ranking& r1, const Ranking& r2) {
  const auto aligned = detail::align(r1, r2);
  return detail::tau_levels(aligned.level1, aligned.level2);
}

/// Kendall kernel extended to weak orders: the mean over item pairs of the
/// product of order signs, a tied pair contributing 0. Equals
/// (concordant - discordant) / C(m, 2) on strict orders.
inline double kendall_kernel(const Ranking& r1, const Ranking& r2) {
  const auto aligned = detail::align(r1, r2);
  const std::size_t m = aligned.tokens.size();
  if (m < 2) return 1.0;
  long long total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      total += detail::sign(aligned.level1[i] - aligned.level1[j]) * detail::sign(aligned.level2[i] - aligned.level2[j]);
    }
  }
  return static_cast<double>(total) / (static_cast<double>(m) * static_cast<double>(m - 1) / 2.0);
}

/// Greedy weighted mean: starting at r1, repeatedly move one item to a slot
/// that lowers its disagreement against r2, until the distance travelled
/// from r1 reaches alpha * d(r1, r2).
///
/// A move's excess is how much it grows d(r1, m) + d(m, r2). Items are tried
/// in order of decreasing disagreement (ties: smallest token), first over
/// the neighbouring slots, taking the first item with a move of no excess.
/// Failing that, every slot of every item is scanned top-down and the move
/// with the least excess wins, earlier items first.
inline Ranking ranking_weighted_mean(const Ranking& r1, const Ranking& r2, double alpha) {
  const auto aligned = detail::align(r1, r2);
  if (alpha <= 0.0) return r1;
  if (alpha >= 1.0) return r2;
  const std::size_t m = aligned.tokens.size();
  const auto& source = aligned.level1;
  const auto& target = aligned.level2;
  const double total = detail::tau_levels(source, target);
  const double goal = alpha * total - 1e-9;

  detail::WorkingOrder order(source);
  std::vector<int> levels = order.levels(m);
  double travelled = 0.0;
  double remaining = total;

  struct Move {
    std::size_t x = 0, slot = 0;
    double gain = 0.0, away = 0.0;
    double excess() const { return away - gain; }
  };

  while (travelled < goal && remaining > 0.0) {
    std::vector<std::pair<double, std::size_t>> candidates;
    for (std::size_t x = 0; x < m; ++x) {
      const double d = detail::item_disagreement(levels, target, x);
      if (d > 0.0) candidates.emplace_back(d, x);
    }
    // Token ids ascend with token order, so id breaks ties lexicographically.
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });

    const auto evaluate = [&](std::size_t x, double cost, std::size_t slot) {
      const auto trial = order.levels_with(x, slot, m);
      Move mv{x, slot, cost - detail::item_disagreement(trial, target, x),
              detail::item_disagreement(trial, source, x) - detail::item_disagreement(levels, source, x)};
      return mv;
    };
    const auto better = [](const Move& a, const std::optional<Move>& b) {
      if (!b) return true;
      if (a.excess() != b->excess()) return a.excess() < b->excess();
      return a.gain > b->gain;
    };

    std::optional<Move> chosen;
    for (const auto& [cost, x] : candidates) {
      const std::size_t here = order.slot_of(x);
      std::optional<Move> best;
      for (std::size_t slot : {here - 1, here + 1}) {
        if (slot >= order.slot_count(x)) continue;  // here - 1 wraps when here == 0
        const auto mv = evaluate(x, cost, slot);
        if (mv.gain > 0.0 && mv.excess() <= 0.0 && better(mv, best)) best = mv;
      }
      if (best) {
        chosen = best;
        break;
      }
    }
    if (!chosen) {
      for (const auto& [cost, x] : candidates) {
        const std::size_t here = order.slot_of(x);
        for (std::size_t slot = 0; slot < order.slot_count(x); ++slot) {
          if (slot == here) continue;
          const auto mv = evaluate(x, cost, slot);
          if (mv.gain > 0.0 && (!chosen || mv.excess() < chosen->excess() ||
                                (mv.excess() == chosen->excess() && mv.x == chosen->x && mv.gain > chosen->gain))) {
            chosen = mv;
          }
        }
      }
    }
    if (!chosen) break;
    order.move(chosen->x, chosen->slot);
    levels = order.levels(m);
    travelled += chosen->away;
    remaining -= chosen->gain;
  }
  return order.to_ranking(aligned.tokens);
}

struct RankingAdapter {
  using object_type = Ranking;

  double distance(const Ranking& a, const Ranking& b) const { return kendall_tau_gen(a, b); }
  Ranking weighted_mean(const Ranking& a, const Ranking& b, double alpha) const {
    return ranking_weighted_mean(a, b, alpha);
  }
  double native_kernel(const KernelSpec& spec, const Ranking& a, const Ranking& b) const {
    if (spec.variant != KernelVariant::kendall) {
      throw ConfigError("kernel '" + std::string(to_string(spec.variant)) + "' is not defined on rankings");
    }
    return kendall_kernel(a, b);
  }
  /// Input rankings must be strict orders for the kendall kernel.
  void validate_inputs(const KernelSpec& spec, const std::vector<Ranking>& inputs) const {
    if (spec.variant != KernelVariant::kendall) return;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (inputs[i].has_ties()) {
        throw ConfigError("kendall kernel requires rankings without ties (ranking " + std::to_string(i) + ")");
      }
    }
  }
};

}  // namespace kmedian
