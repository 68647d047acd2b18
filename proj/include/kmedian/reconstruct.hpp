#pragma once

// Reconstruction of a median object from converged kernel Weiszfeld weights:
// projection ratios computed from the Gram matrix, sequential (linear /
// triangular) and recursive grouping schemes, and a weighted-mean line search.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kmedian/core.hpp"
#include "kmedian/kernel_space.hpp"
#include "kmedian/weiszfeld.hpp"

namespace kmedian {

/// Position of the implicit median's projection on the segment a -> b.
struct AlphaRatio {
  double value = 0.0;  // in [0, 1]
  Complex raw{0.0, 0.0};
  bool clamped = false;

  static AlphaRatio from_raw(Complex raw) {
    AlphaRatio a;
    a.raw = raw;
    // A complex ratio contributes its magnitude; a real one its value.
    const double v = raw.imag() != 0.0 ? std::abs(raw) : raw.real();
    a.value = std::clamp(v, 0.0, 1.0);
    a.clamped = a.value != v;
    return a;
  }
};

/// <x - a, b - a> / |b - a|^2 on explicit vectors.
inline double projection_alpha(std::span<const double> x, std::span<const double> a, std::span<const double> b) {
  if (x.size() != a.size() || a.size() != b.size()) throw ConfigError("projection_alpha: dimension mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double u = b[d] - a[d];
    num += (x[d] - a[d]) * u;
    den += u * u;
  }
  if (den == 0.0) throw CoincidentObjectsError("projection_alpha: zero-length segment");
  return num / den;
}

/// Projection ratio of the implicit median onto a -> b from final weights:
///
///   (sum_i w_i (K(i,b) - K(i,a)) / sum_i w_i - K(a,b) + K(a,a))
///   / (K(b,b) - 2 K(a,b) + K(a,a))
///
/// `a` and `b` may be appended objects; the sums run over the input block.
inline AlphaRatio kernel_alpha(std::span<const Complex> w, const GramMatrix& gram, std::size_t a, std::size_t b) {
  const double den = gram(b, b) - 2.0 * gram(a, b) + gram(a, a);
  if (den == 0.0) throw CoincidentObjectsError("kernel_alpha: objects coincide in kernel space");
  const Complex s = detail::checked_weight_sum(w);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * (gram(i, b) - gram(i, a));
  const Complex num = acc / s - gram(a, b) + gram(a, a);
  return AlphaRatio::from_raw(num / den);
}

inline AlphaRatio kernel_alpha(const WeightVector& w, const GramMatrix& gram, std::size_t a, std::size_t b) {
  return kernel_alpha(w.weights, gram, a, b);
}

enum class ReconstructionMethod { linear, triangular, lin_rec, tri_rec };

inline std::string_view to_string(ReconstructionMethod m) {
  switch (m) {
    case ReconstructionMethod::linear: return "linear";
    case ReconstructionMethod::triangular: return "triangular";
    case ReconstructionMethod::lin_rec: return "lin-rec";
    case ReconstructionMethod::tri_rec: return "tri-rec";
  }
  return "?";
}

inline ReconstructionMethod parse_reconstruction(std::string_view name) {
  for (auto m : {ReconstructionMethod::linear, ReconstructionMethod::triangular, ReconstructionMethod::lin_rec,
                 ReconstructionMethod::tri_rec}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown reconstruction '" + std::string(name) + "'");
}

struct LinearSearchConfig {
  std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  bool both_directions = true;
  int max_passes = 100;
};

struct ReconstructionConfig {
  ReconstructionMethod method = ReconstructionMethod::lin_rec;
  bool with_search = false;
  bool both_directions = true;
  LinearSearchConfig search{};
};

template <class T>
struct TraceEntry {
  T candidate;
  double sod = 0.0;
  double best_sod = 0.0;  // best SOD seen up to and including this entry
};

template <class T>
struct MedianResult {
  T median{};
  double sod = 0.0;
  std::optional<double> normalized_sod;
  double sigma = 0.0;  // sod / n
  int iterations = 0;
  bool converged = false;
  std::size_t complex_count = 0;
  std::vector<TraceEntry<T>> trace;
};

template <class T>
struct Candidate {
  T object;
  double sod = 0.0;
};

namespace detail {

/// Keeps the lowest-SOD object seen so far and the trace of all offers.
template <class T>
class BestTracker {
 public:
  void offer(const T& candidate, double sod) {
    if (!best_ || sod < best_->sod) best_ = Candidate<T>{candidate, sod};
    trace_.push_back(TraceEntry<T>{candidate, sod, best_->sod});
  }

  bool empty() const { return !best_.has_value(); }
  const Candidate<T>& best() const { return *best_; }
  std::vector<TraceEntry<T>>& trace() { return trace_; }

 private:
  std::optional<Candidate<T>> best_;
  std::vector<TraceEntry<T>> trace_;
};

template <class Adapter, class SodFn>
Candidate<typename Adapter::object_type> weighted_mean_best(const Adapter& adapter,
                                                            const typename Adapter::object_type& a,
                                                            const typename Adapter::object_type& b,
                                                            double alpha, bool both_directions,
                                                            const SodFn& sod_of) {
  using T = typename Adapter::object_type;
  T forward = adapter.weighted_mean(a, b, alpha);
  const double forward_sod = sod_of(forward);
  if (!both_directions) return {std::move(forward), forward_sod};
  T backward = adapter.weighted_mean(b, a, 1.0 - alpha);
  const double backward_sod = sod_of(backward);
  if (backward_sod < forward_sod) return {std::move(backward), backward_sod};
  return {std::move(forward), forward_sod};
}

/// Indices by decreasing key, ties to the lower index. Keys are compared as
/// log-ratios to the maximum rounded to 1e-9, so orderings agree across
/// Gram matrices differing by a positive factor.
inline std::vector<std::size_t> order_by_key(std::vector<std::size_t> indices, const std::vector<double>& key) {
  double top = 0.0;
  for (auto i : indices) top = std::max(top, key[i]);
  std::vector<long long> q(key.size(), std::numeric_limits<long long>::min());
  for (auto i : indices) {
    if (key[i] > 0.0) q[i] = std::llround(std::log(key[i] / top) * 1e9);
  }
  std::stable_sort(indices.begin(), indices.end(), [&](std::size_t x, std::size_t y) {
    return q[x] != q[y] ? q[x] > q[y] : x < y;
  });
  return indices;
}

/// Kernel-space closeness of every object to the implicit median,
/// 1 / |x - phi(o)|, from the final weights.
template <class Adapter>
std::vector<double> proximity(const KernelSpace<Adapter>& space, std::span<const Complex> w, double guard) {
  const auto& gram = space.gram();
  const Complex xx = inner_xx(w, gram);
  std::vector<double> out(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Complex xo = inner_xo(w, gram, i);
    const double sq = std::abs((xx - xo - std::conj(xo)).real() + gram(i, i));
    out[i] = sq < guard ? 1.0 / guard : 1.0 / std::sqrt(sq);
  }
  return out;
}

template <class Adapter>
class Reconstructor {
 public:
  using T = typename Adapter::object_type;

  Reconstructor(KernelSpace<Adapter>& space, const WeightVector& w, bool both_directions)
      : space_(space), w_(w), both_(both_directions) {}

  double sod_of(const T& x) const {
    double total = 0.0;
    for (std::size_t u = 0; u < space_.input_size(); ++u) total += space_.adapter().distance(space_.object(u), x);
    return total;
  }

  /// Input indices by decreasing weight magnitude.
  std::vector<std::size_t> by_weight() const {
    std::vector<double> key(w_.size());
    for (std::size_t i = 0; i < w_.size(); ++i) key[i] = std::abs(w_.weights[i]);
    std::vector<std::size_t> idx(w_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return order_by_key(std::move(idx), key);
  }

  /// Sequential combination of `group` (already ordered). Returns the index
  /// of the last constructed object; every constructed object is offered
  /// to `tracker`.
  std::size_t combine(std::span<const std::size_t> group, BestTracker<T>& tracker) {
    std::size_t current = group[0];
    for (std::size_t j = 1; j < group.size(); ++j) {
      AlphaRatio alpha;
      try {
        alpha = kernel_alpha(w_, space_.gram(), current, group[j]);
      } catch (const CoincidentObjectsError&) {
        // Coincident in kernel space: keep the current object.
        tracker.offer(space_.object(current), space_.sod(current));
        continue;
      }
      const auto sod_fn = [this](const T& x) { return sod_of(x); };
      const T a = space_.object(current);
      const T b = space_.object(group[j]);
      auto made = weighted_mean_best(space_.adapter(), a, b, alpha.value, both_, sod_fn);
      tracker.offer(made.object, made.sod);
      current = space_.find_or_append(made.object);
    }
    return current;
  }

  KernelSpace<Adapter>& space() { return space_; }
  const WeightVector& weights() const { return w_; }

 private:
  KernelSpace<Adapter>& space_;
  const WeightVector& w_;
  bool both_;
};

template <class T>
MedianResult<T> finish(BestTracker<T>& tracker) {
  MedianResult<T> out;
  out.median = tracker.best().object;
  out.sod = tracker.best().sod;
  out.trace = std::move(tracker.trace());
  return out;
}

}  // namespace detail

/// Computes wm(a, b, alpha) and, optionally, wm(b, a, 1 - alpha); returns the
/// one with the smaller SOD over `set` (the first on ties).
template <DomainAdapter Adapter>
Candidate<typename Adapter::object_type> weighted_mean_best(const Adapter& adapter,
                                                            const typename Adapter::object_type& a,
                                                            const typename Adapter::object_type& b,
                                                            const AlphaRatio& alpha,
                                                            const ObjectSet<typename Adapter::object_type>& set,
                                                            bool both_directions = true) {
  const auto sod_fn = [&](const auto& x) { return sod(set, x, [&](const auto& p, const auto& q) { return adapter.distance(p, q); }); };
  return detail::weighted_mean_best(adapter, a, b, alpha.value, both_directions, sod_fn);
}

/// Linear (l = 2) or triangular (l = 3) reconstruction: start at the
/// highest-weight object and fold in the next l - 1 objects by weight.
/// Returns the lowest-SOD object among the starting object and every
/// constructed one; the trace lists them in order.
template <DomainAdapter Adapter>
MedianResult<typename Adapter::object_type> reconstruct_seq(std::size_t l, KernelSpace<Adapter>& space,
                                                            const WeightVector& w,
                                                            const ReconstructionConfig& cfg = {}) {
  if (l < 1) throw ConfigError("reconstruction needs at least one object");
  detail::Reconstructor<Adapter> rec(space, w, cfg.both_directions);
  auto order = rec.by_weight();
  order.resize(std::min(l, order.size()));
  detail::BestTracker<typename Adapter::object_type> tracker;
  tracker.offer(space.object(order[0]), space.sod(order[0]));
  rec.combine(order, tracker);
  return detail::finish(tracker);
}

enum class GroupMode { pairs, triples };

/// Linear- or triangular-recursive reconstruction. Objects are grouped by
/// decreasing weight (later rounds: decreasing kernel-space closeness to the
/// implicit median), each group is folded sequentially, and the resulting
/// objects form the next round until one remains. A lone leftover is carried
/// unchanged; with triples a leftover pair is folded as a pair.
template <DomainAdapter Adapter>
MedianResult<typename Adapter::object_type> reconstruct_recursive(GroupMode mode, KernelSpace<Adapter>& space,
                                                                  const WeightVector& w,
                                                                  const ReconstructionConfig& cfg = {},
                                                                  const WeiszfeldConfig& wcfg = {}) {
  using T = typename Adapter::object_type;
  detail::Reconstructor<Adapter> rec(space, w, cfg.both_directions);
  detail::BestTracker<T> tracker;
  auto current = rec.by_weight();
  tracker.offer(space.object(current[0]), space.sod(current[0]));

  const std::size_t width = mode == GroupMode::pairs ? 2 : 3;
  bool first_round = true;
  while (current.size() > 1) {
    if (!first_round) {
      current = detail::order_by_key(std::move(current), detail::proximity(space, w.weights, wcfg.epsilon_guard));
    }
    std::vector<std::size_t> next;
    std::size_t pos = 0;
    while (pos < current.size()) {
      const std::size_t left = current.size() - pos;
      const std::size_t take = std::min(width, left);
      if (take == 1) {
        next.push_back(current[pos]);
      } else {
        const std::span<const std::size_t> group(current.data() + pos, take);
        next.push_back(rec.combine(group, tracker));
      }
      pos += take;
    }
    current = std::move(next);
    first_round = false;
  }
  return detail::finish(tracker);
}

/// Local search along weighted means between the current object and every
/// set member. A member's best grid candidate replaces the current object
/// when its SOD is strictly smaller; stops after a pass without improvement.
template <DomainAdapter Adapter>
MedianResult<typename Adapter::object_type> linear_search(const typename Adapter::object_type& start,
                                                          const ObjectSet<typename Adapter::object_type>& set,
                                                          const Adapter& adapter,
                                                          const LinearSearchConfig& cfg = {}) {
  using T = typename Adapter::object_type;
  const auto sod_of = [&](const T& x) {
    double total = 0.0;
    for (const auto& o : set) total += adapter.distance(o, x);
    return total;
  };
  detail::BestTracker<T> tracker;
  T current = start;
  double current_sod = sod_of(current);
  tracker.offer(current, current_sod);

  for (int pass = 0; pass < cfg.max_passes; ++pass) {
    bool improved = false;
    for (const auto& member : set) {
      if (member == current) continue;
      std::optional<Candidate<T>> best;
      for (double t : cfg.grid) {
        T forward = adapter.weighted_mean(current, member, t);
        const double fs = sod_of(forward);
        if (!best || fs < best->sod) best = Candidate<T>{std::move(forward), fs};
        if (cfg.both_directions) {
          T backward = adapter.weighted_mean(member, current, 1.0 - t);
          const double bs = sod_of(backward);
          if (bs < best->sod) best = Candidate<T>{std::move(backward), bs};
        }
      }
      if (best && best->sod < current_sod) {
        current = std::move(best->object);
        current_sod = best->sod;
        tracker.offer(current, current_sod);
        improved = true;
      }
    }
    if (!improved) break;
  }
  return detail::finish(tracker);
}

/// Dispatches on the configured reconstruction method.
template <DomainAdapter Adapter>
MedianResult<typename Adapter::object_type> reconstruct(KernelSpace<Adapter>& space, const WeightVector& w,
                                                        const ReconstructionConfig& cfg,
                                                        const WeiszfeldConfig& wcfg = {}) {
  switch (cfg.method) {
    case ReconstructionMethod::linear: return reconstruct_seq(2, space, w, cfg);
    case ReconstructionMethod::triangular: return reconstruct_seq(3, space, w, cfg);
    case ReconstructionMethod::lin_rec: return reconstruct_recursive(GroupMode::pairs, space, w, cfg, wcfg);
    case ReconstructionMethod::tri_rec: return reconstruct_recursive(GroupMode::triples, space, w, cfg, wcfg);
  }
  throw ConfigError("unknown reconstruction method");
}

}  // namespace kmedian
