#pragma once

// SOD normalization, the pairwise lower bound, distance distortion of a
// kernel embedding and convergence statistics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kmedian/core.hpp"
#include "kmedian/kernel_space.hpp"
#include "kmedian/weiszfeld.hpp"

namespace kmedian {

/// sum_{i<j} d(o_i, o_j) / (n - 1). No object has a smaller SOD when d is a
/// metric. Zero for fewer than two objects.
inline double lower_bound_pairwise(const DistanceMatrix& d, std::size_t n) {
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) total += d(i, j);
  return total / static_cast<double>(n - 1);
}

template <class T, class Distance>
double lower_bound_pairwise(const ObjectSet<T>& set, const Distance& distance) {
  const std::size_t n = set.size();
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) total += static_cast<double>(distance(set[i], set[j]));
  return total / static_cast<double>(n - 1);
}

inline double normalized_sod(double sod, double lower_bound) {
  if (!(lower_bound > 0.0)) throw ComputationError("normalized SOD is undefined for a non-positive lower bound");
  return (sod - lower_bound) / lower_bound;
}

/// Pearson correlation of two equally long samples.
inline double ncc(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw ComputationError("ncc needs two non-empty samples of equal length");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw ComputationError("ncc is undefined for a constant sample");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::size_t> counts;
};

/// Equal-width bins over [lo, hi]; the last bin is closed.
inline Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
  if (bins == 0) throw ConfigError("histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 0.0;
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(lo + width * static_cast<double>(b));
  for (double v : values) {
    std::size_t b = 0;
    if (width > 0.0) b = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, (v - lo) / width)));
    ++h.counts[b];
  }
  return h;
}

struct DistortionReport {
  std::vector<double> ratios;    // d / |kernel norm| per included pair
  std::vector<double> original;  // d per included pair
  std::vector<double> embedded;  // |kernel norm| per included pair
  Histogram histogram;
  std::optional<double> ncc;     // absent when either sample is constant
  std::size_t zero_distance_pairs = 0;
  std::size_t degenerate_pairs = 0;  // d > 0 but zero kernel norm

  double mean() const {
    double s = 0.0;
    for (double r : ratios) s += r;
    return ratios.empty() ? 0.0 : s / static_cast<double>(ratios.size());
  }

  double stddev() const {
    if (ratios.empty()) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double r : ratios) s += (r - m) * (r - m);
    return std::sqrt(s / static_cast<double>(ratios.size()));
  }
};

/// Distortion between the input distances and the kernel-induced distances
/// over all input pairs.
template <DomainAdapter Adapter>
DistortionReport distortion_ratios(const KernelSpace<Adapter>& space, std::size_t bins = 50) {
  const std::size_t n = space.input_size();
  if (n < 2) throw DataError("distortion needs at least two objects");
  DistortionReport out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = space.distance(i, j);
      if (d == 0.0) {
        ++out.zero_distance_pairs;
        continue;
      }
      const double e = std::abs(kernel_norm(space.gram(), i, j));
      if (e == 0.0) {
        ++out.degenerate_pairs;
        continue;
      }
      out.ratios.push_back(d / e);
      out.original.push_back(d);
      out.embedded.push_back(e);
    }
  }
  const double top = out.ratios.empty() ? 0.0 : *std::max_element(out.ratios.begin(), out.ratios.end());
  out.histogram = histogram(out.ratios, bins, 0.0, top);
  try {
    out.ncc = ncc(out.original, out.embedded);
  } catch (const ComputationError&) {
    out.ncc.reset();
  }
  return out;
}

template <DomainAdapter Adapter>
DistortionReport distortion_ratios(const ObjectSet<typename Adapter::object_type>& set, const KernelSpec& spec,
                                   const Adapter& adapter, std::size_t bins = 50, std::uint64_t seed = 0) {
  KernelSpace<Adapter> space(set, adapter, spec, seed);
  return distortion_ratios(space, bins);
}

/// Maximum-likelihood Laplace scale around `median`: SOD / n.
template <class T, class Distance>
double laplace_sigma(const ObjectSet<T>& set, const T& median, const Distance& distance) {
  return sod(set, median, distance) / static_cast<double>(set.size());
}

struct ConvergenceReport {
  int max_iter = 0;
  int med_iter = 0;  // lower middle for an even number of runs
  std::size_t complex_weight_count = 0;
  std::size_t runs_with_complex = 0;
  std::vector<int> iterations;
  std::size_t converged_runs = 0;
};

inline ConvergenceReport convergence_stats(std::span<const WeightVector> runs) {
  if (runs.empty()) throw DataError("convergence statistics need at least one run");
  ConvergenceReport out;
  for (const auto& r : runs) {
    out.iterations.push_back(r.iteration);
    out.complex_weight_count += r.complex_count;
    if (r.complex_count > 0) ++out.runs_with_complex;
    if (r.converged) ++out.converged_runs;
  }
  auto sorted = out.iterations;
  std::sort(sorted.begin(), sorted.end());
  out.max_iter = sorted.back();
  out.med_iter = sorted[(sorted.size() - 1) / 2];
  return out;
}

}  // namespace kmedian
