#pragma once

// Full median computation: Gram matrix, kernel Weiszfeld weights,
// reconstruction and optional line search.

#include <cstddef>
#include <cstdint>
#include <utility>

#include "kmedian/core.hpp"
#include "kmedian/eval.hpp"
#include "kmedian/kernel_space.hpp"
#include "kmedian/kernels.hpp"
#include "kmedian/reconstruct.hpp"
#include "kmedian/weiszfeld.hpp"

namespace kmedian {

/// Runs weights, reconstruction and search on an already built kernel space.
/// The trace of the search continues the reconstruction trace.
template <DomainAdapter Adapter>
MedianResult<typename Adapter::object_type> compute_median(KernelSpace<Adapter>& space, const ObjectSet<typename Adapter::object_type>& set,
                                                           const WeiszfeldConfig& cfg,
                                                           const ReconstructionConfig& rcfg) {
  const auto weights = kernel_weiszfeld(space.gram(), space.input_size(), cfg);
  auto result = reconstruct(space, weights, rcfg, cfg);

  if (rcfg.with_search) {
    auto searched = linear_search(result.median, set, space.adapter(), rcfg.search);
    double best = result.sod;
    for (auto& entry : searched.trace) {
      if (entry.sod < best) best = entry.sod;
      entry.best_sod = best;
      result.trace.push_back(std::move(entry));
    }
    if (searched.sod < result.sod) {
      result.median = std::move(searched.median);
      result.sod = searched.sod;
    }
  }

  const std::size_t n = set.size();
  result.sigma = result.sod / static_cast<double>(n);
  const double lb = lower_bound_pairwise(space.distances(), space.input_size());
  if (lb > 0.0) result.normalized_sod = normalized_sod(result.sod, lb);
  result.iterations = weights.iteration;
  result.converged = weights.converged;
  result.complex_count = weights.complex_count;
  return result;
}

/// Median of `set` under the kernel described by `spec`.
template <DomainAdapter Adapter>
MedianResult<typename Adapter::object_type> compute_median(const ObjectSet<typename Adapter::object_type>& set,
                                                           const KernelSpec& spec, const WeiszfeldConfig& cfg,
                                                           const ReconstructionConfig& rcfg, const Adapter& adapter,
                                                           std::uint64_t seed = 0) {
  KernelSpace<Adapter> space(set, adapter, spec, seed);
  return compute_median(space, set, cfg, rcfg);
}

/// Median of `set` under an arbitrary object kernel.
template <DomainAdapter Adapter>
MedianResult<typename Adapter::object_type> compute_median(
    const ObjectSet<typename Adapter::object_type>& set,
    typename KernelSpace<Adapter>::ObjectKernel kernel, const WeiszfeldConfig& cfg,
    const ReconstructionConfig& rcfg, const Adapter& adapter) {
  KernelSpace<Adapter> space(set, adapter, std::move(kernel));
  return compute_median(space, set, cfg, rcfg);
}

/// Input member with the smallest SOD, the lower index on ties.
template <DomainAdapter Adapter>
Candidate<typename Adapter::object_type> set_median(const ObjectSet<typename Adapter::object_type>& set,
                                                    const Adapter& adapter) {
  std::size_t best = 0;
  double best_sod = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    double s = 0.0;
    for (const auto& o : set) s += adapter.distance(o, set[i]);
    if (i == 0 || s < best_sod) {
      best = i;
      best_sod = s;
    }
  }
  return {set[best], best_sod};
}

}  // namespace kmedian
