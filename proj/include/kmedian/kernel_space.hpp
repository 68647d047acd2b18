#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kmedian/core.hpp"
#include "kmedian/kernels.hpp"

namespace kmedian {

/// Input objects plus any reconstructed objects appended later, with the
/// pairwise distance and Gram matrices over all of them.
///
/// Distances are cached before kernel evaluation; distance substitution
/// kernels read only from that cache. Domain kernels call the adapter's
/// `native_kernel`, after `validate_inputs` when the adapter has one. Indices [0, input_size()) are the input set.
template <DomainAdapter Adapter>
class KernelSpace {
 public:
  using Object = typename Adapter::object_type;
  using ObjectKernel = std::function<double(const Object&, const Object&)>;

  /// Kernel chosen by `spec`. Origins default to the set median (lin, pol)
  /// or a k-medians selection of `origin_count` objects (comb).
  KernelSpace(const ObjectSet<Object>& set, Adapter adapter, KernelSpec spec, std::uint64_t seed = 0)
      : adapter_(std::move(adapter)), spec_(std::move(spec)), objects_(set.objects()), inputs_(set.size()) {
    spec_.validate();
    if constexpr (requires(const Adapter& a, const KernelSpec& s, const std::vector<Object>& v) {
                    a.validate_inputs(s, v);
                  }) {
      adapter_.validate_inputs(spec_, objects_);
    }
    if (!is_distance_substitution(spec_.variant)) {
      if constexpr (requires(const Adapter& a, const KernelSpec& s, const Object& o) { a.native_kernel(s, o, o); }) {
        const auto* adapter_ptr = &adapter_;
        const KernelSpec* spec_ptr = &spec_;
        object_kernel_ = [adapter_ptr, spec_ptr](const Object& a, const Object& b) {
          return adapter_ptr->native_kernel(*spec_ptr, a, b);
        };
      } else {
        throw ConfigError("kernel '" + std::string(to_string(spec_.variant)) +
                          "' is not available for this domain");
      }
    }
    build_distances();
    if (uses_origins(spec_.variant)) resolve_origins(seed);
    build_gram();
  }

  /// Arbitrary object kernel, for example a dot product on vectors.
  KernelSpace(const ObjectSet<Object>& set, Adapter adapter, ObjectKernel kernel)
      : adapter_(std::move(adapter)), object_kernel_(std::move(kernel)), objects_(set.objects()),
        inputs_(set.size()), custom_(true) {
    build_distances();
    build_gram();
  }

  KernelSpace(const KernelSpace&) = delete;
  KernelSpace& operator=(const KernelSpace&) = delete;

  std::size_t input_size() const noexcept { return inputs_; }
  std::size_t size() const noexcept { return objects_.size(); }
  const Object& object(std::size_t i) const { return objects_.at(i); }
  const Adapter& adapter() const noexcept { return adapter_; }
  const KernelSpec& spec() const noexcept { return spec_; }
  bool custom_kernel() const noexcept { return custom_; }
  const DistanceMatrix& distances() const noexcept { return distances_; }
  const GramMatrix& gram() const noexcept { return gram_; }
  const std::vector<std::size_t>& origins() const noexcept { return origins_; }

  double distance(std::size_t i, std::size_t j) const { return distances_(i, j); }

  /// Sum of distances from the input set to object i.
  double sod(std::size_t i) const {
    double total = 0.0;
    for (std::size_t u = 0; u < inputs_; ++u) total += distances_(u, i);
    return total;
  }

  /// Index of an object equal to `o`, appending it (with one new distance
  /// and Gram row) when none exists.
  std::size_t find_or_append(const Object& o) {
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (objects_[i] == o) return i;
    }
    return append(o);
  }

  std::size_t append(const Object& o) {
    const std::size_t idx = objects_.size();
    std::vector<double> drow(idx + 1, 0.0);
    for (std::size_t j = 0; j < idx; ++j) drow[j] = static_cast<double>(adapter_.distance(objects_[j], o));
    objects_.push_back(o);
    distances_.append(drow);

    std::vector<double> grow(idx + 1, 0.0);
    for (std::size_t j = 0; j <= idx; ++j) grow[j] = evaluate_checked(idx, j);
    gram_.append(grow);
    return idx;
  }

 private:
  void build_distances() {
    distances_ = DistanceMatrix(SymmetricMatrix::build(objects_.size(), [&](std::size_t i, std::size_t j) {
      return i == j ? 0.0 : static_cast<double>(adapter_.distance(objects_[i], objects_[j]));
    }));
  }

  void resolve_origins(std::uint64_t seed) {
    if (!spec_.origins.empty()) {
      for (auto o : spec_.origins) {
        if (o >= inputs_) throw ConfigError("origin index out of range");
      }
      origins_ = spec_.origins;
    } else if (spec_.variant == KernelVariant::comb) {
      origins_ = select_origin_indices(distances_, inputs_, std::min(spec_.origin_count, inputs_), seed);
    } else {
      origins_ = select_origin_indices(distances_, inputs_, 1, seed);
    }
    if (spec_.variant != KernelVariant::comb) origins_.resize(1);
  }

  void build_gram() {
    gram_ = GramMatrix::build(objects_.size(), [&](std::size_t i, std::size_t j) { return evaluate_checked(i, j); });
  }

  double evaluate_checked(std::size_t i, std::size_t j) const {
    const auto where = [&] { return " (kernel at objects " + std::to_string(j) + ", " + std::to_string(i) + ")"; };
    try {
      return evaluate(i, j);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what() + where());
    } catch (const DataError& e) {
      throw DataError(e.what() + where());
    } catch (const std::exception& e) {
      throw ComputationError(e.what() + where());
    }
  }

  double evaluate(std::size_t i, std::size_t j) const {
    if (object_kernel_) return object_kernel_(objects_[i], objects_[j]);
    std::vector<double> di(origins_.size()), dj(origins_.size());
    for (std::size_t k = 0; k < origins_.size(); ++k) {
      di[k] = distances_(i, origins_[k]);
      dj[k] = distances_(j, origins_[k]);
    }
    return dsk_eval_distances(spec_, distances_(i, j), di, dj);
  }

  Adapter adapter_;
  KernelSpec spec_;
  ObjectKernel object_kernel_;
  std::vector<Object> objects_;
  std::size_t inputs_;
  bool custom_ = false;
  std::vector<std::size_t> origins_;
  DistanceMatrix distances_;
  GramMatrix gram_;
};

/// Gram matrix of `set` under `spec`.
template <DomainAdapter Adapter>
GramMatrix gram_matrix(const ObjectSet<typename Adapter::object_type>& set, const KernelSpec& spec,
                       const Adapter& adapter, std::uint64_t seed = 0) {
  return KernelSpace<Adapter>(set, adapter, spec, seed).gram();
}

}  // namespace kmedian
