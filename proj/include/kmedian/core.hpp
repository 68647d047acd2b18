#pragma once

// Domain-agnostic building blocks: error types, object sets, the domain
// adapter concept, packed symmetric matrices and the kernel-space norm.

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kmedian {

using Complex = std::complex<double>;

namespace detail {

/// round(x) with halves rounding up and a small slack, so that values
/// computed as 1.4999999999 and 1.5000000001 land on the same integer.
inline long long round_half_up(double x) { return static_cast<long long>(std::floor(x + 0.5 + 1e-9)); }

}  // namespace detail

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or an unsupported kernel/domain combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or empty input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical stage could not produce a value.
class ComputationError : public Error {
 public:
  using Error::Error;
};

/// The Weiszfeld weights summed to zero, so the implicit median is undefined.
class DegenerateWeightsError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// Two objects coincide in kernel space; a projection ratio is undefined.
class CoincidentObjectsError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// An object space: a distance and a weighted mean between two objects.
///
/// `weighted_mean(a, b, t)` returns an object m with d(a,m) ~ t * d(a,b) and
/// d(m,b) ~ (1 - t) * d(a,b). Adapters may additionally expose
/// `native_kernel(const KernelSpec&, a, b)` for domain-specific kernels.
template <class A>
concept DomainAdapter = requires(const A& adapter, const typename A::object_type& x, double t) {
  typename A::object_type;
  { adapter.distance(x, x) } -> std::convertible_to<double>;
  { adapter.weighted_mean(x, x, t) } -> std::convertible_to<typename A::object_type>;
};

/// Non-empty ordered multiset of input objects. Indices are stable.
template <class T>
class ObjectSet {
 public:
  using value_type = T;

  explicit ObjectSet(std::vector<T> objects) : objects_(std::move(objects)) {
    if (objects_.empty()) throw DataError("object set must contain at least one object");
  }

  std::size_t size() const noexcept { return objects_.size(); }
  const T& operator[](std::size_t i) const { return objects_[i]; }
  const T& at(std::size_t i) const { return objects_.at(i); }
  auto begin() const noexcept { return objects_.begin(); }
  auto end() const noexcept { return objects_.end(); }
  const std::vector<T>& objects() const noexcept { return objects_; }

 private:
  std::vector<T> objects_;
};

/// Symmetrize, zero the diagonal and take the absolute value, in that order.
template <class Raw>
auto normalize_distance(Raw raw) {
  return [raw = std::move(raw)](const auto& a, const auto& b) -> double {
    const auto symmetric = [&raw](const auto& x, const auto& y) {
      return 0.5 * (static_cast<double>(raw(x, y)) + static_cast<double>(raw(y, x)));
    };
    const double shifted = symmetric(a, b) - 0.5 * (symmetric(a, a) + symmetric(b, b));
    return std::abs(shifted);
  };
}

/// Sum of distances from every member of `set` to `candidate`.
template <class T, class Distance>
double sod(const ObjectSet<T>& set, const T& candidate, const Distance& distance) {
  double total = 0.0;
  for (const auto& o : set) total += static_cast<double>(distance(o, candidate));
  return total;
}

/// Symmetric matrix in packed lower-triangular storage that can grow by one
/// row/column at a time. Entry (i, j) and (j, i) share a single slot.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  std::size_t size() const noexcept { return size_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return i >= j ? values_[offset(i) + j] : values_[offset(j) + i];
  }

  /// Appends a row holding the entries against all existing indices followed
  /// by the new diagonal entry.
  void append(std::span<const double> row) {
    if (row.size() != size_ + 1) throw std::invalid_argument("appended row has wrong length");
    values_.insert(values_.end(), row.begin(), row.end());
    ++size_;
  }

  /// Evaluates `f(i, j)` once per unordered pair with j <= i.
  template <class F>
  static SymmetricMatrix build(std::size_t n, F&& f) {
    SymmetricMatrix m;
    m.values_.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) m.values_.push_back(f(i, j));
    }
    m.size_ = n;
    return m;
  }

 private:
  static std::size_t offset(std::size_t i) noexcept { return i * (i + 1) / 2; }

  std::vector<double> values_;
  std::size_t size_ = 0;
};

/// Pairwise distances between objects of a kernel space.
class DistanceMatrix : public SymmetricMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(SymmetricMatrix m) : SymmetricMatrix(std::move(m)) {}
};

/// Kernel values K(o_u, o_v).
class GramMatrix : public SymmetricMatrix {
 public:
  GramMatrix() = default;
  explicit GramMatrix(SymmetricMatrix m) : SymmetricMatrix(std::move(m)) {}

  template <class F>
  static GramMatrix build(std::size_t n, F&& f) {
    return GramMatrix(SymmetricMatrix::build(n, std::forward<F>(f)));
  }
};

/// Principal square root with the +i branch for negative reals, whatever
/// the sign of a zero imaginary part.
inline Complex principal_sqrt(Complex z) {
  if (z.imag() == 0.0) {
    return z.real() >= 0.0 ? Complex(std::sqrt(z.real()), 0.0) : Complex(0.0, std::sqrt(-z.real()));
  }
  return std::sqrt(z);
}

/// K(a,a) - 2K(a,b) + K(b,b). Negative for some pairs under indefinite kernels.
inline double kernel_squared_distance(const GramMatrix& gram, std::size_t a, std::size_t b) {
  if (a == b) return 0.0;
  return gram(a, a) - 2.0 * gram(a, b) + gram(b, b);
}

/// Norm of phi(a) - phi(b): real for non-negative squared distances,
/// purely imaginary otherwise.
inline Complex kernel_norm(const GramMatrix& gram, std::size_t a, std::size_t b) {
  return principal_sqrt(Complex(kernel_squared_distance(gram, a, b), 0.0));
}

}  // namespace kmedian
