#pragma once

// Weiszfeld iteration carried out entirely through a Gram matrix. The
// iterate x_j = sum(w_u phi(o_u)) / sum(w_u) is never formed; only its
// weights are tracked. Weights are complex so that indefinite kernels,
// whose squared norms can be negative, run through the same code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kmedian/core.hpp"

namespace kmedian {

struct WeiszfeldConfig {
  int max_iterations = 200;
  double tolerance = 1e-6;      // max relative weight change for early stop
  double epsilon_guard = 1e-12;  // radicands below this count as zero
  bool keep_trajectory = false;

  void validate() const {
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (!(epsilon_guard > 0.0)) throw ConfigError("epsilon_guard must be positive");
  }
};

struct WeightVector {
  std::vector<Complex> weights;
  int iteration = 0;
  bool converged = false;
  /// Number of input indices whose weight had a nonzero imaginary part at
  /// some iteration.
  std::size_t complex_count = 0;
  /// Index whose kernel distance to the iterate fell below the guard.
  std::optional<std::size_t> coincident;
  /// Weights after each iteration, when requested.
  std::vector<std::vector<Complex>> trajectory;

  std::size_t size() const noexcept { return weights.size(); }

  Complex sum() const {
    Complex s{0.0, 0.0};
    for (const auto& w : weights) s += w;
    return s;
  }
};

namespace detail {

inline Complex checked_weight_sum(std::span<const Complex> w) {
  Complex s{0.0, 0.0};
  for (const auto& x : w) s += x;
  if (s == Complex(0.0, 0.0)) throw DegenerateWeightsError("Weiszfeld weights sum to zero");
  return s;
}

/// (G w)_i over the input block, for every input index i.
inline std::vector<Complex> gram_times(std::span<const Complex> w, const GramMatrix& gram) {
  const std::size_t n = w.size();
  std::vector<Complex> y(n, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc{0.0, 0.0};
    for (std::size_t u = 0; u < n; ++u) acc += w[u] * gram(u, i);
    y[i] = acc;
  }
  return y;
}

}  // namespace detail

/// <x, x> = sum_u sum_v w_u conj(w_v) K(u, v) / (S conj(S)), S = sum_u w_u.
inline Complex inner_xx(std::span<const Complex> w, const GramMatrix& gram) {
  const Complex s = detail::checked_weight_sum(w);
  const auto y = detail::gram_times(w, gram);  // y_v = sum_u w_u K(u, v)
  Complex acc{0.0, 0.0};
  for (std::size_t v = 0; v < w.size(); ++v) acc += y[v] * std::conj(w[v]);
  return acc / (s * std::conj(s));
}

inline Complex inner_xx(const WeightVector& w, const GramMatrix& gram) { return inner_xx(w.weights, gram); }

/// <x, phi(o_i)> = sum_u w_u K(u, i) / S. The index may refer to an object
/// appended after the input block.
inline Complex inner_xo(std::span<const Complex> w, const GramMatrix& gram, std::size_t i) {
  const Complex s = detail::checked_weight_sum(w);
  Complex acc{0.0, 0.0};
  for (std::size_t u = 0; u < w.size(); ++u) acc += w[u] * gram(u, i);
  return acc / s;
}

inline Complex inner_xo(const WeightVector& w, const GramMatrix& gram, std::size_t i) {
  return inner_xo(w.weights, gram, i);
}

/// Squared kernel distance between the implicit iterate and object i. The
/// quadratic form is Hermitian, so only the real part is kept.
inline double implicit_squared_distance(std::span<const Complex> w, const GramMatrix& gram, std::size_t i) {
  const Complex xx = inner_xx(w, gram);
  const Complex xo = inner_xo(w, gram, i);
  return (xx - xo - std::conj(xo)).real() + gram(i, i);
}

namespace detail {

struct StepOutcome {
  std::vector<Complex> weights;
  std::optional<std::size_t> coincident;
};

inline StepOutcome step(std::span<const Complex> w, const GramMatrix& gram, const WeiszfeldConfig& cfg) {
  const std::size_t n = w.size();
  const Complex s = checked_weight_sum(w);
  const auto y = gram_times(w, gram);
  Complex quad{0.0, 0.0};
  for (std::size_t v = 0; v < n; ++v) quad += y[v] * std::conj(w[v]);
  const Complex xx = quad / (s * std::conj(s));

  StepOutcome out;
  out.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex xo = y[i] / s;
    // Hermitian form: the radicand is real up to rounding.
    const double radicand = (xx - xo - std::conj(xo)).real() + gram(i, i);
    if (std::abs(radicand) < cfg.epsilon_guard) {
      out.weights[i] = Complex(1.0 / cfg.epsilon_guard, 0.0);
      if (!out.coincident) out.coincident = i;
    } else {
      out.weights[i] = 1.0 / principal_sqrt(Complex(radicand, 0.0));
    }
  }
  return out;
}

}  // namespace detail

/// One Weiszfeld update: w_i = 1 / sqrt(<x,x> - <x,phi_i> - conj(<x,phi_i>) + K(i,i)).
inline WeightVector weiszfeld_step(const WeightVector& previous, const GramMatrix& gram,
                                   const WeiszfeldConfig& cfg = {}) {
  auto outcome = detail::step(previous.weights, gram, cfg);
  WeightVector next;
  next.weights = std::move(outcome.weights);
  next.iteration = previous.iteration + 1;
  next.coincident = outcome.coincident;
  next.complex_count = static_cast<std::size_t>(
      std::count_if(next.weights.begin(), next.weights.end(), [](const Complex& c) { return c.imag() != 0.0; }));
  return next;
}

/// Runs the kernel Weiszfeld iteration from uniform weights (the kernel-space
/// mean) on the leading `n` x `n` block of the Gram matrix.
///
/// Stops once max_i |w_i^j - w_i^(j-1)| / (|w_i^(j-1)| + epsilon_guard) < tol,
/// when an object coincides with the iterate, or at max_iterations.
inline WeightVector kernel_weiszfeld(const GramMatrix& gram, std::size_t n, const WeiszfeldConfig& cfg = {}) {
  cfg.validate();
  if (n == 0 || n > gram.size()) throw ConfigError("Weiszfeld input size does not match the Gram matrix");

  WeightVector result;
  result.weights.assign(n, Complex(1.0, 0.0));
  std::vector<char> ever_complex(n, 0);

  for (int j = 1; j <= cfg.max_iterations; ++j) {
    auto outcome = detail::step(result.weights, gram, cfg);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double rel = std::abs(outcome.weights[i] - result.weights[i]) /
                         (std::abs(result.weights[i]) + cfg.epsilon_guard);
      change = std::max(change, rel);
      if (outcome.weights[i].imag() != 0.0) ever_complex[i] = 1;
    }
    result.weights = std::move(outcome.weights);
    result.iteration = j;
    if (cfg.keep_trajectory) result.trajectory.push_back(result.weights);
    if (outcome.coincident) {
      result.coincident = outcome.coincident;
      result.converged = true;
      break;
    }
    if (change < cfg.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.complex_count = static_cast<std::size_t>(std::count(ever_complex.begin(), ever_complex.end(), 1));
  return result;
}

inline WeightVector kernel_weiszfeld(const GramMatrix& gram, const WeiszfeldConfig& cfg = {}) {
  return kernel_weiszfeld(gram, gram.size(), cfg);
}

/// Classical Weiszfeld iteration on explicit points, started at the
/// arithmetic mean. Kept as a reference for the kernel formulation.
struct ExplicitWeiszfeldResult {
  std::vector<double> median;
  std::vector<double> weights;                    // final weights
  std::vector<std::vector<double>> trajectory;    // weights per iteration
  int iterations = 0;
  bool converged = false;
};

inline ExplicitWeiszfeldResult explicit_weiszfeld(const std::vector<std::vector<double>>& points,
                                                  const WeiszfeldConfig& cfg = {}) {
  cfg.validate();
  if (points.empty()) throw DataError("explicit Weiszfeld needs at least one point");
  const std::size_t n = points.size(), dim = points[0].size();

  const auto combine = [&](const std::vector<double>& w) {
    std::vector<double> x(dim, 0.0);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += w[i];
      for (std::size_t d = 0; d < dim; ++d) x[d] += w[i] * points[i][d];
    }
    for (auto& v : x) v /= s;
    return x;
  };

  ExplicitWeiszfeldResult out;
  std::vector<double> w(n, 1.0);
  std::vector<double> x = combine(w);
  for (int j = 1; j <= cfg.max_iterations; ++j) {
    std::vector<double> next(n);
    bool hit = false;
    for (std::size_t i = 0; i < n; ++i) {
      double sq = 0.0;
      for (std::size_t d = 0; d < dim; ++d) sq += (x[d] - points[i][d]) * (x[d] - points[i][d]);
      if (sq < cfg.epsilon_guard) {
        next[i] = 1.0 / cfg.epsilon_guard;
        hit = true;
      } else {
        next[i] = 1.0 / std::sqrt(sq);
      }
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - w[i]) / (std::abs(w[i]) + cfg.epsilon_guard));
    w = std::move(next);
    x = combine(w);
    out.iterations = j;
    out.trajectory.push_back(w);
    if (hit || change < cfg.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.median = std::move(x);
  out.weights = std::move(w);
  return out;
}

}  // namespace kmedian
