#pragma once

// String object space under unit-cost Levenshtein distance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kmedian/core.hpp"
#include "kmedian/kernels.hpp"

namespace kmedian {

/// Suffix edit-distance table: cell (i, j) = distance(s[i:], t[j:]).
class SuffixEditTable {
 public:
  SuffixEditTable(std::string_view s, std::string_view t)
      : rows_(s.size() + 1), cols_(t.size() + 1), cells_(rows_ * cols_) {
    for (std::size_t i = rows_; i-- > 0;) {
      for (std::size_t j = cols_; j-- > 0;) {
        std::size_t v;
        if (i == s.size()) {
          v = t.size() - j;
        } else if (j == t.size()) {
          v = s.size() - i;
        } else {
          const std::size_t sub = at(i + 1, j + 1) + (s[i] == t[j] ? 0 : 1);
          v = std::min({sub, at(i + 1, j) + 1, at(i, j + 1) + 1});
        }
        cells_[i * cols_ + j] = v;
      }
    }
  }

  std::size_t at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }

 private:
  std::size_t rows_, cols_;
  std::vector<std::size_t> cells_;
};

inline std::size_t levenshtein(std::string_view s, std::string_view t) {
  if (s.size() < t.size()) std::swap(s, t);
  std::vector<std::size_t> row(t.size() + 1);
  for (std::size_t j = 0; j <= t.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (s[i - 1] == t[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[t.size()];
}

struct EditOperation {
  enum class Kind { substitute, insert, erase };
  Kind kind;
  std::size_t position;  // index in the intermediate string being edited
  char symbol;           // new symbol for substitute / insert
};

/// A minimal edit script from `source` to `target` with every intermediate
/// string; `intermediates.back() == target` and the script length equals the
/// Levenshtein distance.
struct EditScript {
  std::vector<EditOperation> operations;
  std::vector<std::string> intermediates;
};

/// Canonical minimal script, applied left to right. At ties the walk prefers
/// substitution, then deletion, then insertion.
inline EditScript edit_script(std::string_view source, std::string_view target) {
  const SuffixEditTable table(source, target);
  EditScript script;
  std::size_t i = 0, j = 0;
  // The current intermediate is target[0:j] + source[i:].
  const auto current = [&] { return std::string(target.substr(0, j)) + std::string(source.substr(i)); };
  while (i < source.size() || j < target.size()) {
    const std::size_t here = table.at(i, j);
    if (i < source.size() && j < target.size() && source[i] == target[j] &&
        table.at(i + 1, j + 1) == here) {
      ++i;
      ++j;
      continue;
    }
    EditOperation op{};
    op.position = j;
    if (i < source.size() && j < target.size() && table.at(i + 1, j + 1) + 1 == here) {
      op.kind = EditOperation::Kind::substitute;
      op.symbol = target[j];
      ++i;
      ++j;
    } else if (i < source.size() && table.at(i + 1, j) + 1 == here) {
      op.kind = EditOperation::Kind::erase;
      op.symbol = '\0';
      ++i;
    } else {
      op.kind = EditOperation::Kind::insert;
      op.symbol = target[j];
      ++j;
    }
    script.operations.push_back(op);
    script.intermediates.push_back(current());
  }
  return script;
}

/// Intermediate string after round(alpha * d) canonical edit steps.
inline std::string string_weighted_mean(std::string_view s1, std::string_view s2, double alpha) {
  const auto script = edit_script(s1, s2);
  const auto d = static_cast<long long>(script.operations.size());
  long long steps = detail::round_half_up(alpha * static_cast<double>(d));
  steps = std::clamp(steps, 0LL, d);
  if (steps == 0) return std::string(s1);
  return script.intermediates[static_cast<std::size_t>(steps - 1)];
}

struct StringAdapter {
  using object_type = std::string;

  double distance(const std::string& a, const std::string& b) const {
    return static_cast<double>(levenshtein(a, b));
  }
  std::string weighted_mean(const std::string& a, const std::string& b, double alpha) const {
    return string_weighted_mean(a, b, alpha);
  }
  double native_kernel(const KernelSpec& spec, const std::string& a, const std::string& b) const {
    if (spec.variant != KernelVariant::ssk) {
      throw ConfigError("kernel '" + std::string(to_string(spec.variant)) + "' is not defined on strings");
    }
    return ssk_eval(a, b, spec.subsequence_length, spec.lambda);
  }
};

}  // namespace kmedian
