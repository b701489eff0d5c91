#pragma once

// Degree tables: the addition table of two exponent vectors, its set of
// distinct terms, and the decodability / T-security predicates.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gasp/error.hpp"

namespace gasp {

using Exponent = std::uint64_t;

/// Largest value a table entry may take.
inline constexpr Exponent kMaxEntry =
    static_cast<Exponent>(std::numeric_limits<std::int64_t>::max());

struct SchemeParams {
  std::size_t K = 1;  // row blocks of A
  std::size_t L = 1;  // column blocks of B
  std::size_t T = 1;  // collusion tolerance

  SchemeParams() = default;
  SchemeParams(std::size_t k, std::size_t l, std::size_t t) : K(k), L(l), T(t) {
    if (K < 1 || L < 1 || T < 1) {
      throw ParameterError("K, L and T must all be at least 1");
    }
  }

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

/// The exponent vectors of a polynomial code: alpha has K+T entries (the
/// last T are mask exponents), beta has L+T.
struct ExponentAssignment {
  std::vector<Exponent> alpha;
  std::vector<Exponent> beta;

  std::span<const Exponent> alpha_data() const { return {alpha.data(), alpha.size()}; }
  std::span<const Exponent> beta_data() const { return {beta.data(), beta.size()}; }

  friend bool operator==(const ExponentAssignment&,
                         const ExponentAssignment&) = default;
};

/// Throws ParameterError unless the assignment has the right lengths for
/// `params` and all pairwise sums fit below kMaxEntry.
inline void validate(const ExponentAssignment& a, const SchemeParams& params) {
  if (a.alpha.size() != params.K + params.T ||
      a.beta.size() != params.L + params.T) {
    throw ParameterError("assignment lengths do not match (K+T, L+T) = (" +
                         std::to_string(params.K + params.T) + ", " +
                         std::to_string(params.L + params.T) + ")");
  }
  const Exponent amax = *std::max_element(a.alpha.begin(), a.alpha.end());
  const Exponent bmax = *std::max_element(a.beta.begin(), a.beta.end());
  if (amax > kMaxEntry || bmax > kMaxEntry - amax) {
    throw ParameterError("assignment entries overflow the 63-bit table range");
  }
}

class DegreeTable {
 public:
  DegreeTable(SchemeParams params, std::vector<Exponent> entries)
      : params_(params), entries_(std::move(entries)) {}

  const SchemeParams& params() const { return params_; }
  std::size_t rows() const { return params_.K + params_.T; }
  std::size_t cols() const { return params_.L + params_.T; }
  Exponent operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols() + j];
  }
  std::span<const Exponent> entries() const { return entries_; }

  friend bool operator==(const DegreeTable&, const DegreeTable&) = default;

 private:
  SchemeParams params_;
  std::vector<Exponent> entries_;  // row-major
};

/// Sorted, duplicate-free set of integers.
using TermSet = std::vector<Exponent>;

/// Term sets of the four blocks: rows split at K, columns split at L.
struct RegionTerms {
  TermSet ul, ur, ll, lr;
};

inline DegreeTable outer_sum(const ExponentAssignment& a,
                             const SchemeParams& params) {
  validate(a, params);
  std::vector<Exponent> entries;
  entries.reserve(a.alpha.size() * a.beta.size());
  for (Exponent x : a.alpha) {
    for (Exponent y : a.beta) entries.push_back(x + y);
  }
  return DegreeTable(params, std::move(entries));
}

namespace detail {
inline TermSet sorted_unique(std::vector<Exponent> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}
}  // namespace detail

inline TermSet terms(const DegreeTable& table) {
  return detail::sorted_unique({table.entries().begin(), table.entries().end()});
}

/// Number of distinct table entries, i.e. the number of servers N.
inline std::size_t count_terms(const ExponentAssignment& a,
                               const SchemeParams& params) {
  return terms(outer_sum(a, params)).size();
}

inline RegionTerms partition_regions(const DegreeTable& table) {
  const std::size_t K = table.params().K;
  const std::size_t L = table.params().L;
  std::vector<Exponent> ul, ur, ll, lr;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const bool top = i < K;
      const bool left = j < L;
      auto& dst = top ? (left ? ul : ur) : (left ? ll : lr);
      dst.push_back(table(i, j));
    }
  }
  return {detail::sorted_unique(std::move(ul)), detail::sorted_unique(std::move(ur)),
          detail::sorted_unique(std::move(ll)), detail::sorted_unique(std::move(lr))};
}

/// Every entry of the upper-left K x L block occurs exactly once in the
/// whole table.
inline bool is_decodable(const ExponentAssignment& a, const SchemeParams& params) {
  const DegreeTable table = outer_sum(a, params);
  std::vector<Exponent> all(table.entries().begin(), table.entries().end());
  std::sort(all.begin(), all.end());
  for (std::size_t k = 0; k < params.K; ++k) {
    for (std::size_t l = 0; l < params.L; ++l) {
      const auto [lo, hi] = std::equal_range(all.begin(), all.end(), table(k, l));
      if (hi - lo != 1) return false;
    }
  }
  return true;
}

/// The T mask exponents of alpha are pairwise distinct, and likewise for
/// beta.
inline bool is_t_secure_assignment(const ExponentAssignment& a,
                                   const SchemeParams& params) {
  validate(a, params);
  auto distinct_tail = [&](const std::vector<Exponent>& v, std::size_t head) {
    std::vector<Exponent> masks(v.begin() + static_cast<std::ptrdiff_t>(head), v.end());
    return detail::sorted_unique(masks).size() == masks.size();
  };
  return distinct_tail(a.alpha, params.K) && distinct_tail(a.beta, params.L);
}

/// Reverses degrees: alpha_i -> max(alpha) - alpha_i, same for beta. The
/// table is mirrored, so N, decodability and T-security are preserved.
inline ExponentAssignment reflect(const ExponentAssignment& a) {
  auto flip = [](std::vector<Exponent> v) {
    const Exponent top = *std::max_element(v.begin(), v.end());
    for (auto& x : v) x = top - x;
    return v;
  };
  return {flip(a.alpha), flip(a.beta)};
}

/// Adds `c` to every alpha entry.
inline ExponentAssignment shift_alpha(ExponentAssignment a, Exponent c) {
  for (auto& x : a.alpha) x += c;
  return a;
}

}  // namespace gasp
