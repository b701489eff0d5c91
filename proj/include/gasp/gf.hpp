#pragma once

// Prime-field arithmetic and exact dense linear algebra over F_p.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gasp/error.hpp"

namespace gasp {

using Residue = std::uint64_t;

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin; these bases are exact for all 64-bit n.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s && composite; ++i) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

/// Smallest prime strictly greater than n.
inline std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p < 2 || p >= kMaxModulus || !is_prime(p)) {
      throw ParameterError("modulus " + std::to_string(p) +
                           " is not a prime in [2, 2^62)");
    }
  }

  std::uint64_t modulus() const { return p_; }

  Residue reduce(std::uint64_t x) const { return x % p_; }
  Residue reduce_signed(std::int64_t x) const {
    const auto m = static_cast<std::int64_t>(p_);
    return static_cast<Residue>(((x % m) + m) % m);
  }

  Residue add(Residue a, Residue b) const {
    const Residue s = a + b;  // < 2^63, no wrap
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const { return detail::mulmod(a, b, p_); }
  Residue pow(Residue b, std::uint64_t e) const { return detail::powmod(b, e, p_); }
  Residue inv(Residue a) const {
    if (a % p_ == 0) throw DivisionByZero();
    return pow(a, p_ - 2);
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t p_;
};

/// Dense row-major matrix of residues. The modulus is not stored; every
/// operation takes the field explicitly.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  FieldMatrix(std::size_t rows, std::size_t cols, std::vector<Residue> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw ParameterError("matrix data does not match its shape");
    }
  }

  static FieldMatrix identity(std::size_t n) {
    FieldMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Residue& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Residue operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Residue> data() const { return data_; }

  FieldMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    FieldMatrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    }
    return out;
  }

  void set_block(std::size_t r0, std::size_t c0, const FieldMatrix& src) {
    for (std::size_t i = 0; i < src.rows(); ++i) {
      for (std::size_t j = 0; j < src.cols(); ++j) (*this)(r0 + i, c0 + j) = src(i, j);
    }
  }

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Residue> data_;
};

inline FieldMatrix random_matrix(const PrimeField& f, std::size_t rows,
                                 std::size_t cols, std::mt19937_64& rng) {
  std::uniform_int_distribution<Residue> dist(0, f.modulus() - 1);
  FieldMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
  }
  return m;
}

inline FieldMatrix multiply(const PrimeField& f, const FieldMatrix& a,
                            const FieldMatrix& b) {
  if (a.cols() != b.rows()) throw ParameterError("matrix product shape mismatch");
  FieldMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Residue aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        c(i, j) = f.add(c(i, j), f.mul(aik, b(k, j)));
      }
    }
  }
  return c;
}

/// c += s * a, entrywise.
inline void axpy(const PrimeField& f, Residue s, const FieldMatrix& a, FieldMatrix& c) {
  if (a.rows() != c.rows() || a.cols() != c.cols()) {
    throw ParameterError("axpy shape mismatch");
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f.add(c(i, j), f.mul(s, a(i, j)));
  }
}

/// GV(points, J): row n holds points[n]^j for j in the (ascending)
/// exponent list.
inline FieldMatrix generalized_vandermonde(const PrimeField& f,
                                           std::span<const Residue> points,
                                           std::span<const std::uint64_t> exponents) {
  if (points.size() != exponents.size()) {
    throw ParameterError("generalized Vandermonde needs |points| = |J|, got " +
                         std::to_string(points.size()) + " and " +
                         std::to_string(exponents.size()));
  }
  const std::size_t n = points.size();
  FieldMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = f.pow(f.reduce(points[i]), exponents[j]);
  }
  return m;
}

/// Determinant by Gaussian elimination, pivoting on the first nonzero
/// entry of each column.
inline Residue det(const PrimeField& f, FieldMatrix m) {
  if (m.rows() != m.cols()) throw ParameterError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  Residue d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = c; j < n; ++j) std::swap(m(piv, j), m(c, j));
      d = f.neg(d);
    }
    d = f.mul(d, m(c, c));
    const Residue inv = f.inv(m(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      const Residue factor = f.mul(m(r, c), inv);
      for (std::size_t j = c; j < n; ++j) m(r, j) = f.sub(m(r, j), f.mul(factor, m(c, j)));
    }
  }
  return d;
}

/// Solves m * x = rhs for every column of rhs at once. Throws
/// SingularMatrix if m is not invertible.
inline FieldMatrix solve(const PrimeField& f, FieldMatrix m, FieldMatrix rhs) {
  if (m.rows() != m.cols()) throw ParameterError("solve needs a square matrix");
  if (rhs.rows() != m.rows()) throw ParameterError("right-hand side has wrong height");
  const std::size_t n = m.rows();
  const std::size_t k = rhs.cols();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) throw SingularMatrix();
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      for (std::size_t j = 0; j < k; ++j) std::swap(rhs(piv, j), rhs(c, j));
    }
    const Residue inv = f.inv(m(c, c));
    for (std::size_t j = 0; j < n; ++j) m(c, j) = f.mul(m(c, j), inv);
    for (std::size_t j = 0; j < k; ++j) rhs(c, j) = f.mul(rhs(c, j), inv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m(r, c) == 0) continue;
      const Residue factor = m(r, c);
      for (std::size_t j = 0; j < n; ++j) m(r, j) = f.sub(m(r, j), f.mul(factor, m(c, j)));
      for (std::size_t j = 0; j < k; ++j) rhs(r, j) = f.sub(rhs(r, j), f.mul(factor, rhs(c, j)));
    }
  }
  return rhs;
}

/// Square submatrix of `m` on all rows and the given columns.
inline FieldMatrix column_minor(const FieldMatrix& m, std::span<const std::size_t> cols) {
  FieldMatrix out(m.rows(), cols.size());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(i, cols[j]);
  }
  return out;
}

/// Advances `idx` (a sorted k-subset of [0, n)) to the next subset in
/// lexicographic order. Returns false after the last one.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

struct MdsMode {
  enum class Kind { full, sampled };
  Kind kind = Kind::full;
  std::size_t samples = 0;  // sampled mode: number of random column subsets
  std::uint64_t seed = 0;

  static MdsMode full() { return {}; }
  static MdsMode sampled(std::size_t samples, std::uint64_t seed) {
    return {Kind::sampled, samples, seed};
  }
};

/// True iff every maximal (rows x rows) minor of the rows x cols matrix is
/// nonzero. Full mode enumerates all column subsets lexicographically;
/// sampled mode checks `samples` uniformly random subsets.
inline bool is_mds(const PrimeField& f, const FieldMatrix& m, MdsMode mode = MdsMode::full()) {
  const std::size_t t = m.rows();
  const std::size_t n = m.cols();
  if (t > n) throw ParameterError("is_mds needs rows <= cols");
  if (t == 0) return true;
  if (mode.kind == MdsMode::Kind::sampled) {
    std::mt19937_64 rng(mode.seed);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> pick(t);
    for (std::size_t s = 0; s < mode.samples; ++s) {
      std::sample(all.begin(), all.end(), pick.begin(), t, rng);
      if (det(f, column_minor(m, pick)) == 0) return false;
    }
    return true;
  }
  std::vector<std::size_t> idx(t);
  std::iota(idx.begin(), idx.end(), 0);
  do {
    if (det(f, column_minor(m, idx)) == 0) return false;
  } while (next_combination(idx, n));
  return true;
}

}  // namespace gasp
