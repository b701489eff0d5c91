#pragma once

// The secure distributed multiplication pipeline: choose evaluation
// points, secret-share A and B as polynomial evaluations, let servers
// multiply, and interpolate the product back.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasp/degree_table.hpp"
#include "gasp/error.hpp"
#include "gasp/gf.hpp"
#include "gasp/schemes.hpp"

namespace gasp {

/// A is r x s, B is s x t. K must divide r and L must divide t.
struct BlockShapes {
  std::size_t r = 1;
  std::size_t s = 1;
  std::size_t t = 1;

  void validate(const SchemeParams& p) const {
    if (r < 1 || s < 1 || t < 1) throw ParameterError("matrix dimensions must be positive");
    if (r % p.K != 0) {
      throw ParameterError("K=" + std::to_string(p.K) + " does not divide r=" + std::to_string(r));
    }
    if (t % p.L != 0) {
      throw ParameterError("L=" + std::to_string(p.L) + " does not divide t=" + std::to_string(t));
    }
  }
  std::size_t block_rows(const SchemeParams& p) const { return r / p.K; }
  std::size_t block_cols(const SchemeParams& p) const { return t / p.L; }

  friend bool operator==(const BlockShapes&, const BlockShapes&) = default;
};

struct EvaluationPlan {
  PrimeField field;
  std::vector<Residue> points;
  std::vector<Exponent> exponents;  // J, ascending

  friend bool operator==(const EvaluationPlan&, const EvaluationPlan&) = default;
};

/// T x N matrix [a_n^{e_t}] for the given mask exponents.
inline FieldMatrix mask_exponent_matrix(const PrimeField& f, std::span<const Residue> points,
                                        std::span<const Exponent> mask_exponents) {
  FieldMatrix m(mask_exponents.size(), points.size());
  for (std::size_t t = 0; t < mask_exponents.size(); ++t) {
    for (std::size_t n = 0; n < points.size(); ++n) m(t, n) = f.pow(points[n], mask_exponents[t]);
  }
  return m;
}

inline std::span<const Exponent> alpha_masks(const PolynomialCode& code) {
  return code.assignment.alpha_data().subspan(code.params.K);
}
inline std::span<const Exponent> beta_masks(const PolynomialCode& code) {
  return code.assignment.beta_data().subspan(code.params.L);
}

/// Outcome of checking the decodability and privacy conditions on a set
/// of evaluation points.
struct PlanCheck {
  bool distinct = false;
  bool gv_invertible = false;
  bool p_mds = false;
  bool q_mds = false;

  bool ok() const { return distinct && gv_invertible && p_mds && q_mds; }
};

inline PlanCheck check_points(const PolynomialCode& code, const PrimeField& field,
                              std::span<const Residue> points,
                              MdsMode mode = MdsMode::full()) {
  PlanCheck c;
  const TermSet J = terms(outer_sum(code.assignment, code.params));
  std::set<Residue> seen;
  for (Residue a : points) seen.insert(a);
  c.distinct = seen.size() == points.size() && points.size() == J.size() &&
               std::all_of(points.begin(), points.end(),
                           [&](Residue a) { return a < field.modulus(); });
  if (!c.distinct) return c;
  c.gv_invertible = det(field, generalized_vandermonde(field, points, J)) != 0;
  c.p_mds = is_mds(field, mask_exponent_matrix(field, points, alpha_masks(code)), mode);
  c.q_mds = is_mds(field, mask_exponent_matrix(field, points, beta_masks(code)), mode);
  return c;
}

/// Default field: the smallest prime above max(J) * N.
inline PrimeField default_field(const PolynomialCode& code) {
  const TermSet J = terms(outer_sum(code.assignment, code.params));
  const std::uint64_t bound = std::max<std::uint64_t>(J.back(), 1) * J.size();
  return PrimeField(next_prime(bound));
}

struct PlanSearchOptions {
  std::uint64_t seed = 0;
  std::size_t max_attempts = 1000;
  MdsMode mds = MdsMode::full();
};

/// Rejection-samples N distinct nonzero points until the generalized
/// Vandermonde matrix is invertible and both mask matrices are MDS.
inline EvaluationPlan find_evaluation_plan(const PolynomialCode& code, const PrimeField& field,
                                           const PlanSearchOptions& opts = {}) {
  const std::size_t n = code.n_servers;
  if (field.modulus() <= n) {
    throw ParameterError("field size " + std::to_string(field.modulus()) +
                         " leaves no room for " + std::to_string(n) +
                         " distinct nonzero points");
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<Residue> dist(1, field.modulus() - 1);
  const bool small_field = field.modulus() <= 4 * n + 64;
  std::vector<Residue> pool;
  if (small_field) {
    pool.resize(field.modulus() - 1);
    std::iota(pool.begin(), pool.end(), Residue{1});
  }
  for (std::size_t attempt = 1; attempt <= opts.max_attempts; ++attempt) {
    std::vector<Residue> points;
    if (small_field) {
      std::shuffle(pool.begin(), pool.end(), rng);
      points.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
    } else {
      std::set<Residue> seen;
      while (points.size() < n) {
        const Residue a = dist(rng);
        if (seen.insert(a).second) points.push_back(a);
      }
    }
    if (check_points(code, field, points, opts.mds).ok()) {
      return {field, std::move(points), terms(outer_sum(code.assignment, code.params))};
    }
  }
  throw SearchFailure(opts.max_attempts);
}

/// Builds a plan on caller-chosen points; throws ParameterError if they do
/// not satisfy every condition.
inline EvaluationPlan plan_from_points(const PolynomialCode& code, const PrimeField& field,
                                       std::vector<Residue> points,
                                       MdsMode mode = MdsMode::full()) {
  const PlanCheck c = check_points(code, field, points, mode);
  if (!c.ok()) {
    std::string why = !c.distinct        ? "points are not N distinct residues"
                      : !c.gv_invertible ? "generalized Vandermonde matrix is singular"
                      : !c.p_mds         ? "alpha mask matrix is not MDS"
                                         : "beta mask matrix is not MDS";
    throw ParameterError("invalid evaluation points: " + why);
  }
  return {field, std::move(points), terms(outer_sum(code.assignment, code.params))};
}

namespace detail {
template <class Seq>
std::string join(const Seq& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

inline std::vector<std::uint64_t> parse_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = s.find(',', pos);
    const std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw ParameterError("malformed number '" + item + "' in plan");
    }
    try {
      out.push_back(std::stoull(item));
    } catch (const std::out_of_range&) {
      throw ParameterError("number '" + item + "' in plan is too large");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}
}  // namespace detail

/// Three lines: `p=<modulus>`, `points=<a_1,...,a_N>`, `J=<j_1,...,j_N>`.
inline std::string serialize_plan(const EvaluationPlan& plan) {
  return "p=" + std::to_string(plan.field.modulus()) + "\npoints=" + detail::join(plan.points) +
         "\nJ=" + detail::join(plan.exponents) + "\n";
}

inline EvaluationPlan parse_plan(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<std::uint64_t> p;
  std::optional<std::vector<std::uint64_t>> points, J;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParameterError("plan line without '=': " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "p") {
      const auto v = detail::parse_list(value);
      if (v.size() != 1) throw ParameterError("plan modulus must be a single number");
      p = v[0];
    } else if (key == "points") {
      points = detail::parse_list(value);
    } else if (key == "J") {
      J = detail::parse_list(value);
    } else {
      throw ParameterError("unknown plan key '" + key + "'");
    }
  }
  if (!p || !points || !J) throw ParameterError("plan needs p, points and J");
  if (points->size() != J->size()) throw ParameterError("plan has |points| != |J|");
  if (!std::is_sorted(J->begin(), J->end()) ||
      std::adjacent_find(J->begin(), J->end()) != J->end()) {
    throw ParameterError("plan exponents must be strictly ascending");
  }
  PrimeField field(*p);
  for (Residue a : *points) {
    if (a >= field.modulus()) throw ParameterError("plan point out of field range");
  }
  return {field, std::move(*points), std::move(*J)};
}

struct MaskSet {
  std::vector<FieldMatrix> r_masks;  // T matrices, (r/K) x s
  std::vector<FieldMatrix> s_masks;  // T matrices, s x (t/L)
};

struct ShareBundle {
  PrimeField field;
  std::vector<FieldMatrix> f_shares;  // f(a_n), (r/K) x s
  std::vector<FieldMatrix> g_shares;  // g(a_n), s x (t/L)

  std::size_t size() const { return f_shares.size(); }
};

struct EncodeOptions {
  bool keep_masks = false;  // return the masks for auditing
  bool zero_masks = false;  // replace masks by zero (no privacy; audit only)
};

struct Encoded {
  ShareBundle shares;
  std::optional<MaskSet> masks;
};

namespace detail {
inline void check_plan_matches(const PolynomialCode& code, const EvaluationPlan& plan) {
  if (plan.points.size() != code.n_servers || plan.exponents.size() != code.n_servers) {
    throw ParameterError("evaluation plan size does not match the code's N");
  }
}

// sum_i blocks[i] * a^{exponents[i]}
inline FieldMatrix evaluate_poly(const PrimeField& f, std::span<const FieldMatrix> blocks,
                                 std::span<const Exponent> exponents, Residue a) {
  FieldMatrix acc(blocks.front().rows(), blocks.front().cols());
  for (std::size_t i = 0; i < blocks.size(); ++i) axpy(f, f.pow(a, exponents[i]), blocks[i], acc);
  return acc;
}
}  // namespace detail

/// Shares f(a_n) = sum_k A_k a_n^{alpha_k} + sum_t R_t a_n^{alpha_{K+t}} and
/// the analogous g(a_n) for every server. Masks come from `seed`.
inline Encoded encode(const FieldMatrix& A, const FieldMatrix& B, const PolynomialCode& code,
                      const EvaluationPlan& plan, const BlockShapes& shapes, std::uint64_t seed,
                      const EncodeOptions& opts = {}) {
  const auto& p = code.params;
  shapes.validate(p);
  detail::check_plan_matches(code, plan);
  if (A.rows() != shapes.r || A.cols() != shapes.s || B.rows() != shapes.s ||
      B.cols() != shapes.t) {
    throw ParameterError("A and B do not have the declared shapes");
  }
  const PrimeField& f = plan.field;
  const std::size_t br = shapes.block_rows(p);
  const std::size_t bc = shapes.block_cols(p);

  std::vector<FieldMatrix> f_blocks, g_blocks;
  for (std::size_t k = 0; k < p.K; ++k) f_blocks.push_back(A.block(k * br, 0, br, shapes.s));
  for (std::size_t l = 0; l < p.L; ++l) g_blocks.push_back(B.block(0, l * bc, shapes.s, bc));

  MaskSet masks;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < p.T; ++t) {
    masks.r_masks.push_back(opts.zero_masks ? FieldMatrix(br, shapes.s)
                                            : random_matrix(f, br, shapes.s, rng));
  }
  for (std::size_t t = 0; t < p.T; ++t) {
    masks.s_masks.push_back(opts.zero_masks ? FieldMatrix(shapes.s, bc)
                                            : random_matrix(f, shapes.s, bc, rng));
  }
  f_blocks.insert(f_blocks.end(), masks.r_masks.begin(), masks.r_masks.end());
  g_blocks.insert(g_blocks.end(), masks.s_masks.begin(), masks.s_masks.end());

  Encoded out{ShareBundle{f, {}, {}}, std::nullopt};
  for (Residue a : plan.points) {
    out.shares.f_shares.push_back(detail::evaluate_poly(f, f_blocks, code.assignment.alpha, a));
    out.shares.g_shares.push_back(detail::evaluate_poly(f, g_blocks, code.assignment.beta, a));
  }
  if (opts.keep_masks) out.masks = std::move(masks);
  return out;
}

/// Server n's work: h(a_n) = f(a_n) g(a_n).
inline FieldMatrix server_evaluate(const ShareBundle& bundle, std::size_t n) {
  if (n >= bundle.size()) throw ParameterError("server index out of range");
  return multiply(bundle.field, bundle.f_shares[n], bundle.g_shares[n]);
}

/// Interpolates h(x) = sum_{j in J} C_j x^j from all N responses (indexed
/// by server) and reads A_k B_l off the coefficient of x^{alpha_k+beta_l}.
inline FieldMatrix decode(std::span<const FieldMatrix> responses, const PolynomialCode& code,
                          const EvaluationPlan& plan, const BlockShapes& shapes) {
  const auto& p = code.params;
  shapes.validate(p);
  detail::check_plan_matches(code, plan);
  const std::size_t br = shapes.block_rows(p);
  const std::size_t bc = shapes.block_cols(p);
  const std::size_t n = code.n_servers;
  if (responses.size() != n) {
    throw ParameterError("expected " + std::to_string(n) + " responses, got " +
                         std::to_string(responses.size()));
  }
  FieldMatrix rhs(n, br * bc);
  for (std::size_t i = 0; i < n; ++i) {
    const FieldMatrix& h = responses[i];
    if (h.rows() != br || h.cols() != bc) {
      throw ParameterError("response from server " + std::to_string(i) +
                           " is missing or has the wrong shape");
    }
    for (std::size_t e = 0; e < br * bc; ++e) rhs(i, e) = h(e / bc, e % bc);
  }
  const PrimeField& f = plan.field;
  FieldMatrix coeffs;
  try {
    coeffs = solve(f, generalized_vandermonde(f, plan.points, plan.exponents), std::move(rhs));
  } catch (const SingularMatrix&) {
    throw VerificationError("generalized Vandermonde matrix of the plan is singular");
  }

  FieldMatrix ab(shapes.r, shapes.t);
  const auto& J = plan.exponents;
  for (std::size_t k = 0; k < p.K; ++k) {
    for (std::size_t l = 0; l < p.L; ++l) {
      const Exponent j = code.assignment.alpha[k] + code.assignment.beta[l];
      const auto it = std::lower_bound(J.begin(), J.end(), j);
      if (it == J.end() || *it != j) throw VerificationError("plan exponents miss a product term");
      const auto row = static_cast<std::size_t>(it - J.begin());
      for (std::size_t e = 0; e < br * bc; ++e) {
        ab(k * br + e / bc, l * bc + e % bc) = coeffs(row, e);
      }
    }
  }
  return ab;
}

/// Symbols moved between user and servers.
struct CostReport {
  std::uint64_t upload_symbols;    // N (rs/K + st/L)
  std::uint64_t download_symbols;  // N rt / (KL)
};

inline CostReport communication_cost(std::size_t n_servers, const SchemeParams& p,
                                     const BlockShapes& shapes) {
  shapes.validate(p);
  const std::uint64_t per_server_up =
      shapes.block_rows(p) * shapes.s + shapes.s * shapes.block_cols(p);
  const std::uint64_t per_server_down = shapes.block_rows(p) * shapes.block_cols(p);
  return {n_servers * per_server_up, n_servers * per_server_down};
}

inline CostReport cost(const PolynomialCode& code, const BlockShapes& shapes) {
  return communication_cost(code.n_servers, code.params, shapes);
}

}  // namespace gasp
