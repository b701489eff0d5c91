#pragma once

// GASP exponent constructions, their closed-form server counts, competitor
// rates and the fixed-N rate optimization.

#include <boost/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gasp/degree_table.hpp"
#include "gasp/error.hpp"

namespace gasp {

using Rational = boost::rational<std::int64_t>;

enum class SchemeKind { small, big, automatic, grouped, custom };

inline std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::small: return "small";
    case SchemeKind::big: return "big";
    case SchemeKind::automatic: return "auto";
    case SchemeKind::grouped: return "grouped";
    case SchemeKind::custom: return "custom";
  }
  return "?";
}

/// Renders a rate with exactly three decimals, rounding half up.
inline std::string format_rate(const Rational& r) {
  const std::int64_t num = r.numerator();
  const std::int64_t den = r.denominator();
  const std::int64_t scaled = (2 * 1000 * num + den) / (2 * den);
  std::string frac = std::to_string(scaled % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return std::to_string(scaled / 1000) + "." + frac;
}

namespace detail {

// The L <= K form of GASP_big / the K <= L form of GASP_small share the
// unmasked part: alpha = 0..K-1, beta = 0, K, ..., K(L-1).
inline ExponentAssignment progression_base(std::size_t K, std::size_t L) {
  ExponentAssignment a;
  for (std::size_t k = 0; k < K; ++k) a.alpha.push_back(k);
  for (std::size_t l = 0; l < L; ++l) a.beta.push_back(K * l);
  return a;
}

inline void check_params(const SchemeParams& p) {
  if (p.K < 1 || p.L < 1 || p.T < 1) {
    throw ParameterError("K, L and T must all be at least 1");
  }
}

inline ExponentAssignment swapped(ExponentAssignment a) {
  std::swap(a.alpha, a.beta);
  return a;
}

}  // namespace detail

inline ExponentAssignment gasp_big(const SchemeParams& p) {
  detail::check_params(p);
  if (p.K < p.L) return detail::swapped(gasp_big(SchemeParams(p.L, p.K, p.T)));
  auto a = detail::progression_base(p.K, p.L);
  const Exponent base = p.K * p.L;
  for (std::size_t t = 0; t < p.T; ++t) {
    a.alpha.push_back(base + t);
    a.beta.push_back(base + t);
  }
  return a;
}

inline ExponentAssignment gasp_small(const SchemeParams& p) {
  detail::check_params(p);
  if (p.L < p.K) return detail::swapped(gasp_small(SchemeParams(p.L, p.K, p.T)));
  auto a = detail::progression_base(p.K, p.L);
  const Exponent base = p.K * p.L;
  for (std::size_t t = 0; t < p.T; ++t) {
    a.alpha.push_back(base + p.K * t);
    a.beta.push_back(base + t);
  }
  return a;
}

/// K = Q*G + R with 0 <= R < G.
struct GroupedSpec {
  std::size_t K;
  std::size_t G;
  std::size_t Q;
  std::size_t R;

  GroupedSpec(std::size_t k, std::size_t g) : K(k), G(g) {
    if (K < 1 || G < 1 || G > K) {
      throw ParameterError("grouped scheme needs 1 <= G <= K, got K=" +
                           std::to_string(K) + " G=" + std::to_string(G));
    }
    Q = K / G;
    R = K % G;
  }
};

/// Grouped construction for K = L = T: G runs of Q consecutive mask
/// exponents starting at K^2 + gK, plus a final run of R starting at
/// K^2 + GK. G = 1 gives GASP_big, G = K gives GASP_small.
inline ExponentAssignment gasp_grouped(std::size_t K, std::size_t G) {
  const GroupedSpec spec(K, G);
  auto a = detail::progression_base(K, K);
  const Exponent base = K * K;
  for (std::size_t g = 0; g < spec.G; ++g) {
    for (std::size_t i = 0; i < spec.Q; ++i) a.alpha.push_back(base + g * K + i);
  }
  for (std::size_t i = 0; i < spec.R; ++i) a.alpha.push_back(base + spec.G * K + i);
  for (std::size_t t = 0; t < K; ++t) a.beta.push_back(base + t);
  return a;
}

inline std::int64_t n_big_closed(const SchemeParams& p) {
  detail::check_params(p);
  // The K < L case is the L <= K formula with K and L exchanged.
  const auto big = static_cast<std::int64_t>(std::max(p.K, p.L));
  const auto low = static_cast<std::int64_t>(std::min(p.K, p.L));
  const auto T = static_cast<std::int64_t>(p.T);
  if (T < big) return (big + T) * (low + 1) - 1;
  return 2 * big * low + 2 * T - 1;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t n_small_closed(const SchemeParams& p) {
  detail::check_params(p);
  // Written for K <= L; for L < K the roles of K and L swap.
  const auto K = static_cast<std::int64_t>(std::min(p.K, p.L));
  const auto L = static_cast<std::int64_t>(std::max(p.K, p.L));
  const auto T = static_cast<std::int64_t>(p.T);
  if (L == 1) {
    return T < K ? 2 * K + T * T : K * T + K + T;
  }
  if (T == 1 && T < K) return K * L + K + L;
  if (T >= 2 && T < K) return K * L + K + L + T * T + T - 3;
  if (K <= T && T <= K * (L - 1) + 1) {
    return K * L + K * T + L + 2 * T - 3 - floor_div(T - 2, K);
  }
  return 2 * K * L + K * T - K + T;
}

struct PolynomialCode {
  SchemeParams params;
  ExponentAssignment assignment;
  std::size_t n_servers = 0;
  SchemeKind scheme = SchemeKind::custom;
  std::size_t groups = 0;  // only for SchemeKind::grouped

  std::string label() const {
    return scheme == SchemeKind::grouped ? "grouped(" + std::to_string(groups) + ")"
                                         : to_string(scheme);
  }
};

/// Wraps an assignment as a code. N is recomputed by counting terms, and
/// the decodability and T-security predicates must hold.
inline PolynomialCode make_code(const SchemeParams& params,
                                ExponentAssignment assignment,
                                SchemeKind scheme = SchemeKind::custom,
                                std::size_t groups = 0) {
  validate(assignment, params);
  if (!is_decodable(assignment, params)) {
    throw ParameterError("assignment is not decodable");
  }
  if (!is_t_secure_assignment(assignment, params)) {
    throw ParameterError("assignment is not T-secure");
  }
  const std::size_t n = count_terms(assignment, params);
  return {params, std::move(assignment), n, scheme, groups};
}

/// GASP_small when T < min(K, L), GASP_big otherwise.
inline SchemeKind auto_choice(const SchemeParams& p) {
  return p.T < std::min(p.K, p.L) ? SchemeKind::small : SchemeKind::big;
}

inline PolynomialCode gasp_auto(const SchemeParams& p) {
  const SchemeKind kind = auto_choice(p);
  return make_code(p, kind == SchemeKind::small ? gasp_small(p) : gasp_big(p), kind);
}

/// Builds a code by scheme name. `groups` is only used for the grouped
/// scheme, which requires K = L = T.
inline PolynomialCode build_code(const SchemeParams& p, SchemeKind kind,
                                 std::size_t groups = 0) {
  switch (kind) {
    case SchemeKind::small: return make_code(p, gasp_small(p), kind);
    case SchemeKind::big: return make_code(p, gasp_big(p), kind);
    case SchemeKind::automatic: return gasp_auto(p);
    case SchemeKind::grouped:
      if (p.K != p.L || p.L != p.T) {
        throw ParameterError("grouped scheme is defined only for K = L = T");
      }
      return make_code(p, gasp_grouped(p.K, groups), kind, groups);
    case SchemeKind::custom: break;
  }
  throw ParameterError("custom codes need an explicit assignment");
}

inline Rational download_rate(const SchemeParams& p, std::int64_t n) {
  if (n < 1) throw ParameterError("server count must be positive");
  return Rational(static_cast<std::int64_t>(p.K * p.L), n);
}

/// Rate of the K = L scheme that uses every coefficient of a (K+T)^2 grid.
inline Rational rate_r1(std::size_t K, std::size_t T) {
  const auto k = static_cast<std::int64_t>(K);
  const auto kt = static_cast<std::int64_t>(K + T);
  return Rational(k * k, kt * kt);
}

inline std::int64_t n_r2(const SchemeParams& p) {
  return static_cast<std::int64_t>((p.K + p.T) * (p.L + 1)) - 1;
}

/// Rate of the (K+T)(L+1)-1 server scheme.
inline Rational rate_r2(const SchemeParams& p) {
  return Rational(static_cast<std::int64_t>(p.K * p.L), n_r2(p));
}

struct RateReport {
  std::int64_t n_small;
  std::int64_t n_big;
  std::int64_t n_gasp;
  Rational rate_gasp;
  std::optional<Rational> rate_r1;  // only defined for K = L
  Rational rate_r2;
};

inline RateReport rate_report(const SchemeParams& p) {
  RateReport r{n_small_closed(p), n_big_closed(p), 0, Rational(0), std::nullopt,
               rate_r2(p)};
  r.n_gasp = auto_choice(p) == SchemeKind::small ? r.n_small : r.n_big;
  r.rate_gasp = download_rate(p, r.n_gasp);
  if (p.K == p.L) r.rate_r1 = rate_r1(p.K, p.T);
  return r;
}

struct KakarChoice {
  std::size_t K;
  std::size_t L;
  std::int64_t n_used;  // (K+T)(L+1) - 1
  Rational rate;
};

/// The closed-form (K, L) choice for the (K+T)(L+1)-1 scheme at fixed N
/// and T. L is the smallest integer >= max(1, -3/2 + sqrt(1/4 + N/T)),
/// computed exactly as the least L >= 1 with (2L+3)^2 T >= T + 4N.
inline std::optional<KakarChoice> kakar_heuristic(std::size_t N, std::size_t T) {
  if (T < 1 || N < 2 * T + 1) return std::nullopt;
  const auto n = static_cast<std::int64_t>(N);
  const auto t = static_cast<std::int64_t>(T);
  std::int64_t L = 1;
  while ((2 * L + 3) * (2 * L + 3) * t < t + 4 * n) ++L;
  const std::int64_t K = (n + 1) / (L + 1) - t;
  if (K < 1) return std::nullopt;
  const SchemeParams p(static_cast<std::size_t>(K), static_cast<std::size_t>(L), T);
  const std::int64_t used = n_r2(p);
  if (used > n) {
    throw VerificationError("kakar_heuristic exceeded the server budget");
  }
  return KakarChoice{p.K, p.L, used, rate_r2(p)};
}

struct OptimizeResult {
  std::size_t K;
  std::size_t L;
  std::int64_t n_used;
  Rational rate;
};

/// Brute-force maximization of KL / min(N_small, N_big) subject to
/// min(N_small, N_big) <= N. Ties go to smaller K + L, then smaller K.
inline std::optional<OptimizeResult> optimize_gasp(std::size_t N, std::size_t T) {
  if (T < 1) return std::nullopt;
  std::optional<OptimizeResult> best;
  const auto budget = static_cast<std::int64_t>(N);
  for (std::size_t K = 1; K <= N; ++K) {
    for (std::size_t L = 1; K * L <= N; ++L) {
      const SchemeParams p(K, L, T);
      const std::int64_t n = std::min(n_small_closed(p), n_big_closed(p));
      if (n > budget) continue;
      const Rational rate = download_rate(p, n);
      const bool better =
          !best || rate > best->rate ||
          (rate == best->rate &&
           (K + L < best->K + best->L || (K + L == best->K + best->L && K < best->K)));
      if (better) best = OptimizeResult{K, L, n, rate};
    }
  }
  return best;
}

struct GroupedRow {
  std::size_t G;
  std::size_t N;
  Rational rate;
};

/// N and rate of the grouped scheme for every G = 1..K (K = L = T). N is
/// counted from the degree table; there is no closed form.
inline std::vector<GroupedRow> grouped_sweep(std::size_t K) {
  if (K < 1) throw ParameterError("K must be at least 1");
  const SchemeParams p(K, K, K);
  std::vector<GroupedRow> rows;
  for (std::size_t G = 1; G <= K; ++G) {
    const std::size_t n = count_terms(gasp_grouped(K, G), p);
    rows.push_back({G, n, download_rate(p, static_cast<std::int64_t>(n))});
  }
  return rows;
}

}  // namespace gasp
