#pragma once

// In-process simulation of N honest-but-curious servers, plus privacy
// audits: the algebraic sufficient conditions at any scale and exhaustive
// distributional equality at toy scale.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gasp/codec.hpp"
#include "gasp/degree_table.hpp"
#include "gasp/error.hpp"
#include "gasp/gf.hpp"
#include "gasp/schemes.hpp"

namespace gasp {

struct SessionOptions {
  std::optional<std::uint64_t> modulus;        // default_field(code) if unset
  std::optional<std::vector<Residue>> points;  // fixed points instead of a search
  std::uint64_t seed = 0;
  std::size_t groups = 0;  // for SchemeKind::grouped
  std::size_t max_attempts = 1000;
};

struct SessionTranscript {
  PolynomialCode code;
  EvaluationPlan plan;
  BlockShapes shapes;
  FieldMatrix A, B;
  ShareBundle shares;
  std::vector<FieldMatrix> responses;
  FieldMatrix decoded;
  CostReport cost;
  double wall_ms = 0.0;

  /// Equality of everything except wall time.
  bool same_data(const SessionTranscript& o) const {
    return code.assignment == o.code.assignment && code.params == o.code.params &&
           plan == o.plan && shapes == o.shapes && A == o.A && B == o.B &&
           shares.f_shares == o.shares.f_shares && shares.g_shares == o.shares.g_shares &&
           responses == o.responses && decoded == o.decoded &&
           cost.upload_symbols == o.cost.upload_symbols &&
           cost.download_symbols == o.cost.download_symbols;
  }
};

/// Builds the code and plan, draws random A and B, encodes, runs every
/// server, decodes and checks the result against A*B.
inline SessionTranscript run_sdmm(const SchemeParams& params, SchemeKind kind,
                                  const BlockShapes& shapes, const SessionOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  shapes.validate(params);
  PolynomialCode code = build_code(params, kind, opts.groups);
  const PrimeField field = opts.modulus ? PrimeField(*opts.modulus) : default_field(code);
  EvaluationPlan plan =
      opts.points ? plan_from_points(code, field, *opts.points)
                  : find_evaluation_plan(code, field, {opts.seed, opts.max_attempts, MdsMode::full()});

  // Secrets and masks use separate streams derived from the one seed.
  std::mt19937_64 rng(opts.seed ^ 0x5DEECE66DULL);
  FieldMatrix A = random_matrix(field, shapes.r, shapes.s, rng);
  FieldMatrix B = random_matrix(field, shapes.s, shapes.t, rng);
  Encoded enc = encode(A, B, code, plan, shapes, opts.seed + 1);

  std::vector<FieldMatrix> responses;
  responses.reserve(code.n_servers);
  for (std::size_t n = 0; n < code.n_servers; ++n) responses.push_back(server_evaluate(enc.shares, n));

  FieldMatrix decoded = decode(responses, code, plan, shapes);
  if (decoded != multiply(field, A, B)) {
    throw VerificationError("decoded product differs from A*B");
  }
  const CostReport c = cost(code, shapes);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start).count();
  return {std::move(code), std::move(plan), shapes, std::move(A), std::move(B),
          std::move(enc.shares), std::move(responses), std::move(decoded), c, ms};
}

/// key=value lines for display.
inline std::string transcript_summary(const SessionTranscript& tr) {
  const auto& p = tr.code.params;
  std::ostringstream out;
  out << "scheme=" << tr.code.label() << "\n"
      << "K=" << p.K << "\nL=" << p.L << "\nT=" << p.T << "\n"
      << "N=" << tr.code.n_servers << "\n"
      << "p=" << tr.plan.field.modulus() << "\n"
      << "r=" << tr.shapes.r << "\ns=" << tr.shapes.s << "\nt=" << tr.shapes.t << "\n"
      << "rate=" << format_rate(download_rate(p, static_cast<std::int64_t>(tr.code.n_servers)))
      << "\n"
      << "upload_symbols=" << tr.cost.upload_symbols << "\n"
      << "download_symbols=" << tr.cost.download_symbols << "\n"
      << "verified=true\n";
  return out.str();
}

struct MdsAuditReport {
  bool gv_det_nonzero = false;
  bool p_mds = false;
  bool q_mds = false;

  bool all() const { return gv_det_nonzero && p_mds && q_mds; }
};

/// Re-checks the three sufficient conditions (invertible generalized
/// Vandermonde matrix, MDS mask matrices) from scratch: J is recomputed from
/// the code and every T-subset determinant is evaluated directly.
inline MdsAuditReport mds_audit(const PolynomialCode& code, const EvaluationPlan& plan) {
  MdsAuditReport rep;
  const PrimeField& f = plan.field;
  const TermSet J = terms(outer_sum(code.assignment, code.params));
  if (plan.points.size() != J.size()) return rep;

  FieldMatrix gv(J.size(), J.size());
  for (std::size_t n = 0; n < J.size(); ++n) {
    for (std::size_t c = 0; c < J.size(); ++c) gv(n, c) = f.pow(plan.points[n], J[c]);
  }
  rep.gv_det_nonzero = det(f, gv) != 0;

  const std::size_t T = code.params.T;
  auto all_minors_nonzero = [&](const std::vector<Exponent>& exps, std::size_t head) {
    std::vector<std::size_t> subset(T);
    std::iota(subset.begin(), subset.end(), 0);
    do {
      FieldMatrix m(T, T);
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t c = 0; c < T; ++c) m(t, c) = f.pow(plan.points[subset[c]], exps[head + t]);
      }
      if (det(f, m) == 0) return false;
    } while (next_combination(subset, plan.points.size()));
    return true;
  };
  rep.p_mds = all_minors_nonzero(code.assignment.alpha, code.params.K);
  rep.q_mds = all_minors_nonzero(code.assignment.beta, code.params.L);
  return rep;
}

struct PrivacyAuditOptions {
  bool zero_masks = false;
  double budget = 1e8;  // elementary steps
};

struct PrivacyAuditResult {
  bool passed = false;
  std::size_t subsets_checked = 0;
  std::optional<std::vector<std::size_t>> leaking_subset;  // first failure
};

/// Number of elementary steps exhaustive_privacy_audit would take.
inline double privacy_audit_steps(const PolynomialCode& code, std::uint64_t p) {
  const auto& q = code.params;
  const double symbols = static_cast<double>(q.K + q.L + 2 * q.T);
  return binomial(code.n_servers, q.T) * std::pow(static_cast<double>(p), symbols);
}

/// Scalar blocks (r = K, s = 1, t = L). For every T-subset of servers and
/// every secret pair (A, B), enumerates all mask values and histograms the
/// colluders' view (f(a_n), g(a_n))_{n in subset}. Passes iff the histogram
/// is the same for every (A, B).
inline PrivacyAuditResult exhaustive_privacy_audit(const PolynomialCode& code,
                                                   const EvaluationPlan& plan,
                                                   const PrivacyAuditOptions& opts = {}) {
  const auto& q = code.params;
  const PrimeField& f = plan.field;
  const std::uint64_t p = f.modulus();
  if (plan.points.size() != code.n_servers) {
    throw ParameterError("plan does not match the code");
  }
  const double steps = privacy_audit_steps(code, p);
  if (steps > opts.budget) {
    std::ostringstream msg;
    msg << "exhaustive audit needs about " << steps << " steps, budget is " << opts.budget;
    throw BudgetExceeded(msg.str());
  }
  const std::size_t T = q.T;
  const std::size_t secret_syms = q.K + q.L;
  const std::size_t mask_syms = 2 * T;
  auto ipow = [](std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
  };
  const std::uint64_t n_secrets = ipow(p, secret_syms);
  const std::uint64_t n_masks = ipow(p, mask_syms);

  // Powers a_n^{alpha_i}, a_n^{beta_j} for every server.
  const std::size_t N = code.n_servers;
  std::vector<std::vector<Residue>> apow(N), bpow(N);
  for (std::size_t n = 0; n < N; ++n) {
    for (Exponent e : code.assignment.alpha) apow[n].push_back(f.pow(plan.points[n], e));
    for (Exponent e : code.assignment.beta) bpow[n].push_back(f.pow(plan.points[n], e));
  }

  auto digits = [&](std::uint64_t code_word, std::size_t count) {
    std::vector<Residue> d(count);
    for (auto& x : d) {
      x = code_word % p;
      code_word /= p;
    }
    return d;
  };

  PrivacyAuditResult result;
  std::vector<std::size_t> subset(T);
  std::iota(subset.begin(), subset.end(), 0);
  do {
    ++result.subsets_checked;
    std::map<std::vector<Residue>, std::uint64_t> reference;
    for (std::uint64_t s = 0; s < n_secrets; ++s) {
      const auto secret = digits(s, secret_syms);  // A_1..A_K, B_1..B_L
      std::map<std::vector<Residue>, std::uint64_t> hist;
      for (std::uint64_t m = 0; m < n_masks; ++m) {
        const auto mask = opts.zero_masks ? std::vector<Residue>(mask_syms, 0)
                                          : digits(m, mask_syms);  // R_1..R_T, S_1..S_T
        std::vector<Residue> view;
        view.reserve(2 * T);
        for (std::size_t n : subset) {
          Residue fv = 0, gv = 0;
          for (std::size_t k = 0; k < q.K; ++k) fv = f.add(fv, f.mul(secret[k], apow[n][k]));
          for (std::size_t t = 0; t < T; ++t) fv = f.add(fv, f.mul(mask[t], apow[n][q.K + t]));
          for (std::size_t l = 0; l < q.L; ++l) gv = f.add(gv, f.mul(secret[q.K + l], bpow[n][l]));
          for (std::size_t t = 0; t < T; ++t) gv = f.add(gv, f.mul(mask[T + t], bpow[n][q.L + t]));
          view.push_back(fv);
          view.push_back(gv);
        }
        ++hist[view];
      }
      if (s == 0) {
        reference = std::move(hist);
      } else if (hist != reference) {
        result.leaking_subset = subset;
        return result;
      }
    }
  } while (next_combination(subset, N));
  result.passed = true;
  return result;
}

}  // namespace gasp
