#pragma once

// Command-line front end. run_cli() is the whole program minus main(), so
// tests can drive it in-process and inspect output and exit codes.
//
// Exit codes: 0 success, 1 runtime or verification failure, 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gasp/codec.hpp"
#include "gasp/degree_table.hpp"
#include "gasp/error.hpp"
#include "gasp/harness.hpp"
#include "gasp/schemes.hpp"

namespace gasp::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

/// Thrown for flag combinations CLI11 cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline SchemeKind parse_scheme(const std::string& s) {
  if (s == "small") return SchemeKind::small;
  if (s == "big") return SchemeKind::big;
  if (s == "auto") return SchemeKind::automatic;
  if (s == "grouped") return SchemeKind::grouped;
  throw UsageError("unknown scheme '" + s + "'");
}

inline std::string render_table(const PolynomialCode& code) {
  const auto& p = code.params;
  const DegreeTable table = outer_sum(code.assignment, p);
  std::size_t w = 1;
  for (Exponent e : table.entries()) w = std::max(w, std::to_string(e).size());
  for (Exponent e : code.assignment.alpha) w = std::max(w, std::to_string(e).size());

  std::ostringstream out;
  auto cell = [&](Exponent v) { out << ' ' << std::setw(static_cast<int>(w)) << v; };
  auto rule = [&] {
    out << std::string(w + 1, '-') << '+' << std::string(p.L * (w + 1) + 1, '-') << '+'
        << std::string(p.T * (w + 1), '-') << '\n';
  };
  out << std::string(w + 1, ' ') << '|';
  for (std::size_t j = 0; j < table.cols(); ++j) {
    if (j == p.L) out << " |";
    cell(code.assignment.beta[j]);
  }
  out << '\n';
  rule();
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (i == p.K) rule();
    out << std::setw(static_cast<int>(w + 1)) << code.assignment.alpha[i] << '|';
    for (std::size_t j = 0; j < table.cols(); ++j) {
      if (j == p.L) out << " |";
      cell(table(i, j));
    }
    out << '\n';
  }
  out << "N=" << code.n_servers << '\n';
  return out.str();
}

namespace detail {

// Opens `path` for writing, or uses `stdout_stream` for "-".
inline int with_output(const std::string& path, std::ostream& stdout_stream, std::ostream& err,
                       const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(stdout_stream);
    return kOk;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    err << "error: cannot open '" << path << "' for writing\n";
    return kFailure;
  }
  write(file);
  file.flush();
  if (!file) {
    err << "error: failed writing '" << path << "'\n";
    return kFailure;
  }
  return kOk;
}

inline std::vector<Residue> parse_points(const std::string& s) {
  try {
    return gasp::detail::parse_list(s);
  } catch (const ParameterError& e) {
    throw UsageError(std::string("--points: ") + e.what());
  }
}

inline const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GASP polynomial codes for secure distributed matrix multiplication", "gasp"};
  app.require_subcommand(1);

  std::size_t k = 0, l = 0, t = 0, g = 0, t_max = 0, n = 0;
  std::size_t r = 0, s = 0, tcols = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> modulus;
  std::string scheme = "auto", out_path = "-", points;
  bool exhaustive = false, zero_masks = false, reflected = false;
  double budget = 1e8;

  auto* table = app.add_subcommand("table", "print the degree table and N");
  table->add_option("--k", k, "row blocks of A")->required()->check(CLI::PositiveNumber);
  table->add_option("--l", l, "column blocks of B")->required()->check(CLI::PositiveNumber);
  table->add_option("--t", t, "collusion tolerance")->required()->check(CLI::PositiveNumber);
  table->add_option("--scheme", scheme, "small|big|auto|grouped");
  table->add_option("--g", g, "group count for the grouped scheme")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("rate-sweep", "CSV of N and rates for T = 1..t-max");
  sweep->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  sweep->add_option("--l", l)->required()->check(CLI::PositiveNumber);
  sweep->add_option("--t-max", t_max)->required()->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_path, "output file, '-' for stdout");

  auto* gsweep = app.add_subcommand("grouped-sweep", "CSV of N and rate for G = 1..K");
  gsweep->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  gsweep->add_option("--out", out_path, "output file, '-' for stdout");

  auto* opt = app.add_subcommand("optimize", "best (K, L) for N servers and T colluders");
  opt->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  opt->add_option("--t", t)->required()->check(CLI::PositiveNumber);

  auto* demo = app.add_subcommand("demo", "run an end-to-end simulated multiplication");
  demo->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  demo->add_option("--l", l)->required()->check(CLI::PositiveNumber);
  demo->add_option("--t", t)->required()->check(CLI::PositiveNumber);
  demo->add_option("--p", modulus, "prime modulus (default: chosen from the code)");
  demo->add_option("--seed", seed);
  demo->add_option("--r", r, "rows of A (default K)");
  demo->add_option("--s", s, "inner dimension (default 1)");
  demo->add_option("--tcols", tcols, "columns of B (default L)");
  demo->add_option("--scheme", scheme, "small|big|auto|grouped");
  demo->add_option("--g", g, "group count for the grouped scheme");
  demo->add_option("--points", points, "comma-separated evaluation points");

  auto* audit = app.add_subcommand("audit", "check the privacy conditions of a plan");
  audit->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  audit->add_option("--l", l)->required()->check(CLI::PositiveNumber);
  audit->add_option("--t", t)->required()->check(CLI::PositiveNumber);
  audit->add_option("--p", modulus, "prime modulus (default: chosen from the code)");
  audit->add_option("--seed", seed);
  audit->add_option("--scheme", scheme, "small|big|auto|grouped");
  audit->add_option("--g", g, "group count for the grouped scheme");
  audit->add_option("--points", points, "comma-separated evaluation points (not verified)");
  audit->add_flag("--exhaustive", exhaustive, "also enumerate every mask and secret");
  audit->add_flag("--zero-masks", zero_masks, "replace masks by zero in the exhaustive audit");
  audit->add_flag("--reflect", reflected, "use the degree-reversed assignment");
  audit->add_option("--budget", budget, "step budget for --exhaustive");

  // CLI11 takes the arguments (without the program name) in reverse.
  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (table->parsed()) {
      const SchemeKind kind = parse_scheme(scheme);
      if (kind == SchemeKind::grouped) {
        if (k != l || l != t) throw UsageError("--scheme grouped requires k = l = t");
        if (g < 1 || g > k) throw UsageError("--scheme grouped requires 1 <= --g <= k");
      } else if (table->count("--g")) {
        throw UsageError("--g is only valid with --scheme grouped");
      }
      const PolynomialCode code = build_code(SchemeParams(k, l, t), kind, g);
      out << "scheme=" << code.label() << " K=" << k << " L=" << l << " T=" << t << '\n';
      out << render_table(code);
      return kOk;
    }

    if (sweep->parsed()) {
      return detail::with_output(out_path, out, err, [&](std::ostream& os) {
        os << "T,n_small,n_big,n_gasp,rate_gasp,rate_r1,rate_r2\n";
        for (std::size_t tt = 1; tt <= t_max; ++tt) {
          const RateReport rep = rate_report(SchemeParams(k, l, tt));
          os << tt << ',' << rep.n_small << ',' << rep.n_big << ',' << rep.n_gasp << ','
             << format_rate(rep.rate_gasp) << ','
             << (rep.rate_r1 ? format_rate(*rep.rate_r1) : std::string()) << ','
             << format_rate(rep.rate_r2) << '\n';
        }
      });
    }

    if (gsweep->parsed()) {
      const auto rows = grouped_sweep(k);
      return detail::with_output(out_path, out, err, [&](std::ostream& os) {
        os << "G,N,rate\n";
        for (const auto& row : rows) os << row.G << ',' << row.N << ',' << format_rate(row.rate) << '\n';
      });
    }

    if (opt->parsed()) {
      if (n < 2 * t + 1) {
        err << "error: infeasible, need n >= 2t+1 = " << 2 * t + 1 << '\n';
        return kFailure;
      }
      const auto best = optimize_gasp(n, t);
      const auto kakar = kakar_heuristic(n, t);
      if (!best) {
        err << "error: no feasible (K, L) for n=" << n << " t=" << t << '\n';
        return kFailure;
      }
      out << "gasp K=" << best->K << " L=" << best->L << " n_used=" << best->n_used
          << " rate=" << format_rate(best->rate) << '\n';
      if (kakar) {
        out << "kakar K=" << kakar->K << " L=" << kakar->L << " n_used=" << kakar->n_used
            << " rate=" << format_rate(kakar->rate) << '\n';
      } else {
        out << "kakar none\n";
      }
      return kOk;
    }

    if (demo->parsed()) {
      const SchemeParams params(k, l, t);
      const BlockShapes shapes{r ? r : k, s ? s : 1, tcols ? tcols : l};
      if (shapes.r % k != 0 || shapes.t % l != 0) {
        throw UsageError("--r must be a multiple of --k and --tcols a multiple of --l");
      }
      SessionOptions so;
      so.modulus = modulus;
      so.seed = seed;
      so.groups = g;
      if (!points.empty()) so.points = detail::parse_points(points);
      const SessionTranscript tr = run_sdmm(params, parse_scheme(scheme), shapes, so);
      out << transcript_summary(tr) << "AB verified\n";
      return kOk;
    }

    if (audit->parsed()) {
      const SchemeParams params(k, l, t);
      PolynomialCode code = build_code(params, parse_scheme(scheme), g);
      if (reflected) code = make_code(params, reflect(code.assignment), SchemeKind::custom);
      const PrimeField field = modulus ? PrimeField(*modulus) : default_field(code);
      const EvaluationPlan plan = [&] {
        if (points.empty()) return find_evaluation_plan(code, field, {seed, 1000, MdsMode::full()});
        auto pts = detail::parse_points(points);
        if (pts.size() != code.n_servers) {
          throw UsageError("--points needs exactly N=" + std::to_string(code.n_servers) + " values");
        }
        return EvaluationPlan{field, std::move(pts), terms(outer_sum(code.assignment, params))};
      }();
      const MdsAuditReport rep = mds_audit(code, plan);
      out << "scheme=" << code.label() << "\nN=" << code.n_servers << '\n'
          << serialize_plan(plan) << "gv_det_nonzero=" << detail::yes_no(rep.gv_det_nonzero)
          << "\np_mds=" << detail::yes_no(rep.p_mds) << "\nq_mds=" << detail::yes_no(rep.q_mds)
          << '\n';
      bool ok = rep.all();
      if (exhaustive) {
        PrivacyAuditOptions po;
        po.zero_masks = zero_masks;
        po.budget = budget;
        const PrivacyAuditResult pr = exhaustive_privacy_audit(code, plan, po);
        out << "exhaustive=" << (pr.passed ? "pass" : "fail") << "\nsubsets_checked="
            << pr.subsets_checked << '\n';
        ok = ok && pr.passed;
      }
      out << (ok ? "audit passed" : "audit FAILED") << '\n';
      return ok ? kOk : kFailure;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace gasp::cli
