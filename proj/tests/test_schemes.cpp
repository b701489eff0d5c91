#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gasp/degree_table.hpp"
#include "gasp/schemes.hpp"

namespace gasp {
namespace {

std::vector<Exponent> tail(const std::vector<Exponent>& v, std::size_t from) {
  return {v.begin() + static_cast<std::ptrdiff_t>(from), v.end()};
}

TEST(GaspBig, Examples) {
  const ExponentAssignment a = gasp_big({3, 3, 2});
  EXPECT_EQ(a.alpha, (std::vector<Exponent>{0, 1, 2, 9, 10}));
  EXPECT_EQ(a.beta, (std::vector<Exponent>{0, 3, 6, 9, 10}));

  const ExponentAssignment b = gasp_big({4, 4, 4});
  EXPECT_EQ(tail(b.alpha, 4), (std::vector<Exponent>{16, 17, 18, 19}));
  EXPECT_EQ(tail(b.beta, 4), (std::vector<Exponent>{16, 17, 18, 19}));

  const ExponentAssignment c = gasp_big({1, 1, 1});
  EXPECT_EQ(c.alpha, (std::vector<Exponent>{0, 1}));
  EXPECT_EQ(c.beta, (std::vector<Exponent>{0, 1}));
}

TEST(GaspBig, KLessThanLSwapsRoles) {
  const ExponentAssignment a = gasp_big({2, 3, 1});
  // The (3, 2) construction with alpha and beta exchanged.
  EXPECT_EQ(a.alpha, (std::vector<Exponent>{0, 3, 6}));
  EXPECT_EQ(a.beta, (std::vector<Exponent>{0, 1, 2, 6}));
}

TEST(GaspSmall, Examples) {
  const ExponentAssignment a = gasp_small({3, 3, 2});
  EXPECT_EQ(a.alpha, (std::vector<Exponent>{0, 1, 2, 9, 12}));
  EXPECT_EQ(a.beta, (std::vector<Exponent>{0, 3, 6, 9, 10}));

  EXPECT_EQ(tail(gasp_small({4, 4, 4}).alpha, 4), (std::vector<Exponent>{16, 20, 24, 28}));

  const ExponentAssignment c = gasp_small({1, 1, 1});
  EXPECT_EQ(c.alpha, (std::vector<Exponent>{0, 1}));
  EXPECT_EQ(c.beta, (std::vector<Exponent>{0, 1}));
}

TEST(GaspAuto, Examples) {
  const PolynomialCode a = gasp_auto({3, 3, 2});
  EXPECT_EQ(a.scheme, SchemeKind::small);
  EXPECT_EQ(a.n_servers, 18u);
  EXPECT_EQ(download_rate(a.params, 18), Rational(1, 2));

  const PolynomialCode b = gasp_auto({20, 20, 25});
  EXPECT_EQ(b.scheme, SchemeKind::big);
  EXPECT_EQ(b.n_servers, 849u);

  const PolynomialCode c = gasp_auto({1, 1, 5});
  EXPECT_EQ(c.scheme, SchemeKind::big);
  EXPECT_EQ(c.n_servers, 11u);
}

TEST(GaspGrouped, NoteExamples) {
  EXPECT_EQ(tail(gasp_grouped(8, 4).alpha, 8),
            (std::vector<Exponent>{64, 65, 72, 73, 80, 81, 88, 89}));
  EXPECT_EQ(tail(gasp_grouped(9, 4).alpha, 9),
            (std::vector<Exponent>{81, 82, 90, 91, 99, 100, 108, 109, 117}));
  EXPECT_EQ(gasp_grouped(4, 1), gasp_big({4, 4, 4}));
  EXPECT_EQ(tail(gasp_grouped(4, 2).alpha, 4), (std::vector<Exponent>{16, 17, 20, 21}));
}

TEST(GaspGrouped, RejectsBadG) {
  EXPECT_THROW(gasp_grouped(4, 0), ParameterError);
  EXPECT_THROW(gasp_grouped(4, 5), ParameterError);
  EXPECT_THROW(build_code({4, 4, 3}, SchemeKind::grouped, 2), ParameterError);
}

TEST(GroupedSpec, EuclideanDivision) {
  const GroupedSpec s(9, 4);
  EXPECT_EQ(s.Q, 2u);
  EXPECT_EQ(s.R, 1u);
  EXPECT_EQ(s.K, s.Q * s.G + s.R);
}

TEST(ClosedForms, Examples) {
  EXPECT_EQ(n_big_closed({3, 3, 2}), 19);
  EXPECT_EQ(n_big_closed({4, 4, 4}), 39);
  EXPECT_EQ(n_big_closed({6, 6, 6}), 83);
  EXPECT_EQ(n_small_closed({3, 3, 2}), 18);
  EXPECT_EQ(n_small_closed({4, 4, 4}), 41);
  EXPECT_EQ(n_small_closed({9, 9, 9}), 186);
}

TEST(ClosedForms, FloorOfNegativeQuotient) {
  // K = 1, T = 1 hits floor((T-2)/K) = floor(-1) = -1.
  const SchemeParams p{1, 4, 1};
  EXPECT_EQ(n_small_closed(p), static_cast<std::int64_t>(count_terms(gasp_small(p), p)));
  EXPECT_EQ(floor_div(-1, 3), -1);
  EXPECT_EQ(floor_div(-3, 3), -1);
  EXPECT_EQ(floor_div(4, 3), 1);
}

TEST(Rates, Examples) {
  EXPECT_EQ(format_rate(download_rate({9, 9, 1}, 148)), "0.547");
  EXPECT_EQ(format_rate(download_rate({6, 6, 1}, 73)), "0.493");
  EXPECT_EQ(download_rate({1, 1, 1}, 1), Rational(1));
  EXPECT_EQ(format_rate(Rational(1)), "1.000");
  EXPECT_EQ(format_rate(Rational(36, 83)), "0.434");
  EXPECT_EQ(format_rate(Rational(1, 2000)), "0.001");  // half rounds up
  EXPECT_EQ(format_rate(Rational(1, 2001)), "0.000");
  EXPECT_THROW(download_rate({1, 1, 1}, 0), ParameterError);

  EXPECT_EQ(rate_r1(3, 2), Rational(9, 25));
  EXPECT_EQ(rate_r2({3, 3, 2}), Rational(9, 19));
  EXPECT_EQ(rate_r2({1, 1, 1}), Rational(1, 3));
}

TEST(RateReport, AutoRuleNotMinimum) {
  const RateReport r = rate_report({3, 3, 2});
  EXPECT_EQ(r.n_small, 18);
  EXPECT_EQ(r.n_big, 19);
  EXPECT_EQ(r.n_gasp, 18);
  ASSERT_TRUE(r.rate_r1.has_value());
  EXPECT_EQ(format_rate(*r.rate_r1), "0.360");
  EXPECT_EQ(format_rate(r.rate_r2), "0.474");

  EXPECT_FALSE(rate_report({2, 3, 1}).rate_r1.has_value());

  // The rule picks big once T >= min(K, L), even where small is smaller.
  for (std::size_t K = 1; K <= 8; ++K) {
    for (std::size_t L = 1; L <= 8; ++L) {
      for (std::size_t T = 1; T <= 10; ++T) {
        const RateReport rr = rate_report({K, L, T});
        EXPECT_EQ(rr.n_gasp, T < std::min(K, L) ? rr.n_small : rr.n_big);
      }
    }
  }
}

TEST(Kakar, Examples) {
  const auto a = kakar_heuristic(50, 5);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->L, 2u);
  EXPECT_EQ(a->K, 12u);
  EXPECT_EQ(a->n_used, 50);
  EXPECT_EQ(format_rate(a->rate), "0.480");

  const auto b = kakar_heuristic(50, 24);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->K, 1u);
  EXPECT_EQ(b->L, 1u);

  const auto c = kakar_heuristic(3, 1);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->K, 1u);
  EXPECT_EQ(c->L, 1u);

  EXPECT_FALSE(kakar_heuristic(4, 2));
}

// Floating-point evaluation of the published formula, used only as an
// oracle for the exact integer version.
std::pair<long, long> kakar_float(double N, double T) {
  const long L = std::max(1L, static_cast<long>(std::ceil(-1.5 + std::sqrt(0.25 + N / T))));
  const long K = static_cast<long>(std::floor((N + 1) / (L + 1) - T));
  return {K, L};
}

TEST(Kakar, AgreesWithFloatingFormula) {
  for (std::size_t N = 3; N <= 200; ++N) {
    for (std::size_t T = 1; 2 * T + 1 <= N; ++T) {
      const auto exact = kakar_heuristic(N, T);
      const auto [K, L] = kakar_float(static_cast<double>(N), static_cast<double>(T));
      ASSERT_TRUE(exact);
      EXPECT_EQ(static_cast<long>(exact->K), K) << N << ' ' << T;
      EXPECT_EQ(static_cast<long>(exact->L), L) << N << ' ' << T;
      EXPECT_LE(exact->n_used, static_cast<std::int64_t>(N));
    }
  }
}

TEST(Optimize, Examples) {
  const auto a = optimize_gasp(50, 1);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->K, 6u);
  EXPECT_EQ(a->L, 6u);
  EXPECT_EQ(a->n_used, 48);
  EXPECT_EQ(a->rate, Rational(3, 4));

  const auto b = optimize_gasp(50, 24);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->K, 1u);
  EXPECT_EQ(b->L, 1u);
  EXPECT_EQ(b->n_used, 49);
  EXPECT_EQ(b->rate, Rational(1, 49));

  const auto c = optimize_gasp(3, 1);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->n_used, 3);
  EXPECT_EQ(c->rate, Rational(1, 3));

  EXPECT_FALSE(optimize_gasp(4, 2));

  // Fixed N = 20, T = 6 prefers the balanced split.
  const auto d = optimize_gasp(20, 6);
  ASSERT_TRUE(d);
  EXPECT_EQ(d->K, 2u);
  EXPECT_EQ(d->L, 2u);
}

TEST(SchemeProperties, ClosedFormsMatchCountsAndTheorems) {
  for (std::size_t K = 1; K <= 12; ++K) {
    for (std::size_t L = 1; L <= 12; ++L) {
      for (std::size_t T = 1; T <= 2 * std::max(K, L) + 3; ++T) {
        const SchemeParams p{K, L, T};
        const auto big = gasp_big(p);
        const auto small = gasp_small(p);
        const auto nb = n_big_closed(p);
        const auto ns = n_small_closed(p);
        ASSERT_EQ(nb, static_cast<std::int64_t>(count_terms(big, p))) << K << ' ' << L << ' ' << T;
        ASSERT_EQ(ns, static_cast<std::int64_t>(count_terms(small, p))) << K << ' ' << L << ' ' << T;
        EXPECT_LE(nb, n_r2(p));
        if (T < std::min(K, L)) {
          EXPECT_LE(ns, nb);
        }
        EXPECT_EQ(nb, n_big_closed({L, K, T}));
        EXPECT_EQ(ns, n_small_closed({L, K, T}));
        EXPECT_TRUE(is_decodable(big, p) && is_t_secure_assignment(big, p));
        EXPECT_TRUE(is_decodable(small, p) && is_t_secure_assignment(small, p));
      }
    }
  }
}

TEST(SchemeProperties, GroupedEndpointsAndValidity) {
  for (std::size_t K = 1; K <= 12; ++K) {
    const SchemeParams p{K, K, K};
    EXPECT_EQ(gasp_grouped(K, 1), gasp_big(p));
    EXPECT_EQ(gasp_grouped(K, K), gasp_small(p));
    for (std::size_t G = 1; G <= K; ++G) {
      const auto a = gasp_grouped(K, G);
      EXPECT_TRUE(is_decodable(a, p)) << K << ' ' << G;
      EXPECT_TRUE(is_t_secure_assignment(a, p)) << K << ' ' << G;
    }
  }
}

TEST(SchemeProperties, OptimizeNeverWorseThanKakar) {
  for (std::size_t N = 3; N <= 60; ++N) {
    for (std::size_t T = 1; T <= (N - 1) / 2; ++T) {
      const auto best = optimize_gasp(N, T);
      const auto kakar = kakar_heuristic(N, T);
      ASSERT_TRUE(best) << N << ' ' << T;
      ASSERT_TRUE(kakar) << N << ' ' << T;
      EXPECT_GE(best->rate, kakar->rate) << N << ' ' << T;
      EXPECT_LE(best->n_used, static_cast<std::int64_t>(N));
    }
  }
}

TEST(GroupedSweep, NoteTables) {
  const auto six = grouped_sweep(6);
  ASSERT_EQ(six.size(), 6u);
  const std::vector<std::size_t> n6{83, 73, 74, 84, 87, 87};
  const std::vector<std::string> r6{"0.434", "0.493", "0.486", "0.429", "0.414", "0.414"};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(six[i].G, i + 1);
    EXPECT_EQ(six[i].N, n6[i]);
    EXPECT_EQ(format_rate(six[i].rate), r6[i]);
  }
  EXPECT_EQ(grouped_sweep(9)[2].N, 148u);
  EXPECT_EQ(format_rate(grouped_sweep(9)[2].rate), "0.547");
  const auto one = grouped_sweep(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].N, 3u);
}

TEST(MakeCode, RejectsInvalidAssignments) {
  EXPECT_THROW(make_code({1, 1, 1}, {{0, 0}, {0, 0}}), ParameterError);
  EXPECT_THROW(make_code({1, 1, 2}, {{0, 5, 5}, {0, 1, 2}}), ParameterError);
  const PolynomialCode c = make_code({3, 3, 2}, gasp_small({3, 3, 2}));
  EXPECT_EQ(c.n_servers, 18u);
  EXPECT_EQ(c.label(), "custom");
}

}  // namespace
}  // namespace gasp
