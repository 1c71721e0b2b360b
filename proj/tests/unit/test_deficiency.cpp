#include "doctest.h"

#include "sqz/deficiency.hpp"

#include <cmath>

using namespace sqz;
using namespace sqz::deficiency;
using R50 = mp_float<50>;
using R100 = mp_float<100>;

TEST_CASE("solve_recurrence hand values, k = 3") {
    auto s = solve_recurrence<R50>(3, 0, Branch::plus, 2);
    CHECK(s.gauge == Gauge::k3_d);
    CHECK(s.d[0] == 1);
    CHECK(to_double(abs(s.d[1] - 1 / sqrt(R50(6)))) < 1e-48);
    CHECK(to_double(abs(s.d[2] - 7 / (12 * sqrt(R50(5))))) < 1e-48);
}

TEST_CASE("zero initial data gives the zero solution") {
    for (int k = 1; k <= 4; ++k)
        for (int i = 0; i < k; ++i)
            for (auto b : {Branch::plus, Branch::minus}) {
                auto s = solve_recurrence<double>(k, i, b, 50, 0.0);
                for (double v : s.d) CHECK(v == 0.0);
            }
}

TEST_CASE("k = 2 gauge value at p = 1") {
    auto sp = solve_recurrence<R50>(2, 0, Branch::plus, 1);
    auto sm = solve_recurrence<R50>(2, 0, Branch::minus, 1);
    // c_1 = +-(i/2)/sqrt(1/2)
    const R50 expect = R50(1) / 2 / sqrt(R50(1) / 2);
    CHECK(to_double(abs(sp.entries[1] - std::complex<R50>(0, expect))) < 1e-48);
    CHECK(to_double(abs(sm.entries[1] - std::complex<R50>(0, -expect))) < 1e-48);
}

TEST_CASE("partial sums satisfy S_P = beta_{P+1} d_P d_{P+1}") {
    for (int k = 1; k <= 5; ++k)
        for (int i = 0; i < k; ++i) {
            auto s = solve_recurrence<R50>(k, i, Branch::plus, 300);
            for (int P : {1, 7, 120, 299}) {
                R50 rhs = fock::beta_value<R50>(k, i, P + 1) * s.d[P] * s.d[P + 1];
                CHECK(to_double(abs(s.partial_sums[P] / rhs - 1)) < 1e-44);
            }
        }
}

TEST_CASE("raw gauge moduli equal reduced gauge") {
    for (int k = 1; k <= 4; ++k)
        for (int i = 0; i < k; ++i)
            for (const char* th : {"0", "0.3", "1.7"}) {
                auto red = solve_recurrence<R50>(k, i, Branch::minus, 200);
                auto raw = solve_raw<R50>(k, i, Branch::minus, R50(th), 200);
                for (int p = 0; p <= 200; ++p)
                    REQUIRE(to_double(abs(abs(raw.entries[p]) / abs(red.d[p]) - 1)) < 1e-44);
            }
}

TEST_CASE("alternation law against independent minus solve") {
    for (int k = 3; k <= 5; ++k)
        for (int i = 0; i < k; ++i) {
            auto plus = solve_recurrence<R50>(k, i, Branch::plus, 200);
            auto minus = solve_recurrence<R50>(k, i, Branch::minus, 200);
            auto alt = alternate(plus);
            for (int p = 0; p <= 200; ++p) REQUIRE(minus.d[p] == alt.d[p]);
            CHECK(minus.d[7] == -plus.d[7]);
        }
}

TEST_CASE("k = 1 entries are normalized Hermite values, independent route") {
    // h_p = i^p H_p(x) / sqrt(2^p p!) with the physicists' recurrence
    const int P = 120;
    auto s = solve_recurrence<R100>(1, 0, Branch::plus, P);
    const std::complex<R100> x(R100(0), -1 / sqrt(R100(2)));
    auto H = orthopoly::hermite_physicists_sequence<R100>(P, x);
    R100 norm(1);
    std::complex<R100> ip(1);
    for (int p = 0; p <= P; ++p) {
        if (p > 0) {
            norm *= 2 * p;
            ip *= std::complex<R100>(0, 1);
        }
        std::complex<R100> h = ip * H[p] / sqrt(norm);
        REQUIRE(to_double(abs(h - s.entries[p]) / abs(h)) < 1e-90);
    }
}

TEST_CASE("k = 1, 2 oracle identification") {
    for (int k : {1, 2})
        for (int i = 0; i < k; ++i)
            for (auto b : {Branch::plus, Branch::minus}) {
                auto s = solve_recurrence<R50>(k, i, b, 500);
                auto m = match_polynomial_oracle(s, R50("1e-40"));
                CHECK(m.checked);
                CHECK(m.identified);
                CHECK(m.max_relative_error < 1e-44);
                // + pairs with -i/sqrt(2) for k = 1 and with +i/4 for k = 2
                const bool minus_point = (b == Branch::plus) == (k == 1);
                CHECK(m.point.substr(0, 1) == (minus_point ? "-" : "+"));
            }
}

TEST_CASE("printed alpha-product series value") {
    // sum_{r>=0} sqrt(0!/(3r+3)!), summed in double with lgamma
    double ref = 0;
    for (int r = 0; r < 40; ++r) ref += std::exp(-0.5 * std::lgamma(3.0 * r + 4.0));
    auto s = solve_recurrence<R50>(3, 0, Branch::plus, 20);
    auto diag = printed_chain_check(s);
    CHECK(diag.evaluated);
    CHECK(diag.series_value == doctest::Approx(ref).epsilon(1e-14));
    CHECK(diag.series_value == doctest::Approx(0.4472227).epsilon(1e-6));
    // the right side is (d_2 - d_0) * positive < 0, so the printed chain cannot hold
    CHECK(!diag.signed_chain_holds);
    CHECK(diag.signed_first_violation == 0);
}

TEST_CASE("k >= 3 tail bound dominates the actual tail") {
    for (int k = 3; k <= 5; ++k)
        for (int i = 0; i < k; ++i) {
            const int P = 300;
            auto s = solve_recurrence<R50>(k, i, Branch::plus, P);
            auto c = classify_summability(s);
            REQUIRE(c.verdict == Verdict::convergent);
            CHECK(c.certificate == "tail-bound");
            // compare with the sum out to 40 P
            auto far = solve_recurrence<R50>(k, i, Branch::plus, 40 * P);
            double actual = to_double(far.partial_sums.back() - far.partial_sums[P]);
            CHECK(actual > 0);
            CHECK(actual <= c.tail_bound);
        }
}

TEST_CASE("k <= 2 divergence certificates and growth") {
    for (int k : {1, 2})
        for (int i = 0; i < k; ++i) {
            auto s = solve_recurrence<double>(k, i, Branch::plus, 10000);
            auto c = classify_summability(s);
            CHECK(c.verdict == Verdict::divergent);
            CHECK(c.certificate == "harmonic-minorant");
            CHECK(s.partial_sums[100] < s.partial_sums[1000]);
            CHECK(s.partial_sums[1000] < s.partial_sums[10000]);
        }
    // k = 2: d_p ~ p^{-1/4}, so S_P grows like sqrt(P)
    auto s2 = solve_recurrence<double>(2, 0, Branch::plus, 10000);
    double g1 = s2.partial_sums[1000] - s2.partial_sums[100];
    double g2 = s2.partial_sums[10000] - s2.partial_sums[1000];
    CHECK(g2 / g1 == doctest::Approx(std::sqrt(10.0)).epsilon(0.02));
}

TEST_CASE("verify_structure examples") {
    for (auto [k, i] : {std::pair{3, 0}, std::pair{4, 2}}) {
        auto plus = solve_recurrence<R100>(k, i, Branch::plus, 100);
        auto minus = solve_recurrence<R100>(k, i, Branch::minus, 100);
        auto r = verify_structure(plus, minus, R100("1e-90"));
        CHECK(r.positivity);
        CHECK(r.gap_bound);
        CHECK(r.two_step_decrease);
        CHECK(r.alternation);
        CHECK(r.max_alternation_error == 0.0);
    }
    auto plus = solve_recurrence<R50>(3, 0, Branch::plus, 10);
    CHECK_THROWS(verify_structure(plus, plus, R50("1e-40")));
}

TEST_CASE("appendix inequality examples") {
    // k=3, p=1: sqrt(6)/sqrt(120) + 1/sqrt(120) - 1 < 0
    double lhs = std::sqrt(6.0 / 120) + std::sqrt(1.0 / 120) - 1;
    CHECK(lhs == doctest::Approx(0.2236068 + 0.0912871 - 1).epsilon(1e-6));
    CHECK(appendix_a_holds(3, 0, 1));
    CHECK(!appendix_a_holds(1, 0, 1));
    CHECK(appendix_a_holds(2, 0, 1));
    CHECK(appendix_a_holds(2, 1, 1));
    CHECK(appendix_b_holds(3, 0, 2));
    CHECK_THROWS(appendix_a_holds(3, 0, 0));
}

TEST_CASE("appendix inequality ranges") {
    auto rows = verify_appendix_inequalities(1, 8, 300);
    for (const auto& r : rows) {
        CHECK(r.b_holds);
        if (r.k >= 3) CHECK(r.a_holds);
        if (r.k == 1) {
            CHECK(!r.a_holds);
            CHECK(r.a_first_violation == 1);
        }
        if (r.k == 2) CHECK(r.a_holds);
    }
    // double-precision cross-check of (A) for small k, p
    for (int k = 1; k <= 5; ++k)
        for (int i = 0; i < k; ++i)
            for (int p = 1; p <= 60; ++p) {
                double b0 = std::sqrt(fock::beta_squared(k, i, p).convert_to<double>());
                double b1 = std::sqrt(fock::beta_squared(k, i, p + 1).convert_to<double>());
                double v = b0 / b1 + 1 / b1 - 1;
                if (std::fabs(v) > 1e-12) CHECK((v < 0) == appendix_a_holds(k, i, p));
            }
}

TEST_CASE("deficiency indices") {
    PrecisionConfig cfg(50);
    auto r1 = deficiency_indices(1, 300, cfg);
    CHECK(r1.decided);
    CHECK(r1.n_plus == 0);
    CHECK(r1.essential_selfadjoint);
    auto r2 = deficiency_indices(2, 300, cfg);
    CHECK(r2.decided);
    CHECK(r2.n_plus == 0);
    auto r3 = deficiency_indices(3, 300, cfg);
    CHECK(r3.decided);
    CHECK(r3.n_plus == 3);
    CHECK(r3.n_minus == 3);
    CHECK(!r3.essential_selfadjoint);
    for (const auto& b : r3.blocks) {
        CHECK(b.minus_by_alternation);
        CHECK(b.branches_agree);
    }
    CHECK_THROWS(deficiency_indices(0, 100, cfg));
}
