#include "doctest.h"

#include "sqz/orthopoly.hpp"

#include <cmath>

using namespace sqz;
using namespace sqz::orthopoly;
using C = std::complex<double>;

TEST_CASE("Hermite hand values") {
    const C x(0, 1 / std::sqrt(2.0));
    auto h = hermite_normalized_sequence<double>(2, x);
    CHECK(std::abs(h[0] - C(1)) < 1e-15);
    CHECK(std::abs(h[1] - C(-1)) < 1e-15);
    CHECK(std::abs(h[2] - C(std::sqrt(2.0))) < 1e-14);
    // second route: i^2 H_2(x) / sqrt(8), H_2 = 4x^2 - 2
    C h2 = -(4.0 * x * x - 2.0) / std::sqrt(8.0);
    CHECK(std::abs(h2 - h[2]) < 1e-14);
    CHECK(std::abs(hermite_normalized<double>(0, C(3.7, -1)) - C(1)) < 1e-15);
}

TEST_CASE("Meixner-Pollaczek hand values") {
    CHECK(meixner_pollaczek<double>(0.25, 0, C(0.3, 2), false) == C(1));
    CHECK(std::abs(meixner_pollaczek<double>(0.25, 1, C(0, 0.25), false) - C(0, 0.5)) < 1e-15);
    for (double lam : {0.25, 0.75, 1.3}) {
        const C x(0.4, -0.7);
        auto p = meixner_pollaczek_sequence<double>(lam, 1, x, true);
        CHECK(std::abs(p[1] / p[0] - 2.0 * x / std::sqrt(2 * lam)) < 1e-14);
        CHECK(p[0].real() == doctest::Approx(std::sqrt(std::pow(2.0, 2 * lam) / (2 * M_PI * std::tgamma(2 * lam)))));
    }
    CHECK_THROWS(meixner_pollaczek<double>(0.0, 2, C(0, 1), true));
    CHECK_THROWS(meixner_pollaczek<double>(0.5, -1, C(0, 1), true));
}

TEST_CASE("normalized MP equals raw MP times the norm factor") {
    // p_n = P_n sqrt(2^{2l} n! / (2 pi Gamma(n + 2l)))
    for (double lam : {0.25, 0.75}) {
        const C x(0, 0.25);
        auto raw = meixner_pollaczek_sequence<double>(lam, 60, x, false);
        auto nrm = meixner_pollaczek_sequence<double>(lam, 60, x, true);
        for (int n = 0; n <= 60; ++n) {
            double f = std::exp(0.5 * (2 * lam * std::log(2.0) + std::lgamma(n + 1.0) - std::log(2 * M_PI) -
                                       std::lgamma(n + 2 * lam)));
            CHECK(std::abs(raw[n] * f - nrm[n]) <= 1e-12 * std::abs(nrm[n]));
        }
    }
}

TEST_CASE("parity under x -> -x") {
    const C x(0.3, 0.8);
    auto a = hermite_normalized_sequence<double>(40, x);
    auto b = hermite_normalized_sequence<double>(40, -x);
    auto c = meixner_pollaczek_sequence<double>(0.75, 40, x, true);
    auto d = meixner_pollaczek_sequence<double>(0.75, 40, -x, true);
    for (int p = 0; p <= 40; ++p) {
        const double s = p % 2 ? -1 : 1;
        CHECK(std::abs(b[p] - s * a[p]) <= 1e-13 * std::abs(a[p]));
        CHECK(std::abs(d[p] - s * c[p]) <= 1e-13 * std::abs(c[p]));
    }
}

TEST_CASE("determinacy partial sums") {
    PolynomialFamily herm{Kind::hermite_normalized, 0};
    auto s = determinacy_partial_sums<double>(herm, C(0, 1 / std::sqrt(2.0)), 200);
    CHECK(s[0] == 1.0);
    CHECK(s[100] < s[200]);
    for (int p = 1; p <= 200; ++p) CHECK(s[p] > s[p - 1]);
    PolynomialFamily mp{Kind::mp_normalized, 0.75};
    auto m = determinacy_partial_sums<double>(mp, C(0, 0.25), 200);
    CHECK(m[100] < m[200]);
    CHECK_THROWS(determinacy_partial_sums<double>(mp, C(0.5, 0), 10));
}
