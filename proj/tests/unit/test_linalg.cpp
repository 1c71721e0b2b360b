#include "doctest.h"

#include "sqz/kernels.hpp"
#include "sqz/precision.hpp"
#include "sqz/tridiag.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <random>

using namespace sqz;
using namespace sqz::linalg;

TEST_CASE("free Jacobi matrix eigenvalues are 2 cos(j pi/(n+1))") {
    for (int n : {1, 2, 7, 40}) {
        std::vector<double> d(n, 0.0), e(n - 1, 1.0);
        auto eig = tridiagonal_eigen<double>(d, e, all_rows<double>(n));
        REQUIRE(eig.converged);
        for (int j = 0; j < n; ++j) {
            double expect = 2 * std::cos((n - j) * M_PI / (n + 1));
            CHECK(eig.values[j] == doctest::Approx(expect).epsilon(1e-13).scale(1));
        }
    }
}

TEST_CASE("eigenvectors: orthogonality and A v = lambda v") {
    const int n = 30;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> d(n), e(n - 1);
    for (auto& x : d) x = u(rng);
    for (auto& x : e) x = u(rng);
    auto eig = tridiagonal_eigen<double>(d, e, all_rows<double>(n));
    REQUIRE(eig.converged);
    for (int j = 0; j < n; ++j) {
        for (int r = 0; r < n; ++r) {
            double av = d[r] * eig.vectors(r, j);
            if (r > 0) av += e[r - 1] * eig.vectors(r - 1, j);
            if (r + 1 < n) av += e[r] * eig.vectors(r + 1, j);
            CHECK(std::fabs(av - eig.values[j] * eig.vectors(r, j)) < 1e-13);
        }
        for (int m = 0; m < n; ++m) {
            double s = 0;
            for (int r = 0; r < n; ++r) s += eig.vectors(r, j) * eig.vectors(r, m);
            CHECK(std::fabs(s - (j == m ? 1.0 : 0.0)) < 1e-13);
        }
    }
    // a row subset reproduces the same rows of the full accumulation
    auto sub = tridiagonal_eigen<double>(d, e, {3, 17});
    for (int j = 0; j < n; ++j) {
        CHECK(sub.vectors(0, j) == eig.vectors(3, j));
        CHECK(sub.vectors(1, j) == eig.vectors(17, j));
    }
    CHECK_THROWS(tridiagonal_eigen<double>(d, e, {n}));
    CHECK_THROWS(tridiagonal_eigen<double>(d, d, {0}));
}

TEST_CASE("iteration cap reports non-convergence") {
    std::vector<double> d(10, 0.0), e(9, 1.0);
    auto eig = tridiagonal_eigen<double>(d, e, {0}, 0);
    CHECK(!eig.converged);
}

TEST_CASE("Gauss rules integrate polynomials exactly") {
    auto gl = gauss_legendre<double>(6);
    double s = 0;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) s += gl.weights[j] * std::pow(gl.nodes[j], 10);
    CHECK(s == doctest::Approx(2.0 / 11).epsilon(1e-14));

    using R = mp_float<50>;
    const R alpha("0.5");
    auto lag = gauss_laguerre<R>(8, alpha, boost::math::tgamma(alpha + 1));
    R m(0);
    for (std::size_t j = 0; j < lag.nodes.size(); ++j) m += lag.weights[j] * pow(lag.nodes[j], 7);
    CHECK(to_double(abs(m / boost::math::tgamma(alpha + 8) - 1)) < 1e-40);
}

TEST_CASE("serial and OpenMP kernels agree") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    CMatrix<double> a(37, 29), b(29, 41);
    for (auto& z : a.data()) z = {u(rng), u(rng)};
    for (auto& z : b.data()) z = {u(rng), u(rng)};
    CHECK(kernels::serial::matmul(a, b).data() == kernels::omp::matmul(a, b).data());
    // against the naive triple loop
    auto c = kernels::serial::matmul(a, b);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t q = 0; q < b.cols(); ++q) {
            std::complex<double> s;
            for (std::size_t m = 0; m < a.cols(); ++m) s += a(r, m) * b(m, q);
            CHECK(std::abs(s - c(r, q)) < 1e-13);
        }

    Matrix<double> V(9, 23);
    for (auto& x : V.data()) x = u(rng);
    std::vector<std::complex<double>> ph(23);
    for (auto& z : ph) z = std::polar(1.0, u(rng));
    CHECK(kernels::serial::reconstruct(V, ph).data() == kernels::omp::reconstruct(V, ph).data());

    std::vector<double> bb(99), x(100);
    for (auto& v : bb) v = u(rng);
    for (auto& v : x) v = u(rng);
    CHECK(kernels::serial::jacobi_matvec(bb, x) == kernels::omp::jacobi_matvec(bb, x));

    std::vector<double> w(1000), f(1000);
    for (auto& v : w) v = u(rng);
    for (auto& v : f) v = u(rng);
    double s1 = kernels::serial::weighted_sum(w, f), s2 = kernels::omp::weighted_sum(w, f);
    CHECK(std::fabs(s1 - s2) <= 1e-13 * std::fabs(s1) + 1e-15);
    CHECK_THROWS(kernels::omp::matmul(a, a));
}
