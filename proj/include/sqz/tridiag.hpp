#pragma once

#include "sqz/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sqz::linalg {

template <class Real>
struct TridiagonalEigen {
    std::vector<Real> values;  // ascending
    Matrix<Real> vectors;      // vectors(r, j): component rows[r] of eigenvector j
    std::vector<int> rows;
    bool converged = false;
    int iterations = 0;
};

namespace detail {

template <class Real>
Real pythag(const Real& a, const Real& b) {
    using std::abs;
    using std::sqrt;
    Real aa = abs(a), ab = abs(b);
    if (aa > ab) {
        Real r = ab / aa;
        return aa * sqrt(1 + r * r);
    }
    if (ab == 0) return Real(0);
    Real r = aa / ab;
    return ab * sqrt(1 + r * r);
}

}  // namespace detail

// Implicit QL with Wilkinson-type shifts on the symmetric tridiagonal matrix
// (diag, off), off[j] coupling j and j+1. Only the eigenvector components listed
// in `rows` are accumulated, so the cost is O(N^2 (1 + rows.size())).
template <class Real>
TridiagonalEigen<Real> tridiagonal_eigen(const std::vector<Real>& diag, const std::vector<Real>& off,
                                         const std::vector<int>& rows, int max_iter = 60) {
    using std::abs;
    const int n = static_cast<int>(diag.size());
    if (n == 0) throw std::invalid_argument("tridiagonal_eigen: empty matrix");
    if (static_cast<int>(off.size()) != n - 1) throw std::invalid_argument("tridiagonal_eigen: off size must be n-1");
    for (int r : rows)
        if (r < 0 || r >= n) throw std::invalid_argument("tridiagonal_eigen: row out of range");

    TridiagonalEigen<Real> out;
    out.rows = rows;
    std::vector<Real> d = diag;
    std::vector<Real> e(static_cast<std::size_t>(n), Real(0));
    for (int j = 0; j + 1 < n; ++j) e[j] = off[j];
    const int nr = static_cast<int>(rows.size());
    Matrix<Real> z(static_cast<std::size_t>(nr), static_cast<std::size_t>(n));
    for (int r = 0; r < nr; ++r) z(r, rows[r]) = Real(1);

    const Real eps = std::numeric_limits<Real>::epsilon();
    out.converged = true;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                Real dd = abs(d[m]) + abs(d[m + 1]);
                if (abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iter) {
                    out.converged = false;
                    break;
                }
                ++out.iterations;
                Real g = (d[l + 1] - d[l]) / (2 * e[l]);
                Real r = detail::pythag(g, Real(1));
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? abs(r) : Real(-abs(r))));
                Real s(1), c(1), p(0);
                int i;
                bool underflow = false;
                for (i = m - 1; i >= l; --i) {
                    Real f = s * e[i];
                    Real b = c * e[i];
                    r = detail::pythag(f, g);
                    e[i + 1] = r;
                    if (r == 0) {
                        d[i + 1] -= p;
                        e[m] = 0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < nr; ++k) {
                        Real* zr = z.row(k);
                        Real t = zr[i + 1];
                        zr[i + 1] = s * zr[i] + c * t;
                        zr[i] = c * zr[i] - s * t;
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0;
            }
        } while (m != l);
        if (!out.converged) break;
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors = Matrix<Real>(static_cast<std::size_t>(nr), static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        for (int r = 0; r < nr; ++r) out.vectors(r, j) = z(r, order[j]);
    }
    return out;
}

template <class Real>
std::vector<int> all_rows(int n) {
    std::vector<int> r(static_cast<std::size_t>(n));
    std::iota(r.begin(), r.end(), 0);
    return r;
}

// Gauss rule from a Jacobi matrix (Golub-Welsch): nodes = eigenvalues,
// weights = mu0 * (first eigenvector component)^2.
template <class Real>
struct GaussRule {
    std::vector<Real> nodes, weights;
};

template <class Real>
GaussRule<Real> golub_welsch(const std::vector<Real>& diag, const std::vector<Real>& off, const Real& mu0) {
    auto eig = tridiagonal_eigen<Real>(diag, off, {0}, 200);
    if (!eig.converged) throw std::runtime_error("golub_welsch: eigensolver did not converge");
    GaussRule<Real> g;
    g.nodes = eig.values;
    g.weights.resize(eig.values.size());
    for (std::size_t j = 0; j < eig.values.size(); ++j) g.weights[j] = mu0 * eig.vectors(0, j) * eig.vectors(0, j);
    return g;
}

// Generalized Gauss-Laguerre: weight s^alpha e^{-s} on (0, inf).
template <class Real>
GaussRule<Real> gauss_laguerre(int n, const Real& alpha, const Real& gamma_alpha_plus_1) {
    using std::sqrt;
    std::vector<Real> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int j = 0; j < n; ++j) a[j] = Real(2 * j + 1) + alpha;
    for (int j = 1; j < n; ++j) b[j - 1] = sqrt(Real(j) * (Real(j) + alpha));
    return golub_welsch<Real>(a, b, gamma_alpha_plus_1);
}

// Gauss-Legendre on [-1, 1].
template <class Real>
GaussRule<Real> gauss_legendre(int n) {
    using std::sqrt;
    std::vector<Real> a(static_cast<std::size_t>(n), Real(0)), b(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int j = 1; j < n; ++j) b[j - 1] = Real(j) / sqrt(Real(4) * j * j - 1);
    return golub_welsch<Real>(a, b, Real(2));
}

}  // namespace sqz::linalg
