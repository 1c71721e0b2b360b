#pragma once

// Data-parallel kernels. Each exists as a serial reference and an OpenMP
// version. matmul, reconstruct and jacobi_matvec keep the per-element
// summation order, so the two versions agree bitwise; weighted_sum reduces in
// per-thread chunks and agrees only to rounding.

#include "sqz/matrix.hpp"

#include <omp.h>

#include <complex>
#include <stdexcept>
#include <vector>

namespace sqz::kernels {

namespace detail {

template <class T>
void check_matmul(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
}

template <class T>
void matmul_row(const Matrix<T>& a, const Matrix<T>& b, Matrix<T>& out, std::size_t r) {
    T* o = out.row(r);
    const T* ar = a.row(r);
    for (std::size_t k = 0; k < a.cols(); ++k) {
        const T ark = ar[k];
        if (ark == T(0)) continue;
        const T* bk = b.row(k);
        for (std::size_t c = 0; c < b.cols(); ++c) o[c] += ark * bk[c];
    }
}

// W(r1, r2) = phase(r1, r2) * sum_m V(r1, m) V(r2, m) e^{i tau lambda_m}
template <class Real>
void reconstruct_row(const Matrix<Real>& V, const std::vector<std::complex<Real>>& eig_phase,
                     CMatrix<Real>& out, std::size_t r1) {
    const std::size_t n = V.cols();
    std::vector<std::complex<Real>> tmp(n);
    const Real* v1 = V.row(r1);
    for (std::size_t m = 0; m < n; ++m) tmp[m] = v1[m] * eig_phase[m];
    for (std::size_t r2 = 0; r2 < V.rows(); ++r2) {
        const Real* v2 = V.row(r2);
        std::complex<Real> s(0);
        for (std::size_t m = 0; m < n; ++m) s += tmp[m] * v2[m];
        out(r1, r2) = s;
    }
}

}  // namespace detail

namespace serial {

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
    detail::check_matmul(a, b);
    Matrix<T> out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) detail::matmul_row(a, b, out, r);
    return out;
}

template <class Real>
CMatrix<Real> reconstruct(const Matrix<Real>& V, const std::vector<std::complex<Real>>& eig_phase) {
    CMatrix<Real> out(V.rows(), V.rows());
    for (std::size_t r = 0; r < V.rows(); ++r) detail::reconstruct_row(V, eig_phase, out, r);
    return out;
}

// y_q = b[q] x_{q+1} + b[q-1] x_{q-1}, with b[q] the coupling of q and q+1.
template <class Real>
std::vector<Real> jacobi_matvec(const std::vector<Real>& b, const std::vector<Real>& x) {
    const std::size_t n = x.size();
    if (b.size() + 1 < n) throw std::invalid_argument("jacobi_matvec: coupling vector too short");
    std::vector<Real> y(n);
    for (std::size_t q = 0; q < n; ++q) {
        Real s(0);
        if (q + 1 < n) s += b[q] * x[q + 1];
        if (q > 0) s += b[q - 1] * x[q - 1];
        y[q] = s;
    }
    return y;
}

template <class T, class W>
T weighted_sum(const std::vector<W>& w, const std::vector<T>& f) {
    if (w.size() != f.size()) throw std::invalid_argument("weighted_sum: size mismatch");
    T s(0);
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * f[j];
    return s;
}

}  // namespace serial

namespace omp {

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
    detail::check_matmul(a, b);
    Matrix<T> out(a.rows(), b.cols());
    const long n = static_cast<long>(a.rows());
#pragma omp parallel for schedule(static)
    for (long r = 0; r < n; ++r) detail::matmul_row(a, b, out, static_cast<std::size_t>(r));
    return out;
}

template <class Real>
CMatrix<Real> reconstruct(const Matrix<Real>& V, const std::vector<std::complex<Real>>& eig_phase) {
    CMatrix<Real> out(V.rows(), V.rows());
    const long n = static_cast<long>(V.rows());
#pragma omp parallel for schedule(static)
    for (long r = 0; r < n; ++r) detail::reconstruct_row(V, eig_phase, out, static_cast<std::size_t>(r));
    return out;
}

template <class Real>
std::vector<Real> jacobi_matvec(const std::vector<Real>& b, const std::vector<Real>& x) {
    const long n = static_cast<long>(x.size());
    if (static_cast<long>(b.size()) + 1 < n) throw std::invalid_argument("jacobi_matvec: coupling vector too short");
    std::vector<Real> y(x.size());
#pragma omp parallel for schedule(static)
    for (long q = 0; q < n; ++q) {
        Real s(0);
        if (q + 1 < n) s += b[q] * x[q + 1];
        if (q > 0) s += b[q - 1] * x[q - 1];
        y[q] = s;
    }
    return y;
}

// Per-thread partials combined in thread order: deterministic for a fixed
// thread count.
template <class T, class W>
T weighted_sum(const std::vector<W>& w, const std::vector<T>& f) {
    if (w.size() != f.size()) throw std::invalid_argument("weighted_sum: size mismatch");
    const long n = static_cast<long>(w.size());
    std::vector<T> partial(static_cast<std::size_t>(omp_get_max_threads()), T(0));
#pragma omp parallel
    {
        T s(0);
#pragma omp for schedule(static) nowait
        for (long j = 0; j < n; ++j) s += w[j] * f[j];
        partial[static_cast<std::size_t>(omp_get_thread_num())] = s;
    }
    T total(0);
    for (const T& p : partial) total += p;
    return total;
}

}  // namespace omp

}  // namespace sqz::kernels
