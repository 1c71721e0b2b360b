#pragma once

#include "sqz/fock.hpp"
#include "sqz/kernels.hpp"
#include "sqz/tridiag.hpp"

#include <omp.h>

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sqz::expgroup {

enum class Method { eig_tridiagonal, scaling_squaring };
const char* to_string(Method m);

template <class Real>
std::complex<Real> cis(const Real& x) {
    using std::cos;
    using std::sin;
    return {cos(x), sin(x)};
}

// exp(i t |xi| M) on a block (block set) or on the full Fock truncation.
// For a block, N is the block dimension; for the full space, N counts e_0..e_{N-1}.
template <class Real>
struct ExpParams {
    int k = 1;
    std::optional<int> block;
    Real theta{0};
    Real t{0};
    Real xi_abs{1};
    int N = 64;
    Method method = Method::eig_tridiagonal;
    int max_ql_iterations = 60;

    Real tau() const { return t * xi_abs; }
};

template <class Real>
struct TruncatedUnitary {
    int k = 1;
    std::optional<int> block;
    Real theta{0}, t{0}, xi_abs{1};
    int N = 0;
    Method method = Method::eig_tridiagonal;  // method actually used
    bool fell_back = false;
    CMatrix<Real> U;
};

// Eigendecomposition of the gauged real block S (M = D S D*, D = diag(omega^p)),
// keeping the eigenvector components at `rows`.
template <class Real>
class BlockSpectrum {
public:
    BlockSpectrum(int k, int i, const Real& theta, int N, std::vector<int> rows, int max_iter = 60) {
        if (N < 1) throw std::invalid_argument("BlockSpectrum: empty block");
        std::vector<Real> diag(static_cast<std::size_t>(N), Real(0));
        std::vector<Real> off(static_cast<std::size_t>(N - 1));
        for (int p = 0; p + 1 < N; ++p) off[p] = fock::beta_value<Real>(k, i, p + 1);
        eig_ = linalg::tridiagonal_eigen<Real>(diag, off, rows, max_iter);
        const Real shift = theta - pi_as<Real>() / 2;  // omega = e^{i(theta - pi/2)}
        for (int r : eig_.rows) gauge_.push_back(cis<Real>(Real(r) * shift));
    }

    bool converged() const { return eig_.converged; }
    const std::vector<int>& rows() const { return eig_.rows; }
    const std::vector<Real>& eigenvalues() const { return eig_.values; }

    // exp(i tau M) restricted to rows x rows.
    CMatrix<Real> unitary(const Real& tau) const {
        const auto& rows = eig_.rows;
        if (tau == 0) {
            CMatrix<Real> I(rows.size(), rows.size());
            for (std::size_t a = 0; a < rows.size(); ++a)
                for (std::size_t b = 0; b < rows.size(); ++b)
                    if (rows[a] == rows[b]) I(a, b) = Real(1);
            return I;
        }
        std::vector<std::complex<Real>> ph(eig_.values.size());
        for (std::size_t m = 0; m < ph.size(); ++m) ph[m] = cis<Real>(tau * eig_.values[m]);
        CMatrix<Real> W = kernels::omp::reconstruct(eig_.vectors, ph);
        for (std::size_t a = 0; a < W.rows(); ++a)
            for (std::size_t b = 0; b < W.cols(); ++b) W(a, b) *= gauge_[a] * std::conj(gauge_[b]);
        return W;
    }

private:
    linalg::TridiagonalEigen<Real> eig_;
    std::vector<std::complex<Real>> gauge_;
};

// Block or full-space spectrum, reusable across several tau.
template <class Real>
class Spectrum {
public:
    Spectrum(int k, std::optional<int> block, const Real& theta, int N, int max_iter = 60)
        : k_(k), block_(block), N_(N) {
        if (block) {
            parts_.emplace_back(*block, BlockSpectrum<Real>(k, *block, theta, N, linalg::all_rows<Real>(N), max_iter));
        } else {
            for (int i = 0; i < k; ++i) {
                const int Ni = fock::block_dimension(k, i, N);
                if (Ni > 0)
                    parts_.emplace_back(i, BlockSpectrum<Real>(k, i, theta, Ni, linalg::all_rows<Real>(Ni), max_iter));
            }
        }
    }

    bool converged() const {
        for (const auto& pr : parts_)
            if (!pr.second.converged()) return false;
        return true;
    }

    CMatrix<Real> unitary(const Real& tau) const {
        if (block_) return parts_.front().second.unitary(tau);
        CMatrix<Real> U(static_cast<std::size_t>(N_), static_cast<std::size_t>(N_));
        for (const auto& [i, bs] : parts_) {
            CMatrix<Real> W = bs.unitary(tau);
            for (std::size_t a = 0; a < W.rows(); ++a)
                for (std::size_t b = 0; b < W.cols(); ++b) U(i + a * k_, i + b * k_) = W(a, b);
        }
        return U;
    }

private:
    int k_;
    std::optional<int> block_;
    int N_;
    std::vector<std::pair<int, BlockSpectrum<Real>>> parts_;
};

template <class Real>
Real max_abs_entry(const CMatrix<Real>& a) {
    using std::abs;
    Real m(0);
    for (const auto& z : a.data()) {
        Real v = abs(z);
        if (v > m) m = v;
    }
    return m;
}

// exp(i tau M) by scaling and squaring with a Taylor core.
template <class Real>
CMatrix<Real> expm_scaling_squaring(const CMatrix<Real>& M, const Real& tau) {
    using std::abs;
    const std::size_t n = M.rows();
    if (M.cols() != n) throw std::invalid_argument("expm: square matrix required");
    Real norm1(0);
    for (std::size_t c = 0; c < n; ++c) {
        Real s(0);
        for (std::size_t r = 0; r < n; ++r) s += abs(M(r, c));
        if (s > norm1) norm1 = s;
    }
    norm1 *= abs(tau);
    int squarings = 0;
    Real scale(1);
    while (norm1 * scale > Real(1) / 2) {
        scale /= 2;
        ++squarings;
        if (squarings > 2000) throw NumericalFailure("expm: matrix norm out of range");
    }
    CMatrix<Real> Y(n, n);
    const std::complex<Real> f(Real(0), tau * scale);
    for (std::size_t j = 0; j < Y.data().size(); ++j) Y.data()[j] = f * M.data()[j];

    CMatrix<Real> E = CMatrix<Real>::identity(n);
    CMatrix<Real> term = E;
    const Real eps = std::numeric_limits<Real>::epsilon();
    bool done = false;
    for (int m = 1; m <= 400; ++m) {
        term = kernels::omp::matmul(term, Y);
        const Real inv(Real(1) / m);
        for (auto& z : term.data()) z *= inv;
        for (std::size_t j = 0; j < E.data().size(); ++j) E.data()[j] += term.data()[j];
        if (max_abs_entry(term) <= eps / 8) {
            done = true;
            break;
        }
    }
    if (!done) throw NumericalFailure("expm: Taylor core did not converge");
    for (int s = 0; s < squarings; ++s) E = kernels::omp::matmul(E, E);
    return E;
}

template <class Real>
bool all_finite(const CMatrix<Real>& a) {
    using std::isfinite;
    for (const auto& z : a.data())
        if (!(isfinite(z.real()) && isfinite(z.imag()))) return false;
    return true;
}

template <class Real>
void validate(const ExpParams<Real>& p) {
    using std::isfinite;
    if (p.k < 1) throw std::invalid_argument("expgroup: k must be >= 1");
    if (p.N < 2) throw std::invalid_argument("expgroup: N must be >= 2");
    if (p.block && (*p.block < 0 || *p.block >= p.k)) throw std::invalid_argument("expgroup: need 0 <= i < k");
    if (!isfinite(p.theta) || !isfinite(p.t) || !isfinite(p.xi_abs))
        throw std::invalid_argument("expgroup: parameters must be finite");
    if (p.xi_abs < 0) throw std::invalid_argument("expgroup: |xi| must be >= 0");
}

template <class Real>
CMatrix<Real> generator_matrix(const ExpParams<Real>& p) {
    return p.block ? fock::build_block_matrix<Real>(p.k, *p.block, p.theta, p.N)
                   : fock::build_full_matrix<Real>(p.k, p.theta, p.N);
}

template <class Real>
TruncatedUnitary<Real> truncated_exponential(const ExpParams<Real>& p) {
    validate(p);
    TruncatedUnitary<Real> out;
    out.k = p.k;
    out.block = p.block;
    out.theta = p.theta;
    out.t = p.t;
    out.xi_abs = p.xi_abs;
    out.N = p.N;
    out.method = p.method;
    const Real tau = p.tau();
    if (p.method == Method::eig_tridiagonal) {
        Spectrum<Real> sp(p.k, p.block, p.theta, p.N, p.max_ql_iterations);
        if (sp.converged()) {
            out.U = sp.unitary(tau);
            if (all_finite(out.U)) return out;
        }
        out.fell_back = true;
        out.method = Method::scaling_squaring;
    }
    try {
        out.U = expm_scaling_squaring<Real>(generator_matrix(p), tau);
    } catch (const NumericalFailure& e) {
        if (out.fell_back) throw NumericalFailure(std::string("expgroup: both methods failed: ") + e.what());
        throw;
    }
    if (!all_finite(out.U)) throw NumericalFailure("expgroup: non-finite result");
    return out;
}

// max |U*U - I|
template <class Real>
Real unitarity_residual(const CMatrix<Real>& U) {
    CMatrix<Real> P = kernels::omp::matmul(adjoint(U), U);
    return max_abs_diff(P, CMatrix<Real>::identity(U.rows()));
}

struct GroupLawReport {
    double group_law = 0;     // max |U(s+t) - U(s)U(t)|
    double inverse = 0;       // max |U(-t) - U(t)*|
    double unitarity = 0;     // max over U(s), U(t), U(s+t)
    bool fell_back = false;
};

template <class Real>
GroupLawReport group_law_check(const ExpParams<Real>& base, const Real& s, const Real& t) {
    validate(base);
    auto at = [&](const Real& tt) {
        ExpParams<Real> q = base;
        q.t = tt;
        q.method = Method::scaling_squaring;
        return q;
    };
    CMatrix<Real> Us, Ut, Ust, Umt;
    GroupLawReport rep;
    bool done = false;
    if (base.method == Method::eig_tridiagonal) {
        Spectrum<Real> sp(base.k, base.block, base.theta, base.N, base.max_ql_iterations);
        if (sp.converged()) {
            Us = sp.unitary(s * base.xi_abs);
            Ut = sp.unitary(t * base.xi_abs);
            Ust = sp.unitary((s + t) * base.xi_abs);
            Umt = sp.unitary(-t * base.xi_abs);
            done = true;
        } else {
            rep.fell_back = true;
        }
    }
    if (!done) {
        Us = truncated_exponential(at(s)).U;
        Ut = truncated_exponential(at(t)).U;
        Ust = truncated_exponential(at(s + t)).U;
        Umt = truncated_exponential(at(-t)).U;
    }
    rep.group_law = to_double(max_abs_diff(Ust, kernels::omp::matmul(Us, Ut)));
    rep.inverse = to_double(max_abs_diff(Umt, adjoint(Ut)));
    for (const auto* U : {&Us, &Ut, &Ust}) rep.unitarity = std::max(rep.unitarity, to_double(unitarity_residual(*U)));
    return rep;
}

// e^{-|z|^2/2} z^n / sqrt(n!), n < N
template <class Real>
std::vector<std::complex<Real>> coherent_oracle(const std::complex<Real>& z, int N) {
    using std::exp;
    using std::sqrt;
    if (N < 1) throw std::invalid_argument("coherent_oracle: N must be >= 1");
    std::vector<std::complex<Real>> c(static_cast<std::size_t>(N));
    c[0] = exp(-norm(z) / 2);
    for (int n = 1; n < N; ++n) c[n] = c[n - 1] * z / sqrt(Real(n));
    return c;
}

template <class Real>
struct TaylorResult {
    std::vector<std::complex<Real>> sum;  // positions 0..size-1 of the block
    std::vector<double> term_norms;       // ||(i tau)^n A^n f / n!||, n = 0..n_terms
    bool diverging = false;
    bool converged = false;
};

// sum_{n <= n_terms} (i tau)^n / n! A^n f, with A^n applied exactly.
template <class Real>
TaylorResult<Real> taylor_apply(int k, int i, const Real& theta, const Real& tau,
                                const std::vector<std::pair<int, std::complex<Real>>>& f, int n_terms, int size) {
    using std::sqrt;
    if (f.empty()) throw std::invalid_argument("taylor_apply: f must be nonempty");
    if (n_terms < 1 || size < 1) throw std::invalid_argument("taylor_apply: need n_terms >= 1 and size >= 1");
    int pmax = 0;
    std::vector<fock::ExactRadicalVector> vs;
    for (const auto& [p, c] : f) {
        if (p < 0) throw std::invalid_argument("taylor_apply: negative position");
        vs.push_back(fock::ExactRadicalVector::basis(k, i, p));
        pmax = std::max(pmax, p);
    }
    const int width = pmax + n_terms + 1;
    TaylorResult<Real> out;
    out.sum.assign(static_cast<std::size_t>(size), std::complex<Real>());
    std::complex<Real> coef(1);  // (i tau)^n / n!
    const std::complex<Real> itau(Real(0), tau);
    Real sum_norm(0);
    for (int n = 0; n <= n_terms; ++n) {
        if (n > 0) {
            coef *= itau / Real(n);
            for (auto& v : vs) v = fock::apply_block(v);
        }
        std::vector<std::complex<Real>> term(static_cast<std::size_t>(width));
        for (std::size_t c = 0; c < vs.size(); ++c) {
            auto num = vs[c].template to_numeric<Real>(theta, width);
            for (int q = 0; q < width; ++q) term[q] += f[c].second * num[q];
        }
        Real tn(0);
        for (auto& z : term) {
            z *= coef;
            tn += norm(z);
        }
        out.term_norms.push_back(to_double(Real(sqrt(tn))));
        for (int q = 0; q < size && q < width; ++q) out.sum[q] += term[q];
    }
    for (const auto& z : out.sum) sum_norm += norm(z);
    const int w = std::max(2, std::min(10, n_terms / 4));
    const auto& tn = out.term_norms;
    bool increasing = static_cast<int>(tn.size()) > w;
    for (int j = static_cast<int>(tn.size()) - w; increasing && j < static_cast<int>(tn.size()); ++j)
        if (!(tn[j] > tn[j - 1])) increasing = false;
    out.diverging = increasing;
    const double eps = static_cast<double>(std::numeric_limits<Real>::epsilon());
    out.converged = !increasing && tn.back() <= std::max(eps, 1e-300) * 10 * std::sqrt(to_double(sum_norm));
    return out;
}

enum class Stabilization { stabilizes, does_not_stabilize, inconclusive };
const char* to_string(Stabilization s);

// Verdict from the deltas between consecutive truncations.
Stabilization stabilization_verdict(const std::vector<double>& deltas, double noise_floor, double tolerance = 1e-8,
                                    double divergence_floor = 1e-2);

struct StabilizationReport {
    int k = 1;
    double theta = 0, t = 0;
    int w = 0;
    std::vector<int> dims;
    std::vector<double> deltas;
    double noise_floor = 0;
    double tolerance = 1e-8;
    Stabilization verdict = Stabilization::inconclusive;
    std::optional<double> oracle_error;  // k = 1: column 0 against the coherent state
    std::vector<std::vector<std::complex<double>>> window;  // w x w at the largest dim
};

// Top-left w x w window of exp(i tau A) on the full truncation e_0..e_{N-1}.
template <class Real>
CMatrix<Real> leading_window(int k, const Real& theta, const Real& tau, int N, int w) {
    CMatrix<Real> out(static_cast<std::size_t>(w), static_cast<std::size_t>(w));
    for (int i = 0; i < k && i < w; ++i) {
        std::vector<int> rows;
        for (int p = 0; i + p * k < w; ++p) rows.push_back(p);
        BlockSpectrum<Real> bs(k, i, theta, fock::block_dimension(k, i, N), rows);
        if (!bs.converged()) throw NumericalFailure("stabilization: eigensolver did not converge");
        CMatrix<Real> W = bs.unitary(tau);
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < rows.size(); ++b) out(i + rows[a] * k, i + rows[b] * k) = W(a, b);
    }
    return out;
}

template <class Real>
StabilizationReport stabilization_study(int k, const Real& theta, const Real& tau, const std::vector<int>& dims, int w,
                                        double tol_tau, double tolerance = 1e-8) {
    if (k < 1) throw std::invalid_argument("stabilization: k must be >= 1");
    if (dims.size() < 2) throw std::invalid_argument("stabilization: need at least two dims");
    for (std::size_t j = 1; j < dims.size(); ++j)
        if (dims[j] <= dims[j - 1]) throw std::invalid_argument("stabilization: dims must be strictly increasing");
    if (w < 1 || w > dims.front()) throw std::invalid_argument("stabilization: need 1 <= w <= min(dims)");
    StabilizationReport rep;
    rep.k = k;
    rep.theta = to_double(theta);
    rep.t = to_double(tau);
    rep.w = w;
    rep.dims = dims;
    rep.noise_floor = 1e3 * tol_tau;
    rep.tolerance = tolerance;

    std::vector<CMatrix<Real>> windows(dims.size());
    const long nd = static_cast<long>(dims.size());
#pragma omp parallel for schedule(dynamic)
    for (long j = 0; j < nd; ++j) windows[j] = leading_window<Real>(k, theta, tau, dims[j], w);

    for (std::size_t j = 1; j < windows.size(); ++j)
        rep.deltas.push_back(to_double(max_abs_diff(windows[j], windows[j - 1])));
    rep.verdict = stabilization_verdict(rep.deltas, rep.noise_floor, tolerance);

    const CMatrix<Real>& last = windows.back();
    rep.window.assign(static_cast<std::size_t>(w), std::vector<std::complex<double>>(static_cast<std::size_t>(w)));
    for (int a = 0; a < w; ++a)
        for (int b = 0; b < w; ++b) rep.window[a][b] = {to_double(last(a, b).real()), to_double(last(a, b).imag())};
    if (k == 1) {
        auto c = coherent_oracle<Real>(tau * cis<Real>(theta), w);
        Real err(0);
        for (int n = 0; n < w; ++n) err = std::max(err, Real(abs(last(n, 0) - c[n])));
        rep.oracle_error = to_double(err);
    }
    return rep;
}

struct SqueezeCheck {
    int N = 0;
    double residual = 0;     // max |full - interleaved blocks|
    bool cross_terms_zero = false;
};

// Full k=2 exponential by scaling-squaring against the two block exponentials
// by eigendecomposition.
template <class Real>
SqueezeCheck squeeze_decomposition_check(const Real& t, const std::complex<Real>& xi, int N) {
    using std::abs;
    using std::arg;
    if (N < 4 || N % 2 != 0) throw std::invalid_argument("squeeze check: N must be even and >= 4");
    const Real theta = xi == std::complex<Real>() ? Real(0) : Real(arg(xi));
    const Real tau = t * Real(abs(xi));
    CMatrix<Real> full = expm_scaling_squaring<Real>(fock::build_full_matrix<Real>(2, theta, N), tau);
    SqueezeCheck out;
    out.N = N;
    out.cross_terms_zero = true;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c)
            if (r % 2 != c % 2 && full(r, c) != std::complex<Real>()) out.cross_terms_zero = false;
    Real res(0);
    for (int i = 0; i < 2; ++i) {
        const int Ni = N / 2;
        BlockSpectrum<Real> bs(2, i, theta, Ni, linalg::all_rows<Real>(Ni));
        if (!bs.converged()) throw NumericalFailure("squeeze check: eigensolver did not converge");
        CMatrix<Real> W = bs.unitary(tau);
        for (int a = 0; a < Ni; ++a)
            for (int b = 0; b < Ni; ++b) res = std::max(res, Real(abs(W(a, b) - full(i + 2 * a, i + 2 * b))));
    }
    out.residual = to_double(res);
    return out;
}

}  // namespace sqz::expgroup
