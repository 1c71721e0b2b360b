#include "sqz/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sqz::fock {

BlockIndex::BlockIndex(int k_, int i_, int p_) : k(k_), i(i_), p(p_) {
    if (k < 1) throw std::invalid_argument("block: k must be >= 1");
    if (i < 0 || i >= k) throw std::invalid_argument("block: need 0 <= i < k");
    if (p < 0) throw std::invalid_argument("block: p must be >= 0");
}

long long fock_index(int k, int i, int p) {
    BlockIndex b(k, i, p);
    return static_cast<long long>(b.i) + static_cast<long long>(b.p) * b.k;
}

BlockIndex block_of(long long n, int k) {
    if (n < 0) throw std::invalid_argument("block_of: negative Fock index");
    if (k < 1) throw std::invalid_argument("block_of: k must be >= 1");
    return BlockIndex(k, static_cast<int>(n % k), static_cast<int>(n / k));
}

int block_dimension(int k, int i, int N) {
    if (N <= i) return 0;
    return (N - i + k - 1) / k;
}

mp_int beta_squared(int k, int i, int q) {
    if (q <= 0) return mp_int(0);
    mp_int prod(1);
    const long long base = static_cast<long long>(i) + static_cast<long long>(q - 1) * k;
    for (int j = 1; j <= k; ++j) prod *= mp_int(base + j);
    return prod;
}

mp_rational factorial_ratio(int k, int i, int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("factorial_ratio: negative position");
    const int lo = std::min(p, q), hi = std::max(p, q);
    mp_int prod(1);
    for (long long m = static_cast<long long>(i) + static_cast<long long>(lo) * k + 1;
         m <= static_cast<long long>(i) + static_cast<long long>(hi) * k; ++m)
        prod *= mp_int(m);
    if (q >= p) return mp_rational(prod);
    return mp_rational(mp_int(1), prod);
}

LadderCoefficient beta(int k, int i, int p) {
    if (k < 1 || i < 0 || i >= k) throw std::invalid_argument("beta: need 0 <= i < k");
    if (p < 1) throw std::invalid_argument("beta: p must be >= 1");
    return {beta_squared(k, i, p)};
}

template <class Real>
CMatrix<Real> build_block_matrix(int k, int i, const Real& theta, int N) {
    if (N < 2) throw std::invalid_argument("build_block_matrix: N must be >= 2");
    if (k < 1 || i < 0 || i >= k) throw std::invalid_argument("build_block_matrix: need 0 <= i < k");
    using std::isfinite;
    if (!isfinite(theta)) throw std::invalid_argument("build_block_matrix: theta not finite");
    CMatrix<Real> m(N, N);
    const std::complex<Real> w = omega(theta);
    for (int p = 0; p + 1 < N; ++p) {
        Real b = beta_value<Real>(k, i, p + 1);
        m(p + 1, p) = w * b;
        m(p, p + 1) = std::conj(w) * b;
    }
    return m;
}

template <class Real>
CMatrix<Real> build_full_matrix(int k, const Real& theta, int N) {
    if (N < 2) throw std::invalid_argument("build_full_matrix: N must be >= 2");
    if (k < 1) throw std::invalid_argument("build_full_matrix: k must be >= 1");
    using std::isfinite;
    if (!isfinite(theta)) throw std::invalid_argument("build_full_matrix: theta not finite");
    CMatrix<Real> m(N, N);
    const std::complex<Real> w = omega(theta);
    // A e_n = omega sqrt((n+k)!/n!) e_{n+k} + conj(omega) sqrt(n!/(n-k)!) e_{n-k}
    for (int n = 0; n + k < N; ++n) {
        Real prod(1);
        for (int j = 1; j <= k; ++j) prod *= Real(n + j);
        using std::sqrt;
        Real b = sqrt(prod);
        m(n + k, n) = w * b;
        m(n, n + k) = std::conj(w) * b;
    }
    return m;
}

ExactRadicalVector::ExactRadicalVector(int k, int i, int base_p) : k_(k), i_(i), p_(base_p) {
    BlockIndex(k, i, base_p);
}

ExactRadicalVector ExactRadicalVector::basis(int k, int i, int p) {
    ExactRadicalVector v(k, i, p);
    v.add(p, mp_rational(1), 0);
    return v;
}

void ExactRadicalVector::add(int q, const mp_rational& r, int phase_power) {
    if (q < 0) return;  // e_q = 0 for q < 0
    if ((phase_power - (q - p_)) % 2 != 0)
        throw std::logic_error("ExactRadicalVector: phase parity mismatch");
    auto it = terms_.find(q);
    if (it == terms_.end()) {
        if (r != 0) terms_.emplace(q, Term{r, phase_power});
        return;
    }
    if (it->second.phase_power != phase_power) {
        // omega^{m} and omega^{m'} differ unless m == m'; the up/down rules
        // always produce m_q = q - p, so this is a caller error.
        throw std::logic_error("ExactRadicalVector: inconsistent phase powers at one position");
    }
    it->second.r += r;
    if (it->second.r == 0) terms_.erase(it);
}

// A e_q = omega beta_{q+1} e_{q+1} + conj(omega) beta_q e_{q-1}. With the shared
// radical sqrt(R_q), R_q = (i+qk)!/(i+pk)!, we have beta_{q+1} sqrt(R_q) = sqrt(R_{q+1})
// and beta_q sqrt(R_q) = beta_q^2 sqrt(R_{q-1}); so the up-step carries r_q and the
// down-step carries r_q * beta_q^2. conj(omega) = omega^{-1}.
ExactRadicalVector ExactRadicalVector::apply() const {
    ExactRadicalVector out(k_, i_, p_);
    for (const auto& [q, t] : terms_) {
        out.add(q + 1, t.r, t.phase_power + 1);
        if (q >= 1) out.add(q - 1, t.r * mp_rational(beta_squared(k_, i_, q)), t.phase_power - 1);
    }
    return out;
}

mp_rational ExactRadicalVector::norm_squared() const {
    mp_rational s(0);
    for (const auto& [q, t] : terms_) s += t.r * t.r * factorial_ratio(k_, i_, p_, q);
    return s;
}

ExactRadicalVector apply_block(const ExactRadicalVector& v) { return v.apply(); }

#define SQZ_INSTANTIATE(R)                                                      \
    template CMatrix<R> build_block_matrix<R>(int, int, const R&, int);         \
    template CMatrix<R> build_full_matrix<R>(int, const R&, int);

SQZ_INSTANTIATE(double)
SQZ_INSTANTIATE(float128)
SQZ_INSTANTIATE(mp_float<25>)
SQZ_INSTANTIATE(mp_float<30>)
SQZ_INSTANTIATE(mp_float<50>)
SQZ_INSTANTIATE(mp_float<100>)
SQZ_INSTANTIATE(mp_float<200>)
SQZ_INSTANTIATE(mp_float<400>)
#undef SQZ_INSTANTIATE

}  // namespace sqz::fock
