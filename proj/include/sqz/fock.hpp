#pragma once

#include "sqz/matrix.hpp"
#include "sqz/precision.hpp"

#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace sqz::fock {

struct BlockIndex {
    int k = 1;
    int i = 0;
    int p = 0;

    BlockIndex() = default;
    BlockIndex(int k_, int i_, int p_ = 0);
    bool operator==(const BlockIndex&) const = default;
};

// n = i + p*k
long long fock_index(int k, int i, int p);
BlockIndex block_of(long long n, int k);

// Size of block i inside the truncation e_0..e_{N-1}.
int block_dimension(int k, int i, int N);

// beta_q^2 = prod_{j=1..k} (i + (q-1)k + j); zero for q <= 0 (e_{-1} = 0).
mp_int beta_squared(int k, int i, int q);

// (i+qk)!/(i+pk)! as a bounded product; rational when q < p.
mp_rational factorial_ratio(int k, int i, int p, int q);

struct LadderCoefficient {
    mp_int square;

    template <class Real>
    Real value() const {
        using std::sqrt;
        return sqrt(to_real<Real>(square));
    }
};

// Validated ladder coefficient, p >= 1.
LadderCoefficient beta(int k, int i, int p);

// beta_q as a working-precision value; 0 for q <= 0. Uses machine products
// when they cannot overflow.
template <class Real>
Real beta_value(int k, int i, int q) {
    using std::sqrt;
    if (q <= 0) return Real(0);
    const long long base = static_cast<long long>(i) + static_cast<long long>(q - 1) * k;
    if (k <= 6 && base < 1000000) {
        Real prod(1);
        for (int j = 1; j <= k; ++j) prod *= Real(base + j);
        return sqrt(prod);
    }
    return sqrt(to_real<Real>(beta_squared(k, i, q)));
}

// -i e^{i theta}
template <class Real>
std::complex<Real> omega(const Real& theta) {
    using std::cos;
    using std::sin;
    return {sin(theta), -cos(theta)};
}

// Block matrix of A^(k,i) on e_0..e_{N-1}: M[p+1][p] = omega*beta_{p+1}, M[p][p+1] = conj.
template <class Real>
CMatrix<Real> build_block_matrix(int k, int i, const Real& theta, int N);

// Full A^(k) on Fock states e_0..e_{N-1}; nonzero entries at offsets +-k.
template <class Real>
CMatrix<Real> build_full_matrix(int k, const Real& theta, int N);

// Finitely supported block vector sum_q r_q * omega^{m_q} * sqrt((i+qk)!/(i+pk)!) e_q,
// with the base position p fixed at construction. The phase power is tracked
// symbolically so norms stay exactly rational.
class ExactRadicalVector {
public:
    struct Term {
        mp_rational r;
        int phase_power = 0;
    };

    ExactRadicalVector(int k, int i, int base_p);  // zero vector
    static ExactRadicalVector basis(int k, int i, int p);

    int k() const { return k_; }
    int i() const { return i_; }
    int base() const { return p_; }
    const std::map<int, Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(int q, const mp_rational& r, int phase_power);

    // A^(k,i) applied exactly.
    ExactRadicalVector apply() const;

    mp_rational norm_squared() const;

    // Coefficient of e_q at phase theta, positions 0..max_q.
    template <class Real>
    std::vector<std::complex<Real>> to_numeric(const Real& theta, int size) const;

private:
    int k_, i_, p_;
    std::map<int, Term> terms_;
};

ExactRadicalVector apply_block(const ExactRadicalVector& v);

template <class Real>
std::vector<std::complex<Real>> ExactRadicalVector::to_numeric(const Real& theta, int size) const {
    using std::sqrt;
    std::vector<std::complex<Real>> out(static_cast<std::size_t>(size));
    const std::complex<Real> w = omega(theta);
    for (const auto& [q, t] : terms_) {
        if (q >= size) continue;
        std::complex<Real> ph(1);
        const int m = t.phase_power >= 0 ? t.phase_power : -t.phase_power;
        for (int s = 0; s < m; ++s) ph *= (t.phase_power >= 0 ? w : std::conj(w));
        Real mag = to_real<Real>(t.r) * sqrt(to_real<Real>(factorial_ratio(k_, i_, p_, q)));
        out[static_cast<std::size_t>(q)] = ph * mag;
    }
    return out;
}

}  // namespace sqz::fock
