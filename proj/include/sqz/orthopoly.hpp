#pragma once

#include "sqz/precision.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <complex>
#include <stdexcept>
#include <vector>

namespace sqz::orthopoly {

enum class Kind { hermite_normalized, mp_raw, mp_normalized };

struct PolynomialFamily {
    Kind kind = Kind::hermite_normalized;
    double lambda = 0.5;  // Meixner-Pollaczek parameter; ignored for Hermite
};

template <class Real>
Real gamma_fn(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) return std::tgamma(x);
    else return boost::math::tgamma(x);
}

// h_0..h_P with h_p = i^p H_p(x)/sqrt(2^p p!):
// sqrt(p+1) h_{p+1} = i sqrt(2) x h_p + sqrt(p) h_{p-1}
template <class Real>
std::vector<std::complex<Real>> hermite_normalized_sequence(int P, const std::complex<Real>& x) {
    using std::sqrt;
    if (P < 0) throw std::invalid_argument("hermite: degree must be >= 0");
    std::vector<std::complex<Real>> h(static_cast<std::size_t>(P) + 1);
    h[0] = Real(1);
    if (P == 0) return h;
    const std::complex<Real> c = std::complex<Real>(Real(0), sqrt(Real(2))) * x;
    h[1] = c;
    for (int p = 1; p < P; ++p)
        h[p + 1] = (c * h[p] + sqrt(Real(p)) * h[p - 1]) / sqrt(Real(p + 1));
    return h;
}

template <class Real>
std::complex<Real> hermite_normalized(int p, const std::complex<Real>& x) {
    return hermite_normalized_sequence<Real>(p, x).back();
}

// Physicists' H_p: H_{p+1} = 2x H_p - 2p H_{p-1}.
template <class Real>
std::vector<std::complex<Real>> hermite_physicists_sequence(int P, const std::complex<Real>& x) {
    std::vector<std::complex<Real>> H(static_cast<std::size_t>(P) + 1);
    H[0] = Real(1);
    if (P == 0) return H;
    H[1] = Real(2) * x;
    for (int p = 1; p < P; ++p) H[p + 1] = Real(2) * x * H[p] - Real(2 * p) * H[p - 1];
    return H;
}

// p_0 for the orthonormal family: sqrt(2^{2 lambda} / (2 pi Gamma(2 lambda))).
template <class Real>
Real mp_normalization(const Real& lambda) {
    using std::pow;
    using std::sqrt;
    return sqrt(pow(Real(2), Real(2) * lambda) / (Real(2) * pi_as<Real>() * gamma_fn(Real(2) * lambda)));
}

// Meixner-Pollaczek P^(lambda)_n(x; pi/2), n = 0..P.
// raw:        (n+1) P_{n+1} = 2x P_n - (n+2l-1) P_{n-1}
// normalized: sqrt((n+1)(n+2l)) p_{n+1} = 2x p_n - sqrt(n(n+2l-1)) p_{n-1}
template <class Real>
std::vector<std::complex<Real>> meixner_pollaczek_sequence(const Real& lambda, int P, const std::complex<Real>& x,
                                                           bool normalized) {
    using std::sqrt;
    if (!(lambda > 0)) throw std::invalid_argument("meixner_pollaczek: lambda must be > 0");
    if (P < 0) throw std::invalid_argument("meixner_pollaczek: degree must be >= 0");
    std::vector<std::complex<Real>> v(static_cast<std::size_t>(P) + 1);
    v[0] = normalized ? std::complex<Real>(mp_normalization(lambda)) : std::complex<Real>(Real(1));
    const Real two_l = Real(2) * lambda;
    for (int n = 0; n < P; ++n) {
        std::complex<Real> prev = n > 0 ? v[n - 1] : std::complex<Real>(Real(0));
        if (normalized) {
            std::complex<Real> rhs = Real(2) * x * v[n];
            if (n > 0) rhs -= sqrt(Real(n) * (Real(n) + two_l - Real(1))) * prev;
            v[n + 1] = rhs / sqrt(Real(n + 1) * (Real(n) + two_l));
        } else {
            std::complex<Real> rhs = Real(2) * x * v[n];
            if (n > 0) rhs -= (Real(n) + two_l - Real(1)) * prev;
            v[n + 1] = rhs / Real(n + 1);
        }
    }
    return v;
}

template <class Real>
std::complex<Real> meixner_pollaczek(const Real& lambda, int n, const std::complex<Real>& x, bool normalized) {
    return meixner_pollaczek_sequence<Real>(lambda, n, x, normalized).back();
}

template <class Real>
std::vector<std::complex<Real>> family_sequence(const PolynomialFamily& fam, int P, const std::complex<Real>& z) {
    switch (fam.kind) {
        case Kind::hermite_normalized: return hermite_normalized_sequence<Real>(P, z);
        case Kind::mp_raw: return meixner_pollaczek_sequence<Real>(Real(fam.lambda), P, z, false);
        case Kind::mp_normalized: return meixner_pollaczek_sequence<Real>(Real(fam.lambda), P, z, true);
    }
    throw std::logic_error("unknown polynomial family");
}

// Running sums sum_{p<=P} |pi_p(z)|^2; z must be off the real axis.
template <class Real>
std::vector<Real> determinacy_partial_sums(const PolynomialFamily& fam, const std::complex<Real>& z, int P) {
    if (z.imag() == 0) throw std::invalid_argument("determinacy: z must have nonzero imaginary part");
    auto seq = family_sequence<Real>(fam, P, z);
    std::vector<Real> sums(seq.size());
    Real s(0);
    for (std::size_t p = 0; p < seq.size(); ++p) {
        s += std::norm(seq[p]);
        sums[p] = s;
    }
    return sums;
}

}  // namespace sqz::orthopoly
