#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace sqz {

namespace mp = boost::multiprecision;

using mp_int = mp::mpz_int;
using mp_rational = mp::mpq_rational;
using float128 = mp::float128;

// Fixed-precision MPFR numbers. Precision is part of the type, so values can
// be created inside OpenMP regions without touching global state.
template <unsigned Digits>
using mp_float = mp::number<mp::mpfr_float_backend<Digits>, mp::et_off>;

// A computation ran but could not reach the requested accuracy.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A request exceeds a configured size cap.
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr unsigned kPrecisionTiers[] = {25, 30, 50, 100, 200, 400};
inline constexpr int kMaxDigits = 400;

struct PrecisionConfig {
    int digits = 50;
    int guard = 2;

    PrecisionConfig() = default;
    PrecisionConfig(int d, int g = 2) : digits(d), guard(g) { validate(); }

    void validate() const {
        if (guard < 2 || digits <= guard)
            throw std::invalid_argument("precision: need digits > guard >= 2");
        if (digits > kMaxDigits)
            throw std::invalid_argument("precision: at most " + std::to_string(kMaxDigits) + " digits");
    }

    // tau = 10^(-digits+guard)
    int tolerance_exponent() const { return -(digits - guard); }
    double tolerance() const { return std::pow(10.0, tolerance_exponent()); }

    template <class Real>
    Real tolerance_as() const {
        return pow(Real(10), Real(tolerance_exponent()));
    }
};

// Default digits: SQUEEZE_DIGITS env var, else 50.
inline int default_digits() {
    if (const char* s = std::getenv("SQUEEZE_DIGITS")) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v > 2 && v <= kMaxDigits) return static_cast<int>(v);
    }
    return 50;
}

inline unsigned tier_for(int digits) {
    for (unsigned t : kPrecisionTiers)
        if (static_cast<int>(t) >= digits) return t;
    throw std::invalid_argument("precision: no tier for " + std::to_string(digits) + " digits");
}

// Calls f(std::type_identity<mp_float<T>>{}) with T the smallest tier >= digits.
template <class F>
decltype(auto) with_mp_precision(int digits, F&& f) {
    switch (tier_for(digits)) {
        case 25: return f(std::type_identity<mp_float<25>>{});
        case 30: return f(std::type_identity<mp_float<30>>{});
        case 50: return f(std::type_identity<mp_float<50>>{});
        case 100: return f(std::type_identity<mp_float<100>>{});
        case 200: return f(std::type_identity<mp_float<200>>{});
        default: return f(std::type_identity<mp_float<400>>{});
    }
}

// Like with_mp_precision but uses double / float128 for low digit counts.
template <class F>
decltype(auto) with_precision(int digits, F&& f) {
    if (digits <= 15) return f(std::type_identity<double>{});
    if (digits <= 32) return f(std::type_identity<float128>{});
    return with_mp_precision(digits, std::forward<F>(f));
}

template <class T>
struct is_mp_float : std::false_type {};
template <unsigned D>
struct is_mp_float<mp_float<D>> : std::true_type {};

template <class Real>
int effective_digits() {
    if constexpr (std::is_same_v<Real, double>) return 15;
    else if constexpr (std::is_same_v<Real, float128>) return 33;
    else return std::numeric_limits<Real>::digits10;
}

// Conversions of exact values into a working type.
template <class Real>
Real to_real(const mp_int& z) {
    if constexpr (is_mp_float<Real>::value) {
        return Real(z);
    } else {
        mp_float<60> tmp(z);
        if constexpr (std::is_same_v<Real, double>) return tmp.template convert_to<double>();
        else return Real(tmp.str(40, std::ios_base::scientific));
    }
}

template <class Real>
Real to_real(const mp_rational& q) {
    if constexpr (is_mp_float<Real>::value) {
        return Real(q);
    } else {
        mp_float<60> tmp(q);
        if constexpr (std::is_same_v<Real, double>) return tmp.template convert_to<double>();
        else return Real(tmp.str(40, std::ios_base::scientific));
    }
}

// Decimal string to the working type, rounded once.
template <class Real>
Real parse_real(const std::string& s) {
    if constexpr (std::is_same_v<Real, double>) {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
        return v;
    } else {
        return Real(s);
    }
}

template <class Real>
double to_double(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) return x;
    else return x.template convert_to<double>();
}

template <class Real>
std::string format_real(const Real& x, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << std::scientific << x;
    return os.str();
}

template <class Real>
Real pi_as() {
    if constexpr (std::is_same_v<Real, double>) return M_PI;
    else return boost::math::constants::pi<Real>();
}

}  // namespace sqz
