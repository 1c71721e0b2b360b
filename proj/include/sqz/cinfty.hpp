#pragma once

#include "sqz/fock.hpp"
#include "sqz/precision.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sqz::cinfty {

inline constexpr int kDefaultExactCap = 2000;
inline constexpr int kMaxFloatingPowers = 40000;

// ||(A^(k,i))^n e_p||^2 by n exact applications.
mp_rational power_norm_sq(int k, int i, int p, int n, int cap = kDefaultExactCap);

// Same quantity from the nested-sum closed form; an oracle for n <= 8.
mp_rational nested_sum_norm_sq(int k, int i, int p, int n);

struct BoundCheck {
    mp_rational norm_sq;
    mp_int lower;  // (i+(p+n)k)!/(i+pk)!
    mp_int upper;  // 2 k^n times lower
    bool lower_ok = false;
    bool upper_ok = false;
};

BoundCheck check_bounds(int k, int i, int p, int n);

struct PowerNormRow {
    int n = 0;
    mp_rational norm_sq;
    bool lower_ok = false;
    bool upper_ok = false;
};

struct PowerNormTable {
    int k = 1, i = 0, p = 0;
    std::vector<PowerNormRow> rows;  // n = 0..n_max
};

PowerNormTable power_norm_table(int k, int i, int p, int n_max, int cap = kDefaultExactCap);

// log ||A^n e_p||, n = 0..N, by a rescaled floating iteration of the real
// gauge matrix in long double. The two versions agree bitwise.
std::vector<double> log_power_norms(int k, int i, int p, int N);
std::vector<double> log_power_norms_serial(int k, int i, int p, int N);

enum class SeriesVerdict { converged, divergent, inconclusive };
const char* to_string(SeriesVerdict v);

struct AnalyticSeries {
    int k = 1, i = 0, p = 0, N = 0;
    double t = 0;
    std::vector<double> log10_terms;         // t^n ||A^n e_p|| / n!
    std::vector<double> log10_partial_sums;
    std::vector<double> ratios;              // term_n / term_{n-1}, n >= 1
    SeriesVerdict verdict = SeriesVerdict::inconclusive;
    std::string certificate;                 // "ratio-tail" or "lower-bound-ratio"
    std::optional<int> n_star;               // first n with the lower-bound ratio >= 1
    std::optional<double> tail_estimate;     // geometric tail relative to the partial sum
    double max_trailing_ratio = 0;
};

AnalyticSeries analytic_series(int k, int i, int p, double t, int N);

// Lower bound for term_{n+1}/term_n, nondecreasing in n for k >= 2.
double lower_bound_ratio(int k, double t, int n);

struct QuasianalyticSeries {
    int k = 1, i = 0, p = 0, N = 0;
    std::vector<double> terms;          // ||A^n e_p||^{-1/n}, n = 1..N (index 0 unused)
    std::vector<double> partial_sums;   // index n: sum over 1..n
    SeriesVerdict verdict = SeriesVerdict::inconclusive;
    std::string certificate;            // "stirling-tail" or "harmonic-witness"
    std::optional<double> tail_bound;   // k >= 3
    bool per_term_bound_ok = false;     // terms <= (e/(nk))^{k/2}
    std::optional<double> decade_ratio; // N term_N / (N/10 term_{N/10})
    std::optional<double> fitted_exponent;
};

QuasianalyticSeries quasianalytic_series(int k, int i, int p, int N);

enum class VectorClass { bounded, entire, analytic, quasianalytic_witnessed, not_quasianalytic_witnessed, inconclusive };
const char* to_string(VectorClass c);

struct VectorClassification {
    int k = 1, i = 0, p = 0, N = 0;
    VectorClass cls = VectorClass::inconclusive;
    // membership flags; nullopt when undecided
    std::optional<bool> entire, analytic, quasianalytic;
    std::optional<double> radius_estimate;             // k = 2
    double radius_bracket_lo = 0, radius_bracket_hi = 0;
    std::vector<AnalyticSeries> probes;
    QuasianalyticSeries quasi;
};

// 1 / lim ||A^{n+1} e_p|| / ((n+1) ||A^n e_p||), extrapolated in 1/n.
double radius_estimate(const std::vector<double>& log_norms);

VectorClassification classify_vector(int k, int i, int p, int N = 10000);

}  // namespace sqz::cinfty
