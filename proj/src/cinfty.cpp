#include "sqz/cinfty.hpp"

#include "sqz/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace sqz::cinfty {

namespace {

void check_position(int k, int i, int p) {
    if (k < 1 || i < 0 || i >= k) throw std::invalid_argument("cinfty: need k >= 1 and 0 <= i < k");
    if (p < 0) throw std::invalid_argument("cinfty: p must be >= 0");
}

mp_int pow_int(int base, int e) {
    mp_int r(1);
    for (int j = 0; j < e; ++j) r *= base;
    return r;
}

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// long double: in double the trailing components of the normalized vector
// underflow near n ~ 8000 (k=2) and corrupt the growth rate.
std::vector<double> log_power_norms_impl(int k, int i, int p, int N, bool parallel) {
    using LD = long double;
    check_position(k, i, p);
    if (N < 0) throw std::invalid_argument("log_power_norms: N must be >= 0");
    if (N > kMaxFloatingPowers)
        throw ResourceLimit("log_power_norms: N exceeds " + std::to_string(kMaxFloatingPowers));
    const int L = p + N + 1;
    std::vector<LD> b(static_cast<std::size_t>(std::max(L - 1, 0)));
    for (int q = 0; q + 1 < L; ++q) {
        LD prod = 1;
        const LD base = static_cast<LD>(i) + static_cast<LD>(q) * k;
        for (int j = 1; j <= k; ++j) prod *= base + j;
        b[q] = std::sqrt(prod);
    }
    std::vector<LD> x(static_cast<std::size_t>(p + 1), 0.0L);
    x[p] = 1.0L;
    std::vector<double> ln(static_cast<std::size_t>(N + 1), 0.0);
    LD acc = 0;
    for (int n = 1; n <= N; ++n) {
        x.push_back(0.0L);  // support of A^n e_p ends at p + n
        x = parallel ? kernels::omp::jacobi_matvec(b, x) : kernels::serial::jacobi_matvec(b, x);
        LD s = 0;
        for (LD v : x) s += v * v;
        const LD nrm = std::sqrt(s);
        if (!(nrm > 0) || !std::isfinite(nrm)) throw NumericalFailure("log_power_norms: norm left the floating range");
        for (LD& v : x) v /= nrm;
        acc += std::log(nrm);
        ln[n] = static_cast<double>(acc);
    }
    return ln;
}

constexpr double kLn10 = 2.302585092994045684;

AnalyticSeries analytic_from_log(int k, int i, int p, double t, const std::vector<double>& ln) {
    if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("analytic_series: t must be positive");
    const int N = static_cast<int>(ln.size()) - 1;
    AnalyticSeries s;
    s.k = k;
    s.i = i;
    s.p = p;
    s.t = t;
    s.N = N;
    std::vector<double> lt(static_cast<std::size_t>(N + 1));
    double acc = -std::numeric_limits<double>::infinity();
    for (int n = 0; n <= N; ++n) {
        lt[n] = n * std::log(t) + ln[n] - std::lgamma(n + 1.0);
        acc = log_add(acc, lt[n]);
        s.log10_terms.push_back(lt[n] / kLn10);
        s.log10_partial_sums.push_back(acc / kLn10);
        if (n > 0) s.ratios.push_back(std::exp(lt[n] - lt[n - 1]));
    }

    // rigorous divergence: terms >= L_n with L_{n+1}/L_n >= g(n), g nondecreasing
    if (k >= 2) {
        bool possible = true;
        if (k == 2 && 2 * t <= 1) possible = false;  // g(n) < 2t
        if (possible) {
            long long hi = 1;
            while (lower_bound_ratio(k, t, static_cast<int>(hi)) < 1 && hi < (1LL << 30)) hi *= 2;
            if (lower_bound_ratio(k, t, static_cast<int>(hi)) >= 1) {
                long long lo = 0;
                if (lower_bound_ratio(k, t, 0) >= 1) hi = 0;
                while (hi - lo > 1) {
                    long long mid = (lo + hi) / 2;
                    (lower_bound_ratio(k, t, static_cast<int>(mid)) >= 1 ? hi : lo) = mid;
                }
                s.n_star = static_cast<int>(hi);
                s.verdict = SeriesVerdict::divergent;
                s.certificate = "lower-bound-ratio";
                return s;
            }
        }
    }

    // convergence estimate from the trailing ratios
    if (N >= 10) {
        const int W = std::max(10, N / 10);
        double rmax = 0;
        for (int n = N - W + 1; n <= N; ++n) rmax = std::max(rmax, s.ratios[n - 1]);
        s.max_trailing_ratio = rmax;
        if (rmax < 1) {
            const double rel = std::exp(lt[N] - acc) * rmax / (1 - rmax);
            s.tail_estimate = rel;
            if (rel <= 1e-10) {
                s.verdict = SeriesVerdict::converged;
                s.certificate = "ratio-tail";
            }
        }
    }
    return s;
}

QuasianalyticSeries quasi_from_log(int k, int i, int p, const std::vector<double>& ln) {
    const int N = static_cast<int>(ln.size()) - 1;
    if (N < 2) throw std::invalid_argument("quasianalytic_series: N must be >= 2");
    QuasianalyticSeries q;
    q.k = k;
    q.i = i;
    q.p = p;
    q.N = N;
    q.terms.assign(static_cast<std::size_t>(N + 1), 0.0);
    q.partial_sums.assign(static_cast<std::size_t>(N + 1), 0.0);
    q.per_term_bound_ok = true;
    for (int n = 1; n <= N; ++n) {
        q.terms[n] = std::exp(-ln[n] / n);
        q.partial_sums[n] = q.partial_sums[n - 1] + q.terms[n];
        const double bound = std::pow(std::exp(1.0) / (static_cast<double>(n) * k), k / 2.0);
        if (q.terms[n] > bound * (1 + 1e-12)) q.per_term_bound_ok = false;
    }
    if (k >= 3) {
        const double h = k / 2.0;
        q.tail_bound = std::pow(std::exp(1.0) / k, h) * std::pow(static_cast<double>(N), 1 - h) / (h - 1);
        if (q.per_term_bound_ok) {
            q.verdict = SeriesVerdict::converged;
            q.certificate = "stirling-tail";
        }
        return q;
    }
    if (N >= 20) {
        const int n1 = N / 10;
        q.decade_ratio = (N * q.terms[N]) / (n1 * q.terms[n1]);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (int n = n1; n <= N; ++n, ++m) {
            const double x = std::log(static_cast<double>(n)), y = std::log(q.terms[n]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        q.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        if (*q.decade_ratio >= 0.9) {
            q.verdict = SeriesVerdict::divergent;
            q.certificate = "harmonic-witness";
        }
    }
    return q;
}

}  // namespace

mp_rational power_norm_sq(int k, int i, int p, int n, int cap) {
    check_position(k, i, p);
    if (n < 0) throw std::invalid_argument("power_norm_sq: n must be >= 0");
    if (n > cap) throw ResourceLimit("power_norm_sq: n exceeds the exact-arithmetic cap " + std::to_string(cap));
    auto v = fock::ExactRadicalVector::basis(k, i, p);
    for (int s = 0; s < n; ++s) v = fock::apply_block(v);
    return v.norm_squared();
}

// Coefficient of e_{p+n-2r} in A^n e_p is sqrt((i+qk)!/(i+pk)!) times a nested
// sum over down-step positions; the norm squares each nested sum.
mp_rational nested_sum_norm_sq(int k, int i, int p, int n) {
    check_position(k, i, p);
    if (n < 0 || n > 12) throw std::invalid_argument("nested_sum_norm_sq: 0 <= n <= 12");
    mp_rational total(0);
    for (int r = 0; r <= n; ++r) {
        const int q = p + n - 2 * r;
        if (q < 0) continue;
        const int base = p - r + 1;
        auto f = [&](int j) { return fock::beta_squared(k, i, base + j); };
        std::function<mp_int(int, int)> nested = [&](int s, int prev) -> mp_int {
            if (s > r) return mp_int(1);
            mp_int acc(0);
            for (int j = s - 1; j <= prev + 1; ++j) {
                mp_int fj = f(j);
                if (fj != 0) acc += fj * nested(s + 1, j);
            }
            return acc;
        };
        const mp_int c = nested(1, n - r - 1);
        total += mp_rational(c * c) * fock::factorial_ratio(k, i, p, q);
    }
    return total;
}

BoundCheck check_bounds(int k, int i, int p, int n) {
    BoundCheck b;
    b.norm_sq = power_norm_sq(k, i, p, n);
    b.lower = numerator(fock::factorial_ratio(k, i, p, p + n));
    b.upper = 2 * pow_int(k, n) * b.lower;
    b.lower_ok = mp_rational(b.lower) <= b.norm_sq;
    b.upper_ok = b.norm_sq <= mp_rational(b.upper);
    return b;
}

PowerNormTable power_norm_table(int k, int i, int p, int n_max, int cap) {
    check_position(k, i, p);
    if (n_max < 0) throw std::invalid_argument("power_norm_table: n_max must be >= 0");
    if (n_max > cap) throw ResourceLimit("power_norm_table: n exceeds the exact-arithmetic cap " + std::to_string(cap));
    PowerNormTable t{k, i, p, {}};
    auto v = fock::ExactRadicalVector::basis(k, i, p);
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) v = fock::apply_block(v);
        PowerNormRow row;
        row.n = n;
        row.norm_sq = v.norm_squared();
        const mp_rational lower = fock::factorial_ratio(k, i, p, p + n);
        row.lower_ok = lower <= row.norm_sq;
        row.upper_ok = row.norm_sq <= 2 * mp_rational(pow_int(k, n)) * lower;
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<double> log_power_norms(int k, int i, int p, int N) { return log_power_norms_impl(k, i, p, N, true); }
std::vector<double> log_power_norms_serial(int k, int i, int p, int N) {
    return log_power_norms_impl(k, i, p, N, false);
}

const char* to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::converged: return "converged";
        case SeriesVerdict::divergent: return "divergent";
        case SeriesVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(VectorClass c) {
    switch (c) {
        case VectorClass::bounded: return "bounded";
        case VectorClass::entire: return "entire";
        case VectorClass::analytic: return "analytic";
        case VectorClass::quasianalytic_witnessed: return "quasianalytic-witnessed";
        case VectorClass::not_quasianalytic_witnessed: return "not-quasianalytic-witnessed";
        case VectorClass::inconclusive: return "inconclusive";
    }
    return "?";
}

// beta_{p+n+1} >= (kn+1)^{k/2}
double lower_bound_ratio(int k, double t, int n) {
    return t * std::pow(static_cast<double>(k) * n + 1, k / 2.0) / (n + 1.0);
}

AnalyticSeries analytic_series(int k, int i, int p, double t, int N) {
    if (N < 1) throw std::invalid_argument("analytic_series: N must be >= 1");
    if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("analytic_series: t must be positive");
    return analytic_from_log(k, i, p, t, log_power_norms(k, i, p, N));
}

QuasianalyticSeries quasianalytic_series(int k, int i, int p, int N) {
    if (N < 2) throw std::invalid_argument("quasianalytic_series: N must be >= 2");
    return quasi_from_log(k, i, p, log_power_norms(k, i, p, N));
}

double radius_estimate(const std::vector<double>& ln) {
    const int N = static_cast<int>(ln.size()) - 1;
    if (N < 4) throw std::invalid_argument("radius_estimate: need N >= 4");
    auto r = [&](int n) { return std::exp(ln[n + 1] - ln[n] - std::log(n + 1.0)); };
    const int n = N - 1, h = n / 2;
    // r(n) ~ rho + c/n
    const double rho = (n * r(n) - h * r(h)) / (n - h);
    return 1 / rho;
}

VectorClassification classify_vector(int k, int i, int p, int N) {
    check_position(k, i, p);
    if (N < 20) throw std::invalid_argument("classify_vector: N must be >= 20");
    VectorClassification c;
    c.k = k;
    c.i = i;
    c.p = p;
    c.N = N;
    const auto ln = log_power_norms(k, i, p, N);
    c.quasi = quasi_from_log(k, i, p, ln);
    if (k == 2) {
        c.radius_bracket_lo = 1 / (2 * std::sqrt(2.0));
        c.radius_bracket_hi = 0.5;
    }
    if (c.quasi.verdict == SeriesVerdict::converged) {
        c.cls = VectorClass::not_quasianalytic_witnessed;
        c.quasianalytic = c.analytic = c.entire = false;
        c.probes.push_back(analytic_from_log(k, i, p, 0.01, ln));
        return c;
    }
    const auto big = analytic_from_log(k, i, p, 10.0, ln);
    c.probes.push_back(big);
    if (big.verdict == SeriesVerdict::converged) {
        c.cls = VectorClass::entire;
        c.entire = c.analytic = c.quasianalytic = true;
        return c;
    }
    const auto small = analytic_from_log(k, i, p, 0.3, ln);
    c.probes.push_back(small);
    if (small.verdict == SeriesVerdict::converged) {
        c.cls = VectorClass::analytic;
        c.analytic = c.quasianalytic = true;
        if (big.verdict == SeriesVerdict::divergent) c.entire = false;
        c.radius_estimate = radius_estimate(ln);
        return c;
    }
    if (c.quasi.verdict == SeriesVerdict::divergent) {
        c.cls = VectorClass::quasianalytic_witnessed;
        c.quasianalytic = true;
    }
    return c;
}

}  // namespace sqz::cinfty
