#pragma once

#include "sqz/fock.hpp"
#include "sqz/orthopoly.hpp"
#include "sqz/precision.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sqz::deficiency {

enum class Branch { plus, minus };
inline int sign(Branch b) { return b == Branch::plus ? 1 : -1; }
inline const char* to_string(Branch b) { return b == Branch::plus ? "+" : "-"; }

// raw_f: f_p as they appear in the orthogonality conditions (theta-dependent);
// k1_g / k2_c / k3_d: reduced theta-free variables for k = 1, 2, >= 3.
enum class Gauge { raw_f, k1_g, k2_c, k3_d };
const char* to_string(Gauge g);
inline Gauge gauge_for(int k) { return k == 1 ? Gauge::k1_g : (k == 2 ? Gauge::k2_c : Gauge::k3_d); }

template <class Real>
struct DeficiencySequence {
    int k = 0, i = 0;
    Branch branch = Branch::plus;
    Gauge gauge = Gauge::k3_d;
    std::vector<std::complex<Real>> entries;  // in `gauge`
    std::vector<Real> d;                      // real reduced values; empty for raw_f
    std::vector<Real> partial_sums;           // running sum of |entry|^2
    std::complex<Real> normalization;
    double error_units = 0;  // running relative error bound in units of the working epsilon

    int P() const { return static_cast<int>(entries.size()) - 1; }
    double digit_loss() const { return error_units > 1 ? std::log10(error_units) : 0.0; }
};

namespace detail {

// Relative error of a*x + b*y given relative errors ex, ey on x, y; plus `ops` roundings.
inline double combine_error(double ax, double ex, double by, double ey, double sum, double ops) {
    if (sum == 0) return 0;
    return (std::fabs(ax) * ex + std::fabs(by) * ey) / std::fabs(sum) + ops;
}

template <class Real>
void fill_gauge(DeficiencySequence<Real>& s) {
    const std::size_t n = s.d.size();
    s.entries.resize(n);
    s.partial_sums.resize(n);
    Real acc(0);
    for (std::size_t p = 0; p < n; ++p) {
        if (s.gauge == Gauge::k2_c) {
            // c_p = i^p d_p
            using C = std::complex<Real>;
            switch (p % 4) {
                case 0: s.entries[p] = C(s.d[p], Real(0)); break;
                case 1: s.entries[p] = C(Real(0), s.d[p]); break;
                case 2: s.entries[p] = C(-s.d[p], Real(0)); break;
                default: s.entries[p] = C(Real(0), -s.d[p]); break;
            }
        } else {
            s.entries[p] = std::complex<Real>(s.d[p], Real(0));
        }
        acc += s.d[p] * s.d[p];
        s.partial_sums[p] = acc;
    }
    s.normalization = s.entries.empty() ? std::complex<Real>() : s.entries[0];
}

}  // namespace detail

// Reduced recurrence beta_{p+1} d_{p+1} = beta_p d_{p-1} +- d_p, d_{-1} = 0, d_0 = entry0.
template <class Real>
DeficiencySequence<Real> solve_recurrence(int k, int i, Branch branch, int P, const Real& entry0 = Real(1)) {
    fock::BlockIndex blk(k, i);
    if (P < 1) throw std::invalid_argument("solve_recurrence: P must be >= 1");
    DeficiencySequence<Real> s;
    s.k = k;
    s.i = i;
    s.branch = branch;
    s.gauge = gauge_for(k);
    s.d.resize(static_cast<std::size_t>(P) + 1);
    s.d[0] = entry0;
    const Real sg(sign(branch));
    Real beta_p(0);  // beta_0 = 0
    double e_prev = 0, e_cur = 0, e_max = 0;
    for (int p = 0; p < P; ++p) {
        Real beta_next = fock::beta_value<Real>(k, i, p + 1);
        Real a = p > 0 ? beta_p * s.d[p - 1] : Real(0);
        Real b = sg * s.d[p];
        Real sum = a + b;
        s.d[p + 1] = sum / beta_next;
        double e_next = detail::combine_error(to_double(a), e_prev + 2, to_double(b), e_cur, to_double(sum), 3);
        e_prev = e_cur;
        e_cur = e_next;
        if (e_cur > e_max) e_max = e_cur;
        beta_p = beta_next;
    }
    s.error_units = e_max;
    detail::fill_gauge(s);
    return s;
}

// theta-dependent form beta_{p+1} e^{i theta} f_{p+1} = beta_p e^{-i theta} f_{p-1} +- f_p.
template <class Real>
DeficiencySequence<Real> solve_raw(int k, int i, Branch branch, const Real& theta, int P, const Real& entry0 = Real(1)) {
    using std::cos;
    using std::sin;
    fock::BlockIndex blk(k, i);
    if (P < 1) throw std::invalid_argument("solve_raw: P must be >= 1");
    DeficiencySequence<Real> s;
    s.k = k;
    s.i = i;
    s.branch = branch;
    s.gauge = Gauge::raw_f;
    s.entries.resize(static_cast<std::size_t>(P) + 1);
    s.partial_sums.resize(s.entries.size());
    s.entries[0] = entry0;
    const std::complex<Real> em(cos(theta), -sin(theta));  // e^{-i theta}
    const Real sg(sign(branch));
    Real beta_p(0);
    for (int p = 0; p < P; ++p) {
        Real beta_next = fock::beta_value<Real>(k, i, p + 1);
        std::complex<Real> rhs = sg * s.entries[p];
        if (p > 0) rhs += beta_p * em * s.entries[p - 1];
        s.entries[p + 1] = rhs * em / beta_next;
        beta_p = beta_next;
    }
    Real acc(0);
    for (std::size_t p = 0; p < s.entries.size(); ++p) {
        acc += std::norm(s.entries[p]);
        s.partial_sums[p] = acc;
    }
    s.normalization = s.entries[0];
    return s;
}

// Minus branch from plus branch via d^-_p = (-1)^p d^+_p.
template <class Real>
DeficiencySequence<Real> alternate(const DeficiencySequence<Real>& plus) {
    if (plus.gauge == Gauge::raw_f) throw std::invalid_argument("alternate: reduced gauge required");
    DeficiencySequence<Real> s = plus;
    s.branch = plus.branch == Branch::plus ? Branch::minus : Branch::plus;
    for (std::size_t p = 1; p < s.d.size(); p += 2) s.d[p] = -s.d[p];
    detail::fill_gauge(s);
    return s;
}

enum class Verdict { divergent, convergent, inconclusive };
const char* to_string(Verdict v);

// Diagnostic for the printed Cauchy chain |d_{p+2} - d_p| <= (d_2 - d_0) sum_{r=p}^{p+2} alpha_r...alpha_0.
struct PrintedChainDiagnostic {
    bool evaluated = false;
    double series_value = 0;      // sum_{r>=0} sqrt(i!/(kr+k+i)!)
    double tail_from_P = 0;       // sum_{r>=P} sqrt(i!/(kr+k+i)!)
    double scaled_tail = 0;       // |d_2 - d_0| * tail_from_P
    bool signed_chain_holds = false;
    int signed_first_violation = -1;
    bool abs_chain_holds = false;  // same with |d_2 - d_0|
    int abs_first_violation = -1;
};

struct Summability {
    Verdict verdict = Verdict::inconclusive;
    std::string certificate;  // "tail-bound", "harmonic-minorant" or empty
    int P = 0;
    double partial_sum = 0;
    std::string partial_sum_str;
    double tail_bound = std::numeric_limits<double>::infinity();
    bool positive_entries = false;
    bool monotone_growth = false;  // partial sums strictly increase over [P/10, P]
    std::vector<std::pair<int, double>> growth;  // S at P/100, P/10, P/2, P
    PrintedChainDiagnostic printed_chain;
};

namespace detail {

// sum_{r>=start} prod_{s=0..r} 1/beta_{s+1}, i.e. sqrt(i!/(kr+k+i)!)
template <class Real>
Real alpha_product_tail(int k, int i, int start, const Real& eps) {
    Real prod(1), total(0);
    for (int r = 0;; ++r) {
        prod /= fock::beta_value<Real>(k, i, r + 1);
        if (r >= start) {
            total += prod;
            if (prod < eps * total) break;
        }
        if (prod == 0) break;
        if (r > start + 100000) break;
    }
    return total;
}

}  // namespace detail

template <class Real>
PrintedChainDiagnostic printed_chain_check(const DeficiencySequence<Real>& s) {
    PrintedChainDiagnostic out;
    if (s.k < 3 || s.d.size() < 3) return out;
    using std::abs;
    out.evaluated = true;
    const Real eps = std::numeric_limits<Real>::epsilon();
    const int P = s.P();
    out.series_value = to_double(detail::alpha_product_tail<Real>(s.k, s.i, 0, eps));
    out.tail_from_P = to_double(detail::alpha_product_tail<Real>(s.k, s.i, P, eps));
    const Real gap0 = s.d[2] - s.d[0];
    out.scaled_tail = to_double(abs(gap0)) * out.tail_from_P;
    // prefix[r] = alpha_r ... alpha_0
    std::vector<Real> prefix(static_cast<std::size_t>(P) + 3);
    Real prod(1);
    for (int r = 0; r < P + 3; ++r) {
        prod /= fock::beta_value<Real>(s.k, s.i, r + 1);
        prefix[r] = prod;
    }
    out.signed_chain_holds = out.abs_chain_holds = true;
    for (int p = 0; p + 2 <= P; ++p) {
        Real lhs = abs(s.d[p + 2] - s.d[p]);
        Real sum = prefix[p] + prefix[p + 1] + prefix[p + 2];
        if (out.signed_chain_holds && !(lhs <= gap0 * sum)) {
            out.signed_chain_holds = false;
            out.signed_first_violation = p;
        }
        if (out.abs_chain_holds && !(lhs <= abs(gap0) * sum)) {
            out.abs_chain_holds = false;
            out.abs_first_violation = p;
        }
    }
    return out;
}

// Convergence certificate for k >= 3 and divergence certificate for k <= 2,
// both from the sign structure of the reduced recurrence.
template <class Real>
Summability classify_summability(const DeficiencySequence<Real>& s) {
    if (s.gauge == Gauge::raw_f) throw std::invalid_argument("classify_summability: reduced gauge required");
    Summability out;
    const int P = s.P();
    const int k = s.k;
    out.P = P;
    out.partial_sum = to_double(s.partial_sums.back());
    out.partial_sum_str = format_real(s.partial_sums.back(), 20);
    using std::abs;

    out.positive_entries = true;
    for (const auto& v : s.d)
        if (!(abs(v) > 0)) out.positive_entries = false;
    if (s.branch == Branch::plus)
        for (const auto& v : s.d)
            if (!(v > 0)) out.positive_entries = false;

    const int lo = std::max(1, P / 10);
    out.monotone_growth = true;
    for (int p = lo; p <= P; ++p)
        if (!(s.partial_sums[p] > s.partial_sums[p - 1])) out.monotone_growth = false;
    for (int q : {P / 100, P / 10, P / 2, P})
        if (q >= 0 && (out.growth.empty() || out.growth.back().first != q))
            out.growth.emplace_back(q, to_double(s.partial_sums[q]));

    out.printed_chain = printed_chain_check(s);

    if (!out.positive_entries || P < 2) return out;

    if (k >= 3) {
        // rho_q <= ((q+1)/(q+2))^gamma once (kq+1)^{-k/2} <= 2^{-gamma} / (4(q+2)); the
        // condition is monotone in q, so checking q = P suffices. Then
        // sum_{p>P} d_p^2 <= M0^2 (P+2)/(gamma-1).
        const double gamma = k / 2.0 - 0.25;
        const double lhs = std::pow(static_cast<double>(k) * P + 1.0, -k / 2.0);
        const double rhs = std::pow(2.0, -gamma) / (4.0 * (P + 2.0));
        if (lhs <= rhs * (1 - 1e-12)) {
            const double m0 = std::max(to_double(abs(s.d[P])), to_double(abs(s.d[P - 1])));
            out.verdict = Verdict::convergent;
            out.certificate = "tail-bound";
            out.tail_bound = m0 * m0 * (P + 2.0) / (gamma - 1.0) * (1 + 1e-12);
        }
    } else {
        // d_{q+2} >= (beta_{q+1}/beta_{q+2}) d_q gives
        // d_{P+2j}^2 >= d_P^2 (a/(a+2kj))^{k/2}, a = i+Pk+1-k > 0: not summable for k <= 2.
        const long long a = static_cast<long long>(s.i) + static_cast<long long>(P) * k + 1 - k;
        if (a > 0 && out.monotone_growth) {
            out.verdict = Verdict::divergent;
            out.certificate = "harmonic-minorant";
        }
    }
    return out;
}

struct StructureReport {
    int P = 0;
    bool positivity = false;
    int positivity_violation = -1;
    bool gap_bound = false;  // d_{p+1} - d_{p-1} < alpha_p...alpha_0 (d_2 - d_0)
    int gap_violation = -1;
    bool two_step_decrease = false;  // d_p < d_{p-2}
    int decrease_violation = -1;
    bool alternation = false;  // d^-_p = (-1)^p d^+_p
    int alternation_violation = -1;
    double max_alternation_error = 0;
    bool all() const { return positivity && gap_bound && two_step_decrease && alternation; }
};

template <class Real>
StructureReport verify_structure(const DeficiencySequence<Real>& plus, const DeficiencySequence<Real>& minus,
                                 const Real& tau) {
    if (plus.gauge != Gauge::k3_d || minus.gauge != Gauge::k3_d)
        throw std::invalid_argument("verify_structure: k >= 3 reduced gauge required");
    if (plus.branch != Branch::plus || minus.branch != Branch::minus)
        throw std::invalid_argument("verify_structure: expected (+, -) pair");
    using std::abs;
    StructureReport r;
    const int P = std::min(plus.P(), minus.P());
    r.P = P;
    r.positivity = r.gap_bound = r.two_step_decrease = r.alternation = true;
    auto fail = [](bool& flag, int& at, int p) {
        if (flag) {
            flag = false;
            at = p;
        }
    };
    const auto& d = plus.d;
    Real prefix(1);  // alpha_p ... alpha_0
    const Real gap0 = d[2] - d[0];
    for (int p = 0; p <= P; ++p) {
        if (!(d[p] > 0)) fail(r.positivity, r.positivity_violation, p);
        prefix /= fock::beta_value<Real>(plus.k, plus.i, p + 1);
        if (p >= 1 && p <= P - 1 && !(d[p + 1] - d[p - 1] < prefix * gap0)) fail(r.gap_bound, r.gap_violation, p);
        if (p >= 2 && !(d[p] < d[p - 2])) fail(r.two_step_decrease, r.decrease_violation, p);
        Real expect = (p % 2 == 0) ? d[p] : Real(-d[p]);
        Real err = abs(minus.d[p] - expect);
        double rel = to_double(err / abs(d[p]));
        if (rel > r.max_alternation_error) r.max_alternation_error = rel;
        if (!(err <= tau * abs(d[p]))) fail(r.alternation, r.alternation_violation, p);
    }
    return r;
}

// Oracle comparison against the polynomial families (k = 1, 2).
struct OracleMatch {
    bool checked = false;
    bool identified = false;
    std::string point;  // evaluation point used, e.g. "-i/sqrt(2)"
    double max_relative_error = 0;
};

template <class Real>
OracleMatch match_polynomial_oracle(const DeficiencySequence<Real>& s, const Real& tol) {
    OracleMatch m;
    if (s.k > 2 || s.gauge == Gauge::raw_f) return m;
    m.checked = true;
    using std::abs;
    using std::sqrt;
    const int P = s.P();
    auto compare = [&](const std::vector<std::complex<Real>>& oracle) {
        Real worst(0);
        for (int p = 0; p <= P; ++p) {
            Real den = abs(oracle[p]);
            Real err = abs(s.entries[p] - oracle[p]) / (den > 0 ? den : Real(1));
            if (err > worst) worst = err;
        }
        return worst;
    };
    std::vector<std::complex<Real>> best;
    Real best_err(0);
    for (int sg : {-1, 1}) {
        std::vector<std::complex<Real>> oracle;
        std::string label;
        if (s.k == 1) {
            std::complex<Real> x(Real(0), Real(sg) / sqrt(Real(2)));
            oracle = orthopoly::hermite_normalized_sequence<Real>(P, x);
            label = sg < 0 ? "-i/sqrt(2)" : "+i/sqrt(2)";
        } else {
            Real lambda = s.i == 0 ? Real(1) / 4 : Real(3) / 4;
            std::complex<Real> x(Real(0), Real(sg) / 4);
            oracle = orthopoly::meixner_pollaczek_sequence<Real>(lambda, P, x, true);
            std::complex<Real> p0 = oracle[0];
            for (auto& v : oracle) v /= p0;
            label = std::string(sg < 0 ? "-i/4" : "+i/4") + (s.i == 0 ? ", lambda=1/4" : ", lambda=3/4");
        }
        // pairing fixed at p = 1
        Real e1 = abs(s.entries[1] - oracle[1]);
        if (best.empty() || e1 < best_err) {
            best = std::move(oracle);
            best_err = e1;
            m.point = label;
        }
    }
    Real worst = compare(best);
    m.max_relative_error = to_double(worst);
    m.identified = worst <= tol;
    return m;
}

struct BlockVerdict {
    int i = 0;
    bool summable = false;
    Verdict verdict = Verdict::inconclusive;
    std::string certificate;
    int P = 0;
    double partial_sum_at_P = 0;
    std::string partial_sum;
    double tail_bound = 0;
    bool branches_agree = false;
    bool minus_by_alternation = false;
    OracleMatch oracle_plus, oracle_minus;
    PrintedChainDiagnostic printed_chain;
    std::vector<std::pair<int, double>> growth;
    std::vector<std::pair<int, std::string>> sample;  // (p, entry) of the + branch
    double digit_loss = 0;
    int digits_used = 0;
};

struct DeficiencyReport {
    int k = 0;
    int P = 0;
    int digits = 0;
    std::vector<BlockVerdict> blocks;
    int n_plus = 0, n_minus = 0;
    bool essential_selfadjoint = false;
    bool decided = false;  // every block certified and branches agree
    double max_digit_loss = 0;
};

struct IndicesOptions {
    bool independent_minus = false;  // solve the minus branch directly instead of by alternation
    bool only_block = false;
    int block = 0;
};

DeficiencyReport deficiency_indices(int k, int P, const PrecisionConfig& cfg, const IndicesOptions& opt = {});

// Exact check of the appendix inequalities, for p >= 1:
//  (A) beta_p/beta_{p+1} + 1/beta_{p+1} - 1 < 0      (needs k >= 3)
//  (B) beta_{p-1}/beta_p - beta_p/beta_{p+1} < 0
struct AppendixRow {
    int k = 0, i = 0;
    int p_max = 0;
    bool a_holds = true;
    int a_first_violation = -1;
    int a_violations = 0;
    bool b_holds = true;
    int b_first_violation = -1;
    int b_violations = 0;
};

bool appendix_a_holds(int k, int i, int p);
bool appendix_b_holds(int k, int i, int p);

std::vector<AppendixRow> verify_appendix_inequalities(int k_min, int k_max, int p_max,
                                                      std::optional<int> only_i = std::nullopt);

}  // namespace sqz::deficiency
