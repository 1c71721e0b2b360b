#include "sqz/cli.hpp"

#include "sqz/cinfty.hpp"
#include "sqz/deficiency.hpp"
#include "sqz/expgroup.hpp"
#include "sqz/precision.hpp"
#include "sqz/sbmodel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

namespace sqz::cli {

using json = nlohmann::ordered_json;

namespace {

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
json opt_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

struct Outcome {
    json config = json::object();
    json results = json::object();
    json precision = json::object();
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    int exit_code = kExitOk;
};

struct Common {
    std::string format = "json";
    std::string output;
    bool timing = false;
};

// ---------------------------------------------------------------- deficiency

struct DeficiencyOpts {
    int k = 0;
    std::optional<int> i;
    int P = 500;
    int digits = 0;
    bool independent_minus = false;
    bool appendix = false;
    int k_max = 8;
    int p_max = 1000;
};

json chain_json(const deficiency::PrintedChainDiagnostic& c) {
    json j;
    j["evaluated"] = c.evaluated;
    if (!c.evaluated) return j;
    j["alpha_product_series"] = c.series_value;
    j["alpha_product_tail_from_P"] = c.tail_from_P;
    j["scaled_tail"] = c.scaled_tail;
    j["signed_chain_holds"] = c.signed_chain_holds;
    j["signed_first_violation"] = c.signed_first_violation;
    j["abs_chain_holds"] = c.abs_chain_holds;
    j["abs_first_violation"] = c.abs_first_violation;
    return j;
}

json oracle_json(const deficiency::OracleMatch& m) {
    json j;
    j["checked"] = m.checked;
    if (!m.checked) return j;
    j["identified"] = m.identified;
    j["point"] = m.point;
    j["max_relative_error"] = m.max_relative_error;
    return j;
}

Outcome cmd_deficiency(const DeficiencyOpts& o) {
    Outcome out;
    out.config = {{"k", o.k},
                  {"i", opt_json(o.i)},
                  {"P", o.P},
                  {"digits", o.digits},
                  {"independent_minus", o.independent_minus},
                  {"appendix", o.appendix}};
    if (o.appendix) {
        out.config["k_max"] = o.k_max;
        out.config["p_max"] = o.p_max;
        auto rows = deficiency::verify_appendix_inequalities(o.k, o.k_max, o.p_max, o.i);
        json arr = json::array();
        out.csv_header = {"k", "i", "p_max", "ratio_inequality_holds", "ratio_first_violation",
                          "ratio_violations", "log_concavity_holds", "log_concavity_first_violation",
                          "log_concavity_violations"};
        for (const auto& r : rows) {
            arr.push_back({{"k", r.k},
                           {"i", r.i},
                           {"p_max", r.p_max},
                           {"ratio_inequality_holds", r.a_holds},
                           {"ratio_first_violation", r.a_first_violation},
                           {"ratio_violations", r.a_violations},
                           {"log_concavity_holds", r.b_holds},
                           {"log_concavity_first_violation", r.b_first_violation},
                           {"log_concavity_violations", r.b_violations}});
            out.csv_rows.push_back({std::to_string(r.k), std::to_string(r.i), std::to_string(r.p_max),
                                    r.a_holds ? "true" : "false", std::to_string(r.a_first_violation),
                                    std::to_string(r.a_violations), r.b_holds ? "true" : "false",
                                    std::to_string(r.b_first_violation), std::to_string(r.b_violations)});
        }
        out.results["appendix"] = arr;
        out.precision = {{"arithmetic", "exact integers"}, {"max_estimated_digit_loss", 0}};
        return out;
    }

    deficiency::IndicesOptions io;
    io.independent_minus = o.independent_minus;
    if (o.i) {
        io.only_block = true;
        io.block = *o.i;
    }
    auto rep = deficiency::deficiency_indices(o.k, o.P, PrecisionConfig(o.digits), io);
    json blocks = json::array();
    int max_used = 0;
    out.csv_header = {"block", "p", "deficiency_entry", "verdict", "certificate"};
    for (const auto& b : rep.blocks) {
        json j;
        j["i"] = b.i;
        j["verdict"] = deficiency::to_string(b.verdict);
        j["certificate"] = b.certificate;
        j["summable"] = b.summable;
        j["P"] = b.P;
        j["partial_sum"] = b.partial_sum;
        j["tail_bound"] = finite_or_null(b.tail_bound);
        j["branches_agree"] = b.branches_agree;
        j["minus_by_alternation"] = b.minus_by_alternation;
        j["oracle_plus"] = oracle_json(b.oracle_plus);
        j["oracle_minus"] = oracle_json(b.oracle_minus);
        j["alpha_chain_diagnostic"] = chain_json(b.printed_chain);
        json growth = json::array();
        for (const auto& [p, s] : b.growth) growth.push_back({p, s});
        j["partial_sum_growth"] = growth;
        json sample = json::array();
        for (const auto& [p, s] : b.sample) {
            sample.push_back({p, s});
            out.csv_rows.push_back({std::to_string(b.i), std::to_string(p), s, deficiency::to_string(b.verdict),
                                    b.certificate});
        }
        j["entries_sample"] = sample;
        j["digits_used"] = b.digits_used;
        j["estimated_digit_loss"] = b.digit_loss;
        max_used = std::max(max_used, b.digits_used);
        blocks.push_back(j);
    }
    out.results["k"] = rep.k;
    out.results["n_plus"] = rep.n_plus;
    out.results["n_minus"] = rep.n_minus;
    out.results["essentially_selfadjoint"] = rep.essential_selfadjoint;
    out.results["decided"] = rep.decided;
    out.results["blocks"] = blocks;
    out.precision = {{"digits_requested", o.digits},
                     {"max_digits_used", max_used},
                     {"max_estimated_digit_loss", rep.max_digit_loss}};
    out.exit_code = rep.decided ? kExitOk : kExitInconclusive;
    return out;
}

// ---------------------------------------------------------------- cinfty

struct CinftyOpts {
    int k = 0;
    int i = 0;
    int p = 0;
    std::optional<int> n_max;
    std::optional<double> t;
    bool quasianalytic = false;
    bool classify = false;
    int exact_cap = cinfty::kDefaultExactCap;
};

json analytic_json(const cinfty::AnalyticSeries& s) {
    json j;
    j["t"] = s.t;
    j["N"] = s.N;
    j["verdict"] = cinfty::to_string(s.verdict);
    j["converged"] = s.verdict == cinfty::SeriesVerdict::converged;
    j["certificate"] = s.certificate;
    j["n_star"] = opt_json(s.n_star);
    j["tail_estimate"] = opt_json(s.tail_estimate);
    j["max_trailing_ratio"] = s.max_trailing_ratio;
    j["log10_partial_sum_at_N"] = s.log10_partial_sums.empty() ? json(nullptr) : json(s.log10_partial_sums.back());
    return j;
}

json quasi_json(const cinfty::QuasianalyticSeries& q) {
    json j;
    j["N"] = q.N;
    j["verdict"] = cinfty::to_string(q.verdict);
    j["converges"] = q.verdict == cinfty::SeriesVerdict::converged;
    j["certificate"] = q.certificate;
    j["tail_bound"] = opt_json(q.tail_bound);
    j["per_term_bound_ok"] = q.per_term_bound_ok;
    j["decade_ratio"] = opt_json(q.decade_ratio);
    j["fitted_exponent"] = opt_json(q.fitted_exponent);
    j["partial_sum_at_N"] = q.partial_sums.empty() ? json(nullptr) : json(q.partial_sums.back());
    return j;
}

int series_exit(cinfty::SeriesVerdict v) { return v == cinfty::SeriesVerdict::inconclusive ? kExitInconclusive : kExitOk; }

Outcome cmd_cinfty(const CinftyOpts& o) {
    Outcome out;
    out.config = {{"k", o.k},
                  {"i", o.i},
                  {"p", o.p},
                  {"n_max", opt_json(o.n_max)},
                  {"t", opt_json(o.t)},
                  {"quasianalytic", o.quasianalytic},
                  {"classify", o.classify},
                  {"exact_cap", o.exact_cap}};
    out.precision = {{"floating", "long double rescaled iteration"}, {"exact", "rational"}};
    if (o.classify) {
        auto c = cinfty::classify_vector(o.k, o.i, o.p, o.n_max.value_or(10000));
        out.results["mode"] = "classify";
        out.results["class"] = cinfty::to_string(c.cls);
        out.results["entire"] = opt_json(c.entire);
        out.results["analytic"] = opt_json(c.analytic);
        out.results["quasianalytic"] = opt_json(c.quasianalytic);
        out.results["radius_estimate"] = opt_json(c.radius_estimate);
        out.results["radius_bracket"] = {c.radius_bracket_lo, c.radius_bracket_hi};
        json probes = json::array();
        for (const auto& s : c.probes) probes.push_back(analytic_json(s));
        out.results["probes"] = probes;
        out.results["quasianalytic_series"] = quasi_json(c.quasi);
        out.csv_header = {"k", "i", "p", "vector_class", "radius_estimate"};
        out.csv_rows.push_back({std::to_string(o.k), std::to_string(o.i), std::to_string(o.p),
                                cinfty::to_string(c.cls), c.radius_estimate ? num(*c.radius_estimate) : ""});
        out.exit_code = c.cls == cinfty::VectorClass::inconclusive ? kExitInconclusive : kExitOk;
        return out;
    }
    if (o.t) {
        auto s = cinfty::analytic_series(o.k, o.i, o.p, *o.t, o.n_max.value_or(1000));
        out.results["mode"] = "analytic_series";
        out.results["series"] = analytic_json(s);
        out.csv_header = {"n", "log10_term", "log10_partial_sum"};
        for (std::size_t n = 0; n < s.log10_terms.size(); ++n)
            out.csv_rows.push_back({std::to_string(n), num(s.log10_terms[n]), num(s.log10_partial_sums[n])});
        out.exit_code = series_exit(s.verdict);
        return out;
    }
    if (o.quasianalytic) {
        auto q = cinfty::quasianalytic_series(o.k, o.i, o.p, o.n_max.value_or(2000));
        out.results["mode"] = "quasianalytic_series";
        out.results["series"] = quasi_json(q);
        out.csv_header = {"n", "inverse_root_norm", "partial_sum"};
        for (std::size_t n = 1; n < q.terms.size(); ++n)
            out.csv_rows.push_back({std::to_string(n), num(q.terms[n]), num(q.partial_sums[n])});
        out.exit_code = series_exit(q.verdict);
        return out;
    }
    auto table = cinfty::power_norm_table(o.k, o.i, o.p, o.n_max.value_or(30), o.exact_cap);
    json rows = json::array();
    bool all_lower = true, all_upper = true;
    out.csv_header = {"n", "power_norm_sq_numerator", "power_norm_sq_denominator", "bound_lower_ok", "bound_upper_ok"};
    for (const auto& r : table.rows) {
        const std::string nu = numerator(r.norm_sq).str(), de = denominator(r.norm_sq).str();
        rows.push_back({{"n", r.n},
                        {"norm_sq_numerator", nu},
                        {"norm_sq_denominator", de},
                        {"bound_lower_ok", r.lower_ok},
                        {"bound_upper_ok", r.upper_ok}});
        out.csv_rows.push_back({std::to_string(r.n), nu, de, r.lower_ok ? "true" : "false", r.upper_ok ? "true" : "false"});
        all_lower = all_lower && r.lower_ok;
        all_upper = all_upper && r.upper_ok;
    }
    out.results["mode"] = "power_norm_table";
    out.results["rows"] = rows;
    out.results["all_lower_bounds_hold"] = all_lower;
    out.results["all_upper_bounds_hold"] = all_upper;
    return out;
}

// ---------------------------------------------------------------- expgroup

struct ExpOpts {
    int k = 0;
    double theta = 0;
    double t = 0.5;
    double xi = 1;
    std::string dims = "32,64,128,256,512";
    int w = 5;
    int digits = 30;
    bool decomposition = false;
    bool group_law = false;
    int N = 64;
    double s = 0.4;
};

template <class Real>
Real from_double(double x) {
    // shortest round-trip decimal, so 0.5 stays 0.5 in wider types
    return parse_real<Real>(num(x));
}

template <class Real>
Outcome run_expgroup(const ExpOpts& o, const std::vector<int>& dims) {
    Outcome out;
    const int eff = effective_digits<Real>();
    const double tol_tau = std::pow(10.0, -(eff - 2));
    out.precision = {{"digits_requested", o.digits}, {"working_digits", eff}, {"tau", tol_tau}};
    if (o.decomposition) {
        if (o.k != 2) throw std::invalid_argument("--decomposition-check needs --k 2");
        auto r = expgroup::squeeze_decomposition_check<Real>(
            from_double<Real>(o.t), std::polar(from_double<Real>(o.xi), from_double<Real>(o.theta)), o.N);
        const double tol = std::max(1e-20, 1e3 * tol_tau);
        out.results["mode"] = "decomposition_check";
        out.results["N"] = r.N;
        out.results["residual"] = r.residual;
        out.results["tolerance"] = tol;
        out.results["cross_terms_zero"] = r.cross_terms_zero;
        out.results["pass"] = r.residual <= tol && r.cross_terms_zero;
        out.csv_header = {"N", "block_decomposition_residual", "cross_terms_zero"};
        out.csv_rows.push_back({std::to_string(r.N), num(r.residual), r.cross_terms_zero ? "true" : "false"});
        out.exit_code = (r.residual <= tol && r.cross_terms_zero) ? kExitOk : kExitCheckFailed;
        return out;
    }
    if (o.group_law) {
        expgroup::ExpParams<Real> base;
        base.k = o.k;
        base.theta = from_double<Real>(o.theta);
        base.xi_abs = from_double<Real>(o.xi);
        base.N = o.N;
        auto r = expgroup::group_law_check<Real>(base, from_double<Real>(o.s), from_double<Real>(o.t));
        const double tol = 1e3 * tol_tau;
        const bool pass = r.group_law <= tol && r.inverse <= tol && r.unitarity <= tol;
        out.results["mode"] = "group_law";
        out.results["N"] = o.N;
        out.results["group_law_residual"] = r.group_law;
        out.results["inverse_residual"] = r.inverse;
        out.results["unitarity_residual"] = r.unitarity;
        out.results["tolerance"] = tol;
        out.results["fell_back"] = r.fell_back;
        out.results["pass"] = pass;
        out.csv_header = {"N", "group_law_residual", "inverse_residual", "unitarity_residual"};
        out.csv_rows.push_back({std::to_string(o.N), num(r.group_law), num(r.inverse), num(r.unitarity)});
        out.exit_code = pass ? kExitOk : kExitCheckFailed;
        return out;
    }
    const Real tau = from_double<Real>(o.t) * from_double<Real>(o.xi);
    auto rep = expgroup::stabilization_study<Real>(o.k, from_double<Real>(o.theta), tau, dims, o.w, tol_tau);
    out.results["mode"] = "stabilization";
    out.results["verdict"] = expgroup::to_string(rep.verdict);
    out.results["dims"] = rep.dims;
    out.results["deltas"] = rep.deltas;
    out.results["final_delta"] = rep.deltas.back();
    out.results["noise_floor"] = rep.noise_floor;
    out.results["tolerance"] = rep.tolerance;
    bool oracle_ok = true;
    if (rep.oracle_error) {
        oracle_ok = *rep.oracle_error <= 1e-8;
        out.results["oracle_error"] = *rep.oracle_error;
        out.results["oracle_ok"] = oracle_ok;
    }
    json window = json::array();
    for (const auto& row : rep.window) {
        json r = json::array();
        for (const auto& z : row) r.push_back(complex_json(z));
        window.push_back(r);
    }
    out.results["window"] = window;
    out.csv_header = {"dim", "window_delta_from_previous"};
    out.csv_rows.push_back({std::to_string(rep.dims[0]), ""});
    for (std::size_t j = 0; j < rep.deltas.size(); ++j)
        out.csv_rows.push_back({std::to_string(rep.dims[j + 1]), num(rep.deltas[j])});
    if (rep.verdict == expgroup::Stabilization::inconclusive) out.exit_code = kExitInconclusive;
    else if (!oracle_ok) out.exit_code = kExitCheckFailed;
    return out;
}

Outcome cmd_expgroup(const ExpOpts& o) {
    const auto dims = parse_int_list(o.dims);
    Outcome out;
    if (o.digits < 1 || o.digits > 33)
        throw std::invalid_argument("expgroup: --digits must be in [1, 33] (double or float128)");
    if (o.digits <= 15) out = run_expgroup<double>(o, dims);
    else out = run_expgroup<float128>(o, dims);
    out.config = {{"k", o.k},         {"theta", o.theta},
                  {"t", o.t},         {"xi", o.xi},
                  {"dims", dims},     {"w", o.w},
                  {"digits", o.digits}, {"decomposition_check", o.decomposition},
                  {"group_law", o.group_law}, {"N", o.N},
                  {"s", o.s}};
    return out;
}

// ---------------------------------------------------------------- sbmodel

struct SbOpts {
    double lambda = 0.25;
    bool generic = false;
    std::string verify = "all";
    int n_max = 6;
    std::optional<std::string> z;
};

Outcome cmd_sbmodel(const SbOpts& o) {
    using namespace sbmodel;
    SBContext ctx(o.lambda, o.generic);
    std::optional<cd> z;
    if (o.z) z = parse_complex(*o.z);
    if (o.n_max < 0) throw std::invalid_argument("sbmodel: --n-max must be >= 0");

    std::vector<Check> checks;
    const std::vector<cd> default_z = {cd(0.5, 0), cd(1, 1)};
    const std::vector<cd> zs = z ? std::vector<cd>{*z} : default_z;
    const std::string& v = o.verify;
    if (v == "all") {
        checks = run_all(ctx, o.n_max);
    } else if (v == "orthonormality") {
        for (int n = 0; n <= o.n_max; ++n)
            for (int m = 0; m <= o.n_max; ++m) {
                checks.push_back(orthonormality_C(ctx, n, m));
                checks.push_back(orthonormality_R(ctx, n, m));
            }
    } else if (v == "moment") {
        checks.push_back(prudnikov_check(2, 0, 2, ctx.quad));
    } else if (v == "transform") {
        for (cd zz : zs)
            for (int n = 0; n <= o.n_max; ++n) checks.push_back(transform_check(ctx, n, zz));
    } else if (v == "kernel") {
        const cd zk = z.value_or(cd(1, 0.5));
        checks.push_back(kernel_identity_check(ctx, zk));
        checks.push_back(kernel_series_check(ctx, zk, std::conj(zk) * 0.5));
    } else if (v == "reproducing") {
        checks.push_back(reproducing_check(ctx, z.value_or(cd(0.3, 0.2))));
    } else if (v == "mult") {
        for (cd zz : zs)
            for (int n = 0; n <= o.n_max; ++n) {
                auto r = mult_operator_check(ctx, n, zz);
                for (auto* c : {&r.printed, &r.recurrence, &r.raising, &r.lowering, &r.number}) checks.push_back(*c);
            }
    } else if (v == "symmetry") {
        for (int n = 0; n <= o.n_max; ++n)
            for (int m = 0; m <= o.n_max; ++m) checks.push_back(symmetry_check(ctx, n, m));
    } else {
        throw std::invalid_argument("sbmodel: unknown --verify " + v);
    }

    Outcome out;
    out.config = {{"lambda", o.lambda},
                  {"generic", o.generic},
                  {"verify", o.verify},
                  {"n_max", o.n_max},
                  {"z", z ? complex_json(*z) : json(nullptr)},
                  {"radial_nodes", ctx.quad.radial_nodes},
                  {"radial_max_nodes", ctx.quad.radial_max_nodes},
                  {"angular_nodes", ctx.quad.angular_nodes},
                  {"cutoff", ctx.quad.cutoff},
                  {"line_nodes", ctx.quad.panels * ctx.quad.panel_nodes}};
    json arr = json::array();
    std::map<std::string, double> worst;
    std::map<std::string, int> fails;
    int failed = 0;
    out.csv_header = {"check", "lambda", "n", "m", "z_re", "z_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
                      "residual", "tolerance", "pass"};
    for (const auto& c : checks) {
        json j;
        j["name"] = c.name;
        j["lambda"] = c.lambda;
        j["n"] = c.n;
        j["m"] = c.m;
        j["z"] = complex_json(c.z);
        j["lhs"] = complex_json(c.lhs);
        j["rhs"] = complex_json(c.rhs);
        j["residual"] = c.residual;
        j["tolerance"] = c.tolerance;
        j["pass"] = c.pass;
        j["nodes"] = c.nodes;
        if (!c.note.empty()) j["note"] = c.note;
        arr.push_back(j);
        worst[c.name] = std::max(worst[c.name], c.residual);
        fails[c.name] += c.pass ? 0 : 1;
        if (!c.pass) ++failed;
        out.csv_rows.push_back({c.name, num(c.lambda), std::to_string(c.n), std::to_string(c.m), num(c.z.real()),
                                num(c.z.imag()), num(c.lhs.real()), num(c.lhs.imag()), num(c.rhs.real()),
                                num(c.rhs.imag()), num(c.residual), num(c.tolerance), c.pass ? "true" : "false"});
    }
    json summary = json::array();
    for (const auto& [name, r] : worst)
        summary.push_back({{"name", name}, {"max_residual", r}, {"failures", fails[name]}});
    out.results["total"] = checks.size();
    out.results["passed"] = checks.size() - failed;
    out.results["failed"] = failed;
    out.results["summary"] = summary;
    out.results["checks"] = arr;
    out.precision = {{"working_precision", "double; long double for the 1F1 and kernel series"},
                     {"max_estimated_digit_loss", 0}};
    out.exit_code = failed == 0 ? kExitOk : kExitCheckFailed;
    return out;
}

void write_report(std::ostream& os, const std::string& sub, const Common& c, const Outcome& o,
                  std::optional<double> seconds) {
    if (c.format == "csv") {
        for (std::size_t j = 0; j < o.csv_header.size(); ++j) os << (j ? "," : "") << csv_field(o.csv_header[j]);
        os << "\r\n";
        for (const auto& row : o.csv_rows) {
            for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_field(row[j]);
            os << "\r\n";
        }
        return;
    }
    json j;
    j["schema_version"] = kSchemaVersion;
    j["subcommand"] = sub;
    json cfg = o.config;
    cfg["format"] = c.format;
    j["config"] = cfg;
    j["results"] = o.results;
    j["precision_audit"] = o.precision;
    if (seconds) j["timing"] = {{"wall_seconds", *seconds}};
    j["exit_code"] = o.exit_code;
    os << j.dump(2) << "\n";
}

}  // namespace

std::complex<double> parse_complex(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    static const std::string real = R"([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex re_real("^(" + real + ")$");
    static const std::regex re_imag(R"(^([+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)i$)");
    static const std::regex re_both("^(" + real + R"()([+-](?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)i$)");
    auto coef = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return std::stod(t);
    };
    std::smatch m;
    if (std::regex_match(s, m, re_real)) return {std::stod(m[1]), 0.0};
    if (std::regex_match(s, m, re_imag)) return {0.0, coef(m[1])};
    if (std::regex_match(s, m, re_both)) return {std::stod(m[1]), coef(m[2])};
    throw std::invalid_argument("not a complex number: '" + raw + "'");
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("not an integer list: '" + s + "'");
        }
        if (pos != item.size()) throw std::invalid_argument("not an integer list: '" + s + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Squeeze-operator analyses: deficiency indices, C-infinity vectors, truncated exponentials, "
                 "Segal-Bargmann model. Default precision comes from SQUEEZE_DIGITS (else 50)."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("squeeze ") + kSchemaVersion);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--output,-o", common.output, "write the report here instead of stdout");
        sub->add_flag("--timing", common.timing, "add wall-clock timing (breaks byte-identical output)");
    };

    DeficiencyOpts d;
    d.digits = default_digits();
    auto* sd = app.add_subcommand("deficiency", "deficiency indices of the k-th power operator");
    sd->add_option("--k", d.k, "power k >= 1")->required()->check(CLI::Range(1, 1000));
    sd->add_option("--i", d.i, "restrict to block i (default all)");
    sd->add_option("--P", d.P, "recurrence length")->check(CLI::Range(2, 1000000));
    sd->add_option("--digits", d.digits, "working decimal digits")->check(CLI::Range(4, kMaxDigits));
    sd->add_flag("--independent-minus", d.independent_minus, "solve the minus branch directly");
    sd->add_flag("--appendix", d.appendix, "exact appendix inequalities for k..k-max, p <= p-max");
    sd->add_option("--k-max", d.k_max, "largest k for --appendix");
    sd->add_option("--p-max", d.p_max, "largest p for --appendix");
    add_common(sd);

    CinftyOpts c;
    auto* sc = app.add_subcommand("cinfty", "power norms and C-infinity vector classes");
    sc->add_option("--k", c.k, "power k >= 1")->required()->check(CLI::Range(1, 1000));
    sc->add_option("--i", c.i, "block index");
    sc->add_option("--p", c.p, "basis position inside the block");
    sc->add_option("--n-max", c.n_max, "largest power (default 30 table, 1000 analytic, 2000 quasianalytic, 10000 classify)");
    sc->add_option("--t", c.t, "analytic series parameter t > 0");
    sc->add_flag("--quasianalytic", c.quasianalytic, "quasianalytic series");
    sc->add_flag("--classify", c.classify, "classify e_p");
    sc->add_option("--exact-cap", c.exact_cap, "largest n for exact arithmetic");
    add_common(sc);

    ExpOpts e;
    auto* se = app.add_subcommand("expgroup", "truncated exponentials exp(i t A_xi)");
    se->add_option("--k", e.k, "power k >= 1")->required()->check(CLI::Range(1, 1000));
    se->add_option("--theta", e.theta, "phase of xi");
    se->add_option("--t", e.t, "time");
    se->add_option("--xi", e.xi, "|xi|");
    se->add_option("--dims", e.dims, "strictly increasing truncation sizes");
    se->add_option("--w", e.w, "window size");
    se->add_option("--digits", e.digits, "<= 15 double, <= 33 float128");
    se->add_flag("--decomposition-check", e.decomposition, "k = 2 full vs block exponentials");
    se->add_flag("--group-law", e.group_law, "group law, inverse and unitarity at size N");
    se->add_option("--N", e.N, "truncation size for --decomposition-check / --group-law");
    se->add_option("--s", e.s, "second time for --group-law");
    add_common(se);

    SbOpts s;
    auto* ss = app.add_subcommand("sbmodel", "Segal-Bargmann type model identities");
    ss->add_option("--lambda", s.lambda, "1/4 or 3/4 (others need --generic)");
    ss->add_flag("--generic", s.generic, "allow any lambda > 0 (uncertified)");
    ss->add_option("--verify", s.verify, "all|orthonormality|moment|transform|kernel|reproducing|mult|symmetry")
        ->check(CLI::IsMember({"all", "orthonormality", "moment", "transform", "kernel", "reproducing", "mult",
                               "symmetry"}));
    ss->add_option("--n-max", s.n_max, "largest basis index");
    ss->add_option("--z", s.z, "sample point such as 1+0.5i");
    add_common(ss);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::string sub;
    Outcome result;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (sd->parsed()) {
            sub = "deficiency";
            result = cmd_deficiency(d);
        } else if (sc->parsed()) {
            sub = "cinfty";
            result = cmd_cinfty(c);
        } else if (se->parsed()) {
            sub = "expgroup";
            result = cmd_expgroup(e);
        } else {
            sub = "sbmodel";
            result = cmd_sbmodel(s);
        }
    } catch (const NumericalFailure& ex) {
        err << "numerical failure: " << ex.what() << "\n";
        return kExitNumerical;
    } catch (const ResourceLimit& ex) {
        err << "resource limit: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& ex) {
        err << "usage error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& ex) {
        err << "usage error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& ex) {
        err << "numerical failure: " << ex.what() << "\n";
        return kExitNumerical;
    }
    std::optional<double> seconds;
    if (common.timing)
        seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!common.output.empty()) {
        std::ofstream f(common.output, std::ios::binary);
        if (!f) {
            err << "usage error: cannot open " << common.output << "\n";
            return kExitUsage;
        }
        write_report(f, sub, common, result, seconds);
    } else {
        write_report(out, sub, common, result, seconds);
    }
    return result.exit_code;
}

}  // namespace sqz::cli
