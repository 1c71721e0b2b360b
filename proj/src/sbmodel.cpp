#include "sqz/sbmodel.hpp"

#include "sqz/kernels.hpp"
#include "sqz/orthopoly.hpp"
#include "sqz/precision.hpp"
#include "sqz/tridiag.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sqz::sbmodel {

namespace {

constexpr double kPi = std::numbers::pi;
using cld = std::complex<long double>;

bool is_quarter(double lambda) { return lambda == 0.25; }
bool is_three_quarter(double lambda) { return lambda == 0.75; }

// exponent of r in r nu(r) near 0
double radial_alpha(double lambda) { return 2 * lambda - std::abs(2 * lambda - 1); }

// r nu(r) / (r^alpha e^{-2r}); constant for the two closed forms
double radial_h(const SBContext& ctx, double r) {
    if (is_quarter(ctx.lambda)) return 1.0 / (std::sqrt(2.0) * std::pow(kPi, 2.5));
    if (is_three_quarter(ctx.lambda)) return std::pow(2.0, 2.5) * std::pow(kPi, -2.5);
    if (2 * r > 650) return 0.0;
    const double a = radial_alpha(ctx.lambda);
    return r * weight_nu(ctx, r) * std::exp(2 * r) / std::pow(r, a);
}

const linalg::GaussRule<double>& laguerre_rule(int n, double alpha) {
    static std::mutex mu;
    static std::map<std::pair<int, double>, linalg::GaussRule<double>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, alpha);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, linalg::gauss_laguerre<double>(n, alpha, std::tgamma(alpha + 1))).first;
    return it->second;
}

cd radial_sum(const SBContext& ctx, const std::function<cd(double)>& f, int n) {
    const double a = radial_alpha(ctx.lambda);
    const auto& rule = laguerre_rule(n, a);
    const double scale = std::pow(2.0, -a - 1);
    std::vector<double> w(rule.nodes.size());
    std::vector<cd> vals(rule.nodes.size());
    const long nn = static_cast<long>(rule.nodes.size());
#pragma omp parallel for schedule(dynamic)
    for (long j = 0; j < nn; ++j) {
        const double r = rule.nodes[j] / 2;
        w[j] = rule.weights[j] * scale * radial_h(ctx, r);
        vals[j] = w[j] == 0 ? cd(0) : f(r);
    }
    return kernels::omp::weighted_sum(w, vals);
}

double rel_residual(cd a, cd b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Check make_check(std::string name, const SBContext& ctx, int n, int m, cd z, cd lhs, cd rhs, double tol) {
    Check c;
    c.name = std::move(name);
    c.lambda = ctx.lambda;
    c.n = n;
    c.m = m;
    c.z = z;
    c.lhs = lhs;
    c.rhs = rhs;
    c.residual = rel_residual(lhs, rhs);
    c.tolerance = tol;
    c.pass = c.residual <= tol;
    return c;
}

const linalg::GaussRule<double>& legendre_rule(int n) {
    static std::mutex mu;
    static std::map<int, linalg::GaussRule<double>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, linalg::gauss_legendre<double>(n)).first;
    return it->second;
}

void require_pole_distance(cd z) {
    if (std::abs(z) < 1e-3) throw std::invalid_argument("multiplication check: |z| < 1e-3 is too close to the pole at 0");
}

}  // namespace

cd lgamma_complex(cd z) {
    static const double g = 7;
    static const double p[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                               771.32342877765313,   -176.61502916214059,   12.507343278686905,
                               -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() <= 0 && z.imag() == 0 && z.real() == std::floor(z.real()))
        throw std::domain_error("lgamma_complex: pole");
    if (z.real() < 0) {
        // reflection
        return std::log(kPi) - std::log(std::sin(kPi * z)) - lgamma_complex(1.0 - z);
    }
    cd shift(0);
    while (z.real() < 0.5) {
        shift -= std::log(z);
        z += 1.0;
    }
    z -= 1.0;
    cd x = p[0];
    for (int i = 1; i < 9; ++i) x += p[i] / (z + double(i));
    const cd t = z + g + 0.5;
    return shift + 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

double abs_gamma(double lambda, double x) { return std::exp(lgamma_complex(cd(lambda, x)).real()); }

double bessel_k_half_integer(int n, double x) {
    if (n < 0) throw std::invalid_argument("bessel_k_half_integer: order index must be >= 0");
    if (!(x > 0)) throw std::invalid_argument("bessel_k_half_integer: x must be > 0");
    // sum_j (n+j)! / (j! (n-j)!) (2x)^{-j}
    double s = 0, term = 1;
    for (int j = 0; j <= n; ++j) {
        if (j > 0) term *= double(n + j) * double(n - j + 1) / (double(j) * 2 * x);
        s += term;
    }
    return std::sqrt(kPi / (2 * x)) * std::exp(-x) * s;
}

SBContext::SBContext(double lam, bool ext) : lambda(lam), extended(ext) { validate(); }

void SBContext::validate() const {
    if (!(lambda > 0)) throw std::invalid_argument("sbmodel: lambda must be > 0");
    if (!extended && !is_quarter(lambda) && !is_three_quarter(lambda))
        throw std::invalid_argument("sbmodel: lambda must be 1/4 or 3/4 (use extended mode for other values)");
    if (quad.radial_nodes < 2 || quad.radial_max_nodes < quad.radial_nodes)
        throw std::invalid_argument("sbmodel: bad radial node counts");
    if (quad.angular_nodes < 4) throw std::invalid_argument("sbmodel: angular nodes must be >= 4");
    if (!(quad.cutoff > 0) || quad.panels < 1 || quad.panel_nodes < 2)
        throw std::invalid_argument("sbmodel: bad real-line quadrature");
}

double weight_nu(const SBContext& ctx, double r) {
    if (!(r > 0)) throw std::invalid_argument("weight_nu: r must be > 0");
    const double l = ctx.lambda;
    if (is_quarter(l)) return std::exp(-2 * r) / (std::sqrt(2.0) * std::pow(kPi, 2.5) * r);
    if (is_three_quarter(l)) return std::pow(2.0, 2.5) * std::pow(kPi, -2.5) * std::exp(-2 * r);
    if (!ctx.extended) throw std::invalid_argument("weight_nu: lambda outside {1/4, 3/4} needs extended mode");
    const double pre = std::pow(std::pow(2.0, l) / (kPi * std::tgamma(2 * l)), 2);
    return pre * std::pow(r, 2 * l - 1) * boost::math::cyl_bessel_k(2 * l - 1, 2 * r);
}

cd basis_coefficient(double lambda, int n) {
    if (n < 0) throw std::invalid_argument("basis_phi: n must be >= 0");
    const double logmag = -lambda * std::log(2.0) + 0.5 * std::log(2 * kPi) + std::lgamma(2 * lambda) -
                          0.5 * (std::lgamma(n + 1.0) + std::lgamma(n + 2 * lambda));
    static const cd pow_mi[4] = {cd(1, 0), cd(0, -1), cd(-1, 0), cd(0, 1)};
    return std::exp(logmag) * pow_mi[n % 4];
}

cd basis_phi(double lambda, int n, cd z) {
    if (n == 0) return basis_coefficient(lambda, 0);
    return basis_coefficient(lambda, n) * std::pow(z, n);
}

cd kernel_K(double lambda, cd t, cd tau) {
    const cld w = cld(t) * std::conj(cld(tau));
    const long double l = lambda;
    const long double pre = 2 * std::numbers::pi_v<long double> / std::pow(2.0L, 2 * l) * std::pow(std::tgamma(2 * l), 2);
    // sum_m w^m / (m! Gamma(m + 2 lambda))
    cld term = 1.0L / std::tgamma(2 * l);
    cld s = term;
    for (int m = 0; m < 100000; ++m) {
        term *= w / ((m + 1.0L) * (m + 2 * l));
        s += term;
        if (std::abs(term) <= 1e-21L * std::abs(s) && std::abs(w) < (m + 1.0L) * (m + 2 * l)) break;
    }
    return cd(pre * s);
}

std::vector<double> mp_functions(double lambda, int n_max, double x) {
    auto p = orthopoly::meixner_pollaczek_sequence<double>(lambda, n_max, cd(x, 0), true);
    const double g = abs_gamma(lambda, x);
    std::vector<double> out(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) out[j] = g * p[j].real();
    return out;
}

double mp_function(double lambda, int n, double x) { return mp_functions(lambda, n, x).back(); }

cd hyp1f1(cd a, double b, cd w) {
    const cld A(a), W(w);
    const long double B = b;
    cld term = 1, s = 1;
    for (int n = 0; n < 20000; ++n) {
        term *= (A + (long double)n) * W / ((B + n) * (n + 1.0L));
        s += term;
        const long double ratio = std::abs((A + (long double)(n + 1)) * W) / ((B + n + 1) * (n + 2.0L));
        if (ratio < 0.5L && std::abs(term) <= 1e-21L * std::abs(s)) return cd(s);
        if (term == cld(0)) return cd(s);
    }
    throw NumericalFailure("hyp1f1: series stagnation");
}

cd transform_kernel_G(double lambda, double x, cd z) {
    const double g = abs_gamma(lambda, x);
    if (z.real() > 0) return g * std::exp(-z) * hyp1f1(cd(lambda, -x), 2 * lambda, 2.0 * z);
    return g * std::exp(z) * hyp1f1(cd(lambda, x), 2 * lambda, -2.0 * z);
}

RadialIntegral integrate_radial(const SBContext& ctx, const std::function<cd(double)>& f) {
    ctx.validate();
    RadialIntegral out;
    int n = ctx.quad.radial_nodes;
    cd prev = radial_sum(ctx, f, n);
    while (2 * n <= ctx.quad.radial_max_nodes) {
        n *= 2;
        cd cur = radial_sum(ctx, f, n);
        out.value = cur;
        out.nodes = n;
        if (std::abs(cur - prev) <= ctx.quad.radial_tolerance * std::max(1.0, std::abs(cur))) {
            out.converged = true;
            return out;
        }
        prev = cur;
    }
    out.value = prev;
    out.nodes = n;
    return out;
}

RadialIntegral integrate_plane(const SBContext& ctx, const std::function<cd(cd)>& F) {
    const int M = ctx.quad.angular_nodes;
    std::vector<cd> phases(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) phases[j] = std::polar(1.0, 2 * kPi * j / M);
    return integrate_radial(ctx, [&](double r) {
        cd s(0);
        for (int j = 0; j < M; ++j) s += F(r * phases[j]);
        return s * (2 * kPi / M);
    });
}

LineIntegral integrate_line(const SBContext& ctx, const std::function<cd(double)>& f) {
    ctx.validate();
    const auto& q = ctx.quad;
    const auto& rule = legendre_rule(q.panel_nodes);
    const double X = q.cutoff, h = 2 * X / q.panels;
    const std::size_t total = static_cast<std::size_t>(q.panels) * rule.nodes.size();
    std::vector<double> w(total);
    std::vector<cd> vals(total);
    const long np = q.panels;
#pragma omp parallel for schedule(static)
    for (long p = 0; p < np; ++p) {
        const double mid = -X + (p + 0.5) * h;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const std::size_t idx = static_cast<std::size_t>(p) * rule.nodes.size() + j;
            w[idx] = rule.weights[j] * h / 2;
            vals[idx] = f(mid + rule.nodes[j] * h / 2);
        }
    }
    LineIntegral out;
    out.value = kernels::omp::weighted_sum(w, vals);
    out.tail_estimate = (std::abs(f(X)) + std::abs(f(-X))) / kPi;
    out.nodes = static_cast<int>(total);
    return out;
}

Check gamma_reflection_check(double x) {
    SBContext ctx;
    const double g = abs_gamma(0.5, x);
    Check c = make_check("gamma_reflection", ctx, -1, -1, cd(x, 0), g * g, kPi / std::cosh(kPi * x), 1e-12);
    c.lambda = 0.5;
    // relative, plus |Gamma(l + ix)| = |Gamma(l - ix)| at l = 1/4
    const double rel = std::abs(c.lhs - c.rhs) / std::abs(c.rhs);
    const double asym = std::abs(abs_gamma(0.25, x) - abs_gamma(0.25, -x)) / abs_gamma(0.25, x);
    c.residual = std::max(rel, asym);
    c.pass = c.residual <= c.tolerance;
    return c;
}

Check prudnikov_check(double alpha, int half_order, double c, const QuadratureConfig& q) {
    // nu = half_order + 1/2; the integrand is s^{alpha-1-nu} e^{-s} times a
    // polynomial in s after s = c x, so generalized Gauss-Laguerre is exact.
    const double nu = half_order + 0.5;
    if (half_order < 0) throw std::invalid_argument("prudnikov_check: half_order must be >= 0");
    if (!(alpha > nu)) throw std::invalid_argument("prudnikov_check: need alpha > |nu|");
    if (!(c > 0)) throw std::invalid_argument("prudnikov_check: need c > 0");
    const double beta = alpha - 1 - nu;
    const int n = std::max(q.radial_nodes, half_order + 2);
    const auto& rule = laguerre_rule(n, beta);
    double quad = 0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double s = rule.nodes[j];
        // x^{alpha-1} K(c x) dx = c^{-alpha} s^{alpha-1} K(s) ds; divide out s^beta e^{-s}
        const double f = std::pow(s, alpha - 1 - beta) * std::exp(s) * bessel_k_half_integer(half_order, s);
        quad += rule.weights[j] * f;
    }
    quad *= std::pow(c, -alpha);
    const double closed =
        std::pow(2.0, alpha - 2) * std::pow(c, -alpha) * std::tgamma((alpha + nu) / 2) * std::tgamma((alpha - nu) / 2);
    SBContext ctx;
    Check out = make_check("prudnikov_moment", ctx, half_order, -1, cd(c, 0), quad, closed, 1e-10);
    out.lambda = alpha;
    out.nodes = n;
    return out;
}

Check orthonormality_C(const SBContext& ctx, int n, int m) {
    if (n < 0 || m < 0) throw std::invalid_argument("orthonormality_C: n, m must be >= 0");
    cd value(0);
    Check c;
    int nodes = 0;
    bool converged = true;
    if (n == m) {
        // angular integral of |z|^{2n} is 2 pi
        const double cn = std::norm(basis_coefficient(ctx.lambda, n));
        auto rad = integrate_radial(ctx, [&](double r) { return cd(std::pow(r, 2 * n)); });
        value = 2 * kPi * cn * rad.value;
        nodes = rad.nodes;
        converged = rad.converged;
    }
    c = make_check("orthonormality_C", ctx, n, m, cd(0), value, n == m ? 1.0 : 0.0, 1e-8);
    c.nodes = nodes;
    if (!converged) {
        c.pass = false;
        c.note = "radial quadrature did not converge at " + std::to_string(nodes) + " nodes";
    }
    return c;
}

Check orthonormality_R(const SBContext& ctx, int n, int m) {
    if (n < 0 || m < 0) throw std::invalid_argument("orthonormality_R: n, m must be >= 0");
    const int top = std::max(n, m);
    auto li = integrate_line(ctx, [&](double x) {
        auto p = mp_functions(ctx.lambda, top, x);
        return cd(p[n] * p[m]);
    });
    Check c = make_check("orthonormality_R", ctx, n, m, cd(0), li.value, n == m ? 1.0 : 0.0, 1e-8);
    c.nodes = li.nodes;
    if (li.tail_estimate > 1e-10) c.note = "tail estimate " + std::to_string(li.tail_estimate) + " exceeds 1e-10";
    return c;
}

Check kernel_series_check(const SBContext& ctx, cd t, cd tau, int N) {
    cd s(0);
    for (int n = 0; n <= N; ++n) s += basis_phi(ctx.lambda, n, t) * std::conj(basis_phi(ctx.lambda, n, tau));
    Check c = make_check("kernel_series", ctx, N, -1, t, kernel_K(ctx.lambda, t, tau), s, 1e-10);
    return c;
}

Check transform_check(const SBContext& ctx, int n, cd z) {
    auto li = integrate_line(ctx, [&](double x) {
        return transform_kernel_G(ctx.lambda, x, z) * mp_function(ctx.lambda, n, x);
    });
    Check c = make_check("transform", ctx, n, -1, z, li.value, basis_phi(ctx.lambda, n, z), 1e-6);
    c.nodes = li.nodes;
    if (li.tail_estimate > 1e-8) c.note = "tail estimate " + std::to_string(li.tail_estimate);
    return c;
}

Check kernel_identity_check(const SBContext& ctx, cd z) {
    auto li = integrate_line(ctx, [&](double x) { return cd(std::norm(transform_kernel_G(ctx.lambda, x, z))); });
    Check c = make_check("kernel_identity", ctx, -1, -1, z, li.value, kernel_K(ctx.lambda, z, z), 1e-6);
    c.nodes = li.nodes;
    if (li.tail_estimate > 1e-8) c.note = "tail estimate " + std::to_string(li.tail_estimate);
    return c;
}

Check reproducing_check(const SBContext& ctx, cd z) {
    // f = sum_{j<=5} a_j Phi_j with fixed coefficients
    std::vector<cd> a;
    for (int j = 0; j <= 5; ++j) a.emplace_back(1.0 / (j + 1), 0.5 - 0.2 * j);
    auto f = [&](cd w) {
        cd s(0);
        for (int j = 0; j <= 5; ++j) s += a[j] * basis_phi(ctx.lambda, j, w);
        return s;
    };
    auto pi = integrate_plane(ctx, [&](cd w) { return kernel_K(ctx.lambda, z, w) * f(w); });
    Check c = make_check("reproducing", ctx, 5, -1, z, pi.value, f(z), 1e-6);
    c.nodes = pi.nodes;
    if (!pi.converged) {
        c.pass = false;
        c.note = "radial quadrature did not converge at " + std::to_string(pi.nodes) + " nodes";
    }
    return c;
}

namespace {

// Monomial c z^d; enough for the ladder relations on the basis.
struct Monomial {
    cd coeff;
    int degree;
};

Monomial phi_monomial(double lambda, int n) { return {basis_coefficient(lambda, n), n}; }
Monomial times_z(Monomial m, cd factor) { return {m.coeff * factor, m.degree + 1}; }
Monomial derivative(Monomial m) {
    if (m.degree == 0) return {cd(0), 0};
    return {m.coeff * double(m.degree), m.degree - 1};
}

Check compare_monomials(std::string name, const SBContext& ctx, int n, Monomial lhs, Monomial rhs) {
    Check c;
    c.name = std::move(name);
    c.lambda = ctx.lambda;
    c.n = n;
    c.lhs = lhs.coeff;
    c.rhs = rhs.coeff;
    const bool zero_l = lhs.coeff == cd(0), zero_r = rhs.coeff == cd(0);
    if (zero_l && zero_r) c.residual = 0;
    else if (lhs.degree != rhs.degree) c.residual = std::abs(lhs.coeff - rhs.coeff) + 1;
    else c.residual = std::abs(lhs.coeff - rhs.coeff) / std::max(std::abs(lhs.coeff), std::abs(rhs.coeff));
    c.tolerance = 1e-14;
    c.pass = c.residual <= c.tolerance;
    return c;
}

}  // namespace

MultReport mult_operator_check(const SBContext& ctx, int n, cd z) {
    if (n < 0) throw std::invalid_argument("mult_operator_check: n must be >= 0");
    require_pole_distance(z);
    const double l = ctx.lambda;
    MultReport rep;

    auto li = integrate_line(ctx, [&](double x) { return transform_kernel_G(l, x, z) * x * mp_function(l, n, x); });
    const cd printed = cd(0, 1) * (1.0 - z * z) / (2.0 * z) * basis_phi(l, n, z);
    cd recur = 0.5 * std::sqrt((n + 1) * (n + 2 * l)) * basis_phi(l, n + 1, z);
    if (n > 0) recur += 0.5 * std::sqrt(n * (n + 2 * l - 1)) * basis_phi(l, n - 1, z);
    rep.printed = make_check("mult_image_printed", ctx, n, -1, z, li.value, printed, 1e-6);
    rep.recurrence = make_check("mult_image_recurrence", ctx, n, -1, z, li.value, recur, 1e-6);
    rep.printed.nodes = rep.recurrence.nodes = li.nodes;

    const Monomial phi = phi_monomial(l, n);
    Monomial raise_rhs = phi_monomial(l, n + 1);
    raise_rhs.coeff *= std::sqrt((n + 1) * (n + 2 * l));
    rep.raising = compare_monomials("ladder_raising", ctx, n, times_z(phi, cd(0, -1)), raise_rhs);

    Monomial lower_lhs = derivative(phi);
    lower_lhs.coeff *= cd(0, 1);
    Monomial lower_rhs{cd(0), 0};
    if (n > 0) {
        lower_rhs = phi_monomial(l, n - 1);
        lower_rhs.coeff *= std::sqrt(n / (n + 2 * l - 1));
    }
    rep.lowering = compare_monomials("ladder_lowering", ctx, n, lower_lhs, lower_rhs);

    Monomial num_lhs = times_z(derivative(phi), cd(1));
    if (n == 0) num_lhs = {cd(0), 0};
    Monomial num_rhs{phi.coeff * double(n), n};
    rep.number = compare_monomials("number_operator", ctx, n, num_lhs, num_rhs);
    for (Check* c : {&rep.raising, &rep.lowering, &rep.number}) c->z = z;
    return rep;
}

Check symmetry_check(const SBContext& ctx, int n, int m) {
    if (n < 0 || m < 0) throw std::invalid_argument("symmetry_check: n, m must be >= 0");
    const double l = ctx.lambda;
    auto M = [](cd z) { return cd(0, 1) * (1.0 - z * z) / (2.0 * z); };
    auto lhs = integrate_plane(ctx, [&](cd z) { return M(z) * basis_phi(l, n, z) * std::conj(basis_phi(l, m, z)); });
    auto rhs = integrate_plane(ctx, [&](cd z) { return basis_phi(l, n, z) * std::conj(M(z) * basis_phi(l, m, z)); });
    Check c = make_check("mult_symmetry", ctx, n, m, cd(0), lhs.value, rhs.value, 1e-8);
    c.nodes = std::max(lhs.nodes, rhs.nodes);
    if (!lhs.converged || !rhs.converged) {
        c.pass = false;
        c.note = "radial quadrature did not converge";
    }
    return c;
}

std::vector<Check> run_all(const SBContext& ctx, int n_max) {
    ctx.validate();
    if (n_max < 0) throw std::invalid_argument("run_all: n_max must be >= 0");
    std::vector<Check> out;
    out.push_back(gamma_reflection_check(0.7));
    out.push_back(prudnikov_check(2, 0, 2, ctx.quad));
    for (int n = 0; n <= n_max; ++n)
        for (int m = 0; m <= n_max; ++m) out.push_back(orthonormality_C(ctx, n, m));
    for (int n = 0; n <= n_max; ++n)
        for (int m = 0; m <= n_max; ++m) out.push_back(orthonormality_R(ctx, n, m));
    out.push_back(kernel_series_check(ctx, cd(1.2, -0.7), cd(-0.4, 1.5)));
    for (cd z : {cd(0.5, 0), cd(1, 1)})
        for (int n = 0; n <= n_max; ++n) out.push_back(transform_check(ctx, n, z));
    out.push_back(kernel_identity_check(ctx, cd(1, 0.5)));
    out.push_back(reproducing_check(ctx, cd(0.3, 0.2)));
    for (cd z : {cd(0.5, 0), cd(1, 1)})
        for (int n = 0; n <= n_max; ++n) {
            auto r = mult_operator_check(ctx, n, z);
            for (auto* c : {&r.printed, &r.recurrence, &r.raising, &r.lowering, &r.number}) out.push_back(*c);
        }
    for (int n = 0; n <= n_max; ++n)
        for (int m = 0; m <= n_max; ++m) out.push_back(symmetry_check(ctx, n, m));
    return out;
}

}  // namespace sqz::sbmodel
