#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace sqz::sbmodel {

using cd = std::complex<double>;

// log Gamma(z), Lanczos (g = 7, 9 terms). Real part accurate to ~1e-14
// relative in |Gamma|; imaginary part only modulo 2 pi.
cd lgamma_complex(cd z);

// |Gamma(lambda + i x)|
double abs_gamma(double lambda, double x);

// K_{n+1/2}(x) for n >= 0 from the terminating series.
double bessel_k_half_integer(int n, double x);

struct QuadratureConfig {
    int radial_nodes = 24;       // starting Gauss-Laguerre count, doubled until agreement
    int radial_max_nodes = 768;
    double radial_tolerance = 1e-10;
    int angular_nodes = 64;      // trapezoid on [0, 2 pi)
    double cutoff = 40;          // real line truncated to [-cutoff, cutoff]
    int panels = 80;
    int panel_nodes = 20;
};

struct SBContext {
    double lambda = 0.25;
    bool extended = false;  // allow lambda outside {1/4, 3/4} (Bessel K from Boost)
    QuadratureConfig quad;

    SBContext() = default;
    explicit SBContext(double lam, bool ext = false);
    void validate() const;
};

double weight_nu(const SBContext& ctx, double r);

// Phi_{lambda,n}(z) = 2^{-lambda} sqrt(2 pi) Gamma(2 lambda) (-i z)^n / sqrt(n! Gamma(n + 2 lambda))
cd basis_phi(double lambda, int n, cd z);
// coefficient of z^n in Phi_{lambda,n}
cd basis_coefficient(double lambda, int n);

// Reproducing kernel via its power series in t conj(tau).
cd kernel_K(double lambda, cd t, cd tau);

// Orthonormal Meixner-Pollaczek functions |Gamma(lambda + i x)| p_n(x), n = 0..n_max.
std::vector<double> mp_functions(double lambda, int n_max, double x);
double mp_function(double lambda, int n, double x);

// 1F1(a; b; w) by its power series in long double.
cd hyp1f1(cd a, double b, cd w);

// G_lambda(x, z) = e^z |Gamma(lambda + i x)| 1F1(lambda + i x; 2 lambda; -2z)
cd transform_kernel_G(double lambda, double x, cd z);

struct RadialIntegral {
    cd value;
    int nodes = 0;
    bool converged = false;
};

// int_0^inf f(r) r nu(r) dr, doubling the Gauss-Laguerre rule until two
// successive values agree.
RadialIntegral integrate_radial(const SBContext& ctx, const std::function<cd(double)>& f);

// int over C of F(z) nu(|z|) dA in polar form.
RadialIntegral integrate_plane(const SBContext& ctx, const std::function<cd(cd)>& F);

struct LineIntegral {
    cd value;
    double tail_estimate = 0;  // |integrand| at the cutoff times 2/pi, both ends
    int nodes = 0;
};

LineIntegral integrate_line(const SBContext& ctx, const std::function<cd(double)>& f);

struct Check {
    std::string name;
    double lambda = 0;
    int n = -1, m = -1;
    cd z{0, 0};
    cd lhs{0, 0}, rhs{0, 0};
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
    int nodes = 0;
    std::string note;
};

Check gamma_reflection_check(double x);
Check prudnikov_check(double alpha, int half_order, double c, const QuadratureConfig& q = {});
Check orthonormality_C(const SBContext& ctx, int n, int m);
Check orthonormality_R(const SBContext& ctx, int n, int m);
Check kernel_series_check(const SBContext& ctx, cd t, cd tau, int N = 60);
Check transform_check(const SBContext& ctx, int n, cd z);
Check kernel_identity_check(const SBContext& ctx, cd z);
Check reproducing_check(const SBContext& ctx, cd z);

struct MultReport {
    Check printed;      // (a) as printed: i(1 - z^2)/(2z) Phi_n
    Check recurrence;   // (a) through the three-term recurrence
    Check raising;      // (b) -i z Phi_n = sqrt((n+1)(n+2l)) Phi_{n+1}
    Check lowering;     // (b) i Phi_n' = sqrt(n/(n+2l-1)) Phi_{n-1}
    Check number;       // (c) z Phi_n' = n Phi_n
};

MultReport mult_operator_check(const SBContext& ctx, int n, cd z);

// (d) <M Phi_n, Phi_m> - <Phi_n, M Phi_m> with M = i(1 - z^2)/(2z), polar quadrature.
Check symmetry_check(const SBContext& ctx, int n, int m);

// Every identity for one lambda, n, m <= n_max, sampled z.
std::vector<Check> run_all(const SBContext& ctx, int n_max = 6);

}  // namespace sqz::sbmodel
