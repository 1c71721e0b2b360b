// Serial reference vs OpenMP kernels. On a single-core machine the OpenMP
// numbers measure scheduling overhead only.

#include "sqz/cinfty.hpp"
#include "sqz/kernels.hpp"
#include "sqz/sbmodel.hpp"

#include <benchmark/benchmark.h>

#include <complex>
#include <random>

using namespace sqz;
using cd = std::complex<double>;

namespace {

CMatrix<double> random_matrix(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    CMatrix<double> m(n, n);
    for (auto& z : m.data()) z = {g(rng), g(rng)};
    return m;
}

Matrix<double> random_real(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix<double> m(n, n);
    for (auto& x : m.data()) x = g(rng);
    return m;
}

std::vector<cd> phases(std::size_t n) {
    std::vector<cd> p(n);
    for (std::size_t j = 0; j < n; ++j) p[j] = std::polar(1.0, 0.37 * j);
    return p;
}

template <bool Omp>
void BM_matmul(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    auto a = random_matrix(n, 1), b = random_matrix(n, 2);
    for (auto _ : st) {
        auto c = Omp ? kernels::omp::matmul(a, b) : kernels::serial::matmul(a, b);
        benchmark::DoNotOptimize(c.data().data());
    }
    st.SetComplexityN(st.range(0));
}

template <bool Omp>
void BM_reconstruct(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    auto V = random_real(n, 3);
    auto ph = phases(n);
    for (auto _ : st) {
        auto W = Omp ? kernels::omp::reconstruct(V, ph) : kernels::serial::reconstruct(V, ph);
        benchmark::DoNotOptimize(W.data().data());
    }
}

template <bool Omp>
void BM_jacobi_matvec(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    std::vector<long double> b(n), x(n);
    for (std::size_t j = 0; j < n; ++j) {
        b[j] = std::sqrt((j + 1.0L) * (j + 2.0L));
        x[j] = 1.0L / (j + 1);
    }
    for (auto _ : st) {
        auto y = Omp ? kernels::omp::jacobi_matvec(b, x) : kernels::serial::jacobi_matvec(b, x);
        benchmark::DoNotOptimize(y.data());
    }
}

template <bool Omp>
void BM_weighted_sum(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    std::vector<double> w(n);
    std::vector<cd> f(n);
    for (std::size_t j = 0; j < n; ++j) {
        w[j] = 1.0 / (j + 1);
        f[j] = std::polar(1.0, 0.1 * j);
    }
    for (auto _ : st) {
        cd s = Omp ? kernels::omp::weighted_sum(w, f) : kernels::serial::weighted_sum(w, f);
        benchmark::DoNotOptimize(s);
    }
}

// End-to-end consumers of the OpenMP kernels.
void BM_log_power_norms_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(cinfty::log_power_norms_serial(2, 0, 0, static_cast<int>(st.range(0))));
}
void BM_log_power_norms_omp(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(cinfty::log_power_norms(2, 0, 0, static_cast<int>(st.range(0))));
}

void BM_sb_transform(benchmark::State& st) {
    sbmodel::SBContext ctx(0.25);
    for (auto _ : st) benchmark::DoNotOptimize(sbmodel::transform_check(ctx, 4, {1, 1}));
}

}  // namespace

BENCHMARK(BM_matmul<false>)->Name("matmul/serial")->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_matmul<true>)->Name("matmul/omp")->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_reconstruct<false>)->Name("reconstruct/serial")->Arg(128)->Arg(256);
BENCHMARK(BM_reconstruct<true>)->Name("reconstruct/omp")->Arg(128)->Arg(256);
BENCHMARK(BM_jacobi_matvec<false>)->Name("jacobi_matvec/serial")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_jacobi_matvec<true>)->Name("jacobi_matvec/omp")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_weighted_sum<false>)->Name("weighted_sum/serial")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_weighted_sum<true>)->Name("weighted_sum/omp")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_log_power_norms_serial)->Name("log_power_norms/serial")->Arg(2000);
BENCHMARK(BM_log_power_norms_omp)->Name("log_power_norms/omp")->Arg(2000);
BENCHMARK(BM_sb_transform)->Name("sbmodel_transform/omp_quadrature");

BENCHMARK_MAIN();
