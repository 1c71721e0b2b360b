#include "sqz/expgroup.hpp"

namespace sqz::expgroup {

const char* to_string(Method m) {
    switch (m) {
        case Method::eig_tridiagonal: return "eig-tridiagonal";
        case Method::scaling_squaring: return "scaling-squaring";
    }
    return "?";
}

const char* to_string(Stabilization s) {
    switch (s) {
        case Stabilization::stabilizes: return "stabilizes";
        case Stabilization::does_not_stabilize: return "does-not-stabilize";
        case Stabilization::inconclusive: return "inconclusive";
    }
    return "?";
}

Stabilization stabilization_verdict(const std::vector<double>& d, double noise_floor, double tolerance,
                                    double divergence_floor) {
    if (d.empty()) return Stabilization::inconclusive;
    const std::size_t n = d.size();
    const double last = d.back();
    // last three deltas, i.e. up to two comparisons
    const std::size_t from = n >= 3 ? n - 3 : 0;
    bool nonincreasing = true;
    for (std::size_t j = from + 1; j < n; ++j)
        if (d[j] > d[j - 1] + noise_floor) nonincreasing = false;
    if (last < tolerance && nonincreasing) return Stabilization::stabilizes;
    const bool decays = n >= 2 && last * 10 <= d[from];
    if (last > divergence_floor && !decays) return Stabilization::does_not_stabilize;
    return Stabilization::inconclusive;
}

}  // namespace sqz::expgroup
