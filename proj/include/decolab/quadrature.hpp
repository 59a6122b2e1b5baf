#pragma once

// Adaptive Gauss-Kronrod quadrature (G7, K15) with an absolute-error target.
// Intervals whose |K15 - G7| estimate exceeds their error budget are bisected,
// each half inheriting half the budget, so the accepted total stays within
// the requested tolerance.

#include <cmath>
#include <stdexcept>
#include <utility>

namespace decolab {

namespace detail {

// 15-point Kronrod extension of 7-point Gauss-Legendre, positive half.
inline constexpr double gk_nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double gk_weights[8] = {
    0.02293532201052922, 0.06309209262997855, 0.10479001032225018, 0.14065325971552592,
    0.16900472663926790, 0.19035057806478540, 0.20443294007529889, 0.20948214108472782};
inline constexpr double g7_weights[4] = {
    0.12948496616886969, 0.27970539148927664, 0.38183005050511894, 0.41795918367346938};

template <class F>
std::pair<double, double> gauss_kronrod_15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(mid);
    double k15 = gk_weights[7] * fc;
    double g7 = g7_weights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = half * gk_nodes[i];
        const double pair_sum = f(mid - x) + f(mid + x);
        k15 += gk_weights[i] * pair_sum;
        if (i % 2 == 1) g7 += g7_weights[i / 2] * pair_sum;
    }
    return {half * k15, half * std::abs(k15 - g7)};
}

template <class F>
double integrate_rec(F&& f, double a, double b, double tol, int depth) {
    const auto [value, err] = gauss_kronrod_15(f, a, b);
    if (err <= tol) return value;
    if (depth == 0)
        throw std::runtime_error("integrate: absolute tolerance not reached");
    const double mid = 0.5 * (a + b);
    return integrate_rec(f, a, mid, 0.5 * tol, depth - 1) +
           integrate_rec(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <class F>
double integrate(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
    if (!(abs_tol > 0.0))
        throw std::invalid_argument("integrate: tolerance must be positive");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("integrate: infinite interval endpoint");
    if (a == b) return 0.0;
    return detail::integrate_rec(f, a, b, abs_tol, max_depth);
}

}  // namespace decolab
