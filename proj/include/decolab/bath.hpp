#pragma once

// Infinite-environment limit: couplings drawn from the normalized density
// (1 / sqrt(4 pi lam)) exp(-omega^2 / 4 lam), whose variance is 2 lam. The
// mean coupling magnitude is sqrt(lam / pi) and the off-diagonal element of
// the reduced state damps as exp(-4 lam t^2), monotonically; revivals are
// strictly a finite-environment phenomenon.
//
// The same functional law appears twice with independent width parameters
// (the raw lam of the coupling density and the transformed variance mu);
// BathParams carries both.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "matrix.hpp"
#include "spin.hpp"

namespace decolab {

struct BathParams {
    double lam = 0.0;  // coupling-density width; distribution variance = 2*lam
    double mu = 0.0;   // transformed variance driving the same damping law
};

inline void validate_bath(const BathParams& p) {
    if (!(p.lam > 0.0) || !std::isfinite(p.lam))
        throw std::domain_error("BathParams: lam must be positive and finite");
    if (!(p.mu > 0.0) || !std::isfinite(p.mu))
        throw std::domain_error("BathParams: mu must be positive and finite");
}

namespace detail {

inline void require_width(double lam, const char* who) {
    if (!(lam > 0.0) || !std::isfinite(lam))
        throw std::domain_error(std::string(who) + ": width parameter must be positive and finite");
}

}  // namespace detail

// Mean |omega| of the coupling density: sqrt(lam / pi).
inline double mean_abs_coupling(double lam) {
    detail::require_width(lam, "mean_abs_coupling");
    return std::sqrt(lam / std::numbers::pi);
}

// Residual coherence of the infinite bath: exp(-4 lam t^2).
inline double analytic_coherence(double t, double lam) {
    detail::require_width(lam, "analytic_coherence");
    if (!std::isfinite(t))
        throw std::invalid_argument("analytic_coherence: non-finite time");
    return std::exp(-4.0 * lam * t * t);
}

// Dephasing channel of the infinite bath: diagonal untouched, off-diagonals
// damped by exp(-4 lam t^2). Trace, Hermiticity and positivity are preserved
// for every (lam, t).
inline DensityMatrix operator_sum_rdm(const DensityMatrix& rho0, double lam, double t) {
    if (rho0.rows() != 2 || rho0.cols() != 2)
        throw std::invalid_argument("operator_sum_rdm: expected a 2x2 density matrix");
    validate_density(rho0, "operator_sum_rdm");
    const double damp = analytic_coherence(t, lam);
    DensityMatrix rho = rho0;
    rho(0, 1) *= damp;
    rho(1, 0) *= damp;
    return rho;
}

}  // namespace decolab
