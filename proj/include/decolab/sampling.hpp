#pragma once

// Random environment construction. Couplings are Gaussian with mean 0 and
// standard deviation sqrt(2 * lam), matching the bath density whose variance
// is 2 * lam. Two amplitude protocols:
//
//   complex_square: alpha and beta drawn uniformly from the complex square
//                   [-1,1] + [-1,1] i, then normalized (redrawn in the rare
//                   case the pre-normalization norm is below 1e-6);
//   real_unit:      alpha uniform in [0, 1], beta = sqrt(1 - alpha^2).
//
// The draw order per spin is fixed (coupling first, then amplitudes) and is
// part of the determinism contract.

#include <cstddef>
#include <stdexcept>
#include <string>

#include "closed_form.hpp"
#include "rng.hpp"

namespace decolab {

enum class SamplingMode { complex_square, real_unit };

inline const char* to_string(SamplingMode m) {
    return m == SamplingMode::complex_square ? "complex_square" : "real_unit";
}

inline SamplingMode sampling_from_string(const std::string& s) {
    if (s == "complex_square") return SamplingMode::complex_square;
    if (s == "real_unit") return SamplingMode::real_unit;
    throw std::invalid_argument("sampling mode must be complex_square or real_unit, got '" + s + "'");
}

inline QubitState sample_qubit_state(SplitMix64& rng, SamplingMode mode) {
    if (mode == SamplingMode::real_unit) {
        const double a = rng.uniform01();
        return {a, std::sqrt(1.0 - a * a)};
    }
    for (int attempt = 0; attempt < 64; ++attempt) {
        const cplx alpha{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const cplx beta{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
        if (n < 1e-6) continue;
        return {alpha / n, beta / n};
    }
    throw std::runtime_error("sample_qubit_state: degenerate draws exhausted the retry budget");
}

inline EnvironmentSpec sample_environment(SplitMix64& rng, std::size_t n, SamplingMode mode,
                                          double lam) {
    if (!(lam > 0.0) || !std::isfinite(lam))
        throw std::domain_error("sample_environment: lam must be positive and finite");
    const double sd = std::sqrt(2.0 * lam);
    EnvironmentSpec env;
    env.spins.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        EnvSpin spin;
        spin.omega = rng.gaussian(0.0, sd);
        spin.state = sample_qubit_state(rng, mode);
        env.spins.push_back(spin);
    }
    return env;
}

}  // namespace decolab
