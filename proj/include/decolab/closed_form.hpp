#pragma once

// Exact product-form time evolution of reduced density matrices.
//
// Single qubit: a system spin coupled to N environment spins through
// sigma_z sigma_z terms with combined strengths omega_i keeps its diagonal
// fixed while the |0><1| element is multiplied by
//
//   r(t) = prod_i [ cos(2 omega_i t) + (|alpha_i|^2 - |beta_i|^2) i sin(2 omega_i t) ].
//
// Two qubits: under a common action basis the evolution is evaluated in that
// basis (where every coupling is sigma_z-like) and rotated back. Basis state
// |b1 b2> carries z-charge q = z(b1) + z(b2) in the collective case; element
// (k, l) picks up, per environment spin, the factor
// cos(dq omega t) + Delta i sin(dq omega t) with dq = q_k - q_l. The central
// elements |01><10| and |10><01| have dq = 0 and never decay: the pair
// {|01>, |10>} is the decoherence-free subspace.
//
// Phase convention: eigenphases advance as exp(+i E t), matching the +i sin
// in r(t) above; the oracle module uses the same sign.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "spin.hpp"

namespace decolab {

struct EnvSpin {
    double omega = 0.0;  // combined system-spin coupling, rad/time
    QubitState state;    // initial environment-spin state
};

struct EnvironmentSpec {
    std::vector<EnvSpin> spins;
    BasisAngle basis;  // common action basis of all couplings
};

inline void validate_environment(const EnvironmentSpec& env, const char* who) {
    for (const EnvSpin& s : env.spins) {
        if (!is_finite(s.omega))
            throw std::invalid_argument(std::string(who) + ": non-finite coupling");
        validate_state(s.state, who);
    }
}

namespace detail {

inline void require_time(double t, const char* who) {
    if (!std::isfinite(t)) throw std::invalid_argument(std::string(who) + ": non-finite time");
}

inline void require_z_basis(const EnvironmentSpec& env, const char* who) {
    if (env.basis.theta != 0.0)
        throw std::invalid_argument(std::string(who) +
                                    ": closed form requires the common z basis (theta = 0); "
                                    "evolve tilted bases with the oracle");
}

// cos(phi) + Delta i sin(phi): one environment spin's multiplier.
inline cplx coherence_step(double phi, double delta) {
    return {std::cos(phi), delta * std::sin(phi)};
}

}  // namespace detail

inline cplx coherence_factor(const EnvironmentSpec& env, double t) {
    validate_environment(env, "coherence_factor");
    detail::require_z_basis(env, "coherence_factor");
    detail::require_time(t, "coherence_factor");
    cplx r{1.0};
    for (const EnvSpin& s : env.spins) {
        const double delta = std::norm(s.state.alpha) - std::norm(s.state.beta);
        r *= detail::coherence_step(2.0 * s.omega * t, delta);
    }
    return r;
}

inline DensityMatrix single_qubit_rdm(const QubitState& sys, const EnvironmentSpec& env, double t) {
    validate_state(sys, "single_qubit_rdm");
    const cplx r = coherence_factor(env, t);
    DensityMatrix rho(2, 2);
    rho(0, 0) = std::norm(sys.alpha);
    rho(1, 1) = std::norm(sys.beta);
    rho(0, 1) = sys.alpha * std::conj(sys.beta) * r;
    rho(1, 0) = std::conj(rho(0, 1));
    return rho;
}

// Expected residual coherence after n random environment spins: 2^{-n/2}.
inline double average_coherence_estimate(std::size_t n_env) {
    return std::exp2(-static_cast<double>(n_env) / 2.0);
}

struct CoherenceSeries {
    std::vector<double> times;
    std::vector<cplx> values;
    std::size_t n_env = 0;
};

struct TwoQubitEnvSpin {
    double omega_first = 0.0;   // coupling to system qubit 0
    double omega_second = 0.0;  // coupling to system qubit 1
    QubitState state;
};

struct TwoQubitEnvSpec {
    std::vector<TwoQubitEnvSpin> spins;
    BasisAngle basis;
    bool collective = true;  // same coupling to both system qubits
};

// Lift a single-qubit environment to a collective two-qubit one.
inline TwoQubitEnvSpec collective_environment(const EnvironmentSpec& env) {
    TwoQubitEnvSpec out;
    out.basis = env.basis;
    out.collective = true;
    out.spins.reserve(env.spins.size());
    for (const EnvSpin& s : env.spins) out.spins.push_back({s.omega, s.omega, s.state});
    return out;
}

inline void validate_environment(const TwoQubitEnvSpec& env, const char* who) {
    for (const TwoQubitEnvSpin& s : env.spins) {
        if (!is_finite(s.omega_first) || !is_finite(s.omega_second))
            throw std::invalid_argument(std::string(who) + ": non-finite coupling");
        if (env.collective && s.omega_first != s.omega_second)
            throw std::invalid_argument(std::string(who) +
                                        ": collective flag set but per-qubit couplings differ");
        validate_state(s.state, who);
    }
}

namespace detail {

// 4x4 product basis change R (x) R for a real single-qubit rotation R.
inline ComplexMatrix kron_pair(const ComplexMatrix& r) {
    ComplexMatrix k(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            k(i, j) = r(i >> 1, j >> 1) * r(i & 1, j & 1);
    return k;
}

}  // namespace detail

inline DensityMatrix two_qubit_rdm(const TwoQubitState& sys, const TwoQubitEnvSpec& env, double t) {
    validate_state(sys, "two_qubit_rdm");
    validate_environment(env, "two_qubit_rdm");
    detail::require_time(t, "two_qubit_rdm");

    const bool tilted = env.basis.theta != 0.0;
    // Work in the action basis, where every coupling acts as sigma_z.
    const TwoQubitState s = tilted ? rotate_two_qubit(sys, env.basis) : sys;

    const std::size_t n = env.spins.size();
    std::vector<double> delta(n);  // population imbalance in the action basis
    for (std::size_t i = 0; i < n; ++i) {
        const QubitState es = tilted ? to_rotated_basis(env.spins[i].state, env.basis)
                                     : env.spins[i].state;
        delta[i] = std::norm(es.alpha) - std::norm(es.beta);
    }

    // Phase velocity of basis state k, per environment spin: each system
    // qubit contributes its coupling with sign z(bit) = +1 for 0, -1 for 1.
    const auto zsign = [](std::size_t bit) { return bit ? -1.0 : 1.0; };

    DensityMatrix rho(4, 4);
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t l = 0; l < 4; ++l) {
            cplx v = s.amps[k] * std::conj(s.amps[l]);
            for (std::size_t i = 0; i < n; ++i) {
                const TwoQubitEnvSpin& sp = env.spins[i];
                const double ck = sp.omega_first * zsign(k >> 1) + sp.omega_second * zsign(k & 1);
                const double cl = sp.omega_first * zsign(l >> 1) + sp.omega_second * zsign(l & 1);
                v *= detail::coherence_step((ck - cl) * t, delta[i]);
            }
            rho(k, l) = v;
        }

    if (!tilted) return rho;
    const ComplexMatrix r2 = detail::kron_pair(basis_rotation(env.basis));
    return matmul(matmul(r2, rho), adjoint(r2));
}

// Track of the z-basis |01><10| element, normalized by its initial value.
inline CoherenceSeries dfs_coherence(const TwoQubitState& sys, const TwoQubitEnvSpec& env,
                                     const std::vector<double>& times) {
    const cplx c0 = two_qubit_rdm(sys, env, 0.0)(1, 2);
    if (std::abs(c0) < 1e-12)
        throw std::domain_error("dfs_coherence: initial |01><10| element vanishes; "
                                "normalization undefined");
    CoherenceSeries out;
    out.times = times;
    out.n_env = env.spins.size();
    out.values.reserve(times.size());
    for (double t : times) out.values.push_back(two_qubit_rdm(sys, env, t)(1, 2) / c0);
    return out;
}

}  // namespace decolab
