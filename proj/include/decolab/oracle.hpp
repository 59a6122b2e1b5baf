#pragma once

// Brute-force ground truth: assemble the full 2^M x 2^M Hamiltonian, decompose
// it with the Jacobi solver, and propagate the joint state vector directly.
// No time stepping, so there is no integrator error to budget for: any t is
// evaluated in one shot through the eigenphases.
//
// Phase convention: a stationary state with eigenvalue E advances as
// exp(+i E t). With sigma_z sigma_z couplings this puts the factor
// cos(2 omega t) + Delta i sin(2 omega t) on the reduced |0><1| element,
// the same sign the closed-form engine uses.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "closed_form.hpp"
#include "coupling.hpp"
#include "jacobi.hpp"
#include "matrix.hpp"
#include "spin.hpp"

namespace decolab {

inline constexpr std::size_t oracle_max_spins = 14;  // 16384-dim dense cap

struct HamiltonianTerm {
    std::size_t i = 0;
    std::size_t j = 0;
    cplx omega;
    BasisAngle basis_i;
    BasisAngle basis_j;
};

// Each term contributes omega P_i P_j + conj(omega) P_j P_i, with P the
// Pauli operator of the given basis embedded by identity on all other
// factors. Self-interaction (i = j) is excluded.
struct HamiltonianSpec {
    std::size_t n_spins = 0;
    std::vector<HamiltonianTerm> terms;
};

inline ComplexMatrix build_hamiltonian(const HamiltonianSpec& spec) {
    if (spec.n_spins == 0)
        throw std::invalid_argument("build_hamiltonian: need at least one spin");
    if (spec.n_spins > oracle_max_spins)
        throw std::length_error("build_hamiltonian: more than 14 spins exceeds the dense oracle capacity");

    const std::size_t m = spec.n_spins;
    const std::size_t dim = std::size_t{1} << m;
    ComplexMatrix h(dim, dim);

    for (const HamiltonianTerm& term : spec.terms) {
        if (term.i == term.j)
            throw std::invalid_argument("build_hamiltonian: self-interaction term (i = j)");
        if (term.i >= m || term.j >= m)
            throw std::invalid_argument("build_hamiltonian: spin index out of range");
        if (!is_finite(term.omega))
            throw std::invalid_argument("build_hamiltonian: non-finite coupling");

        const ComplexMatrix pi = pauli_operator(term.basis_i);
        const ComplexMatrix pj = pauli_operator(term.basis_j);
        // The site operators commute (disjoint factors), so the Hermitian
        // pair collapses to twice the real part of the coefficient.
        const double w2 = 2.0 * term.omega.real();
        const std::size_t si = m - 1 - term.i;  // factor 0 is the MSB
        const std::size_t sj = m - 1 - term.j;
        const std::size_t clear = ~((std::size_t{1} << si) | (std::size_t{1} << sj));

        for (std::size_t r = 0; r < dim; ++r) {
            const std::size_t bi = (r >> si) & 1u;
            const std::size_t bj = (r >> sj) & 1u;
            for (std::size_t bi2 = 0; bi2 < 2; ++bi2)
                for (std::size_t bj2 = 0; bj2 < 2; ++bj2) {
                    const std::size_t c = (r & clear) | (bi2 << si) | (bj2 << sj);
                    h(r, c) += w2 * pi(bi, bi2) * pj(bj, bj2);
                }
        }
    }

    if (hermiticity_residual(h) > 1e-10)
        throw std::runtime_error("build_hamiltonian: assembled matrix failed the Hermiticity check");
    return h;
}

// Eigendecomposes once; evaluates the state at any time from the eigenphases.
class ExactPropagator {
public:
    explicit ExactPropagator(const ComplexMatrix& h) {
        require_square(h, "ExactPropagator");
        if (hermiticity_residual(h) > 1e-10)
            throw std::invalid_argument("ExactPropagator: Hamiltonian not Hermitian within 1e-10");
        es_ = jacobi_eigensystem(h);
    }

    std::size_t dim() const { return es_.values.size(); }
    const std::vector<double>& eigenvalues() const { return es_.values; }

    std::vector<cplx> state_at(const std::vector<cplx>& psi0, double t) const {
        if (psi0.size() != dim())
            throw std::invalid_argument("ExactPropagator: state dimension mismatch");
        if (std::abs(norm2(psi0) - 1.0) > 1e-12)
            throw std::invalid_argument("ExactPropagator: state not normalized within 1e-12");
        if (!std::isfinite(t))
            throw std::invalid_argument("ExactPropagator: non-finite time");
        std::vector<cplx> phi = adjoint_matvec(es_.vectors, psi0);
        for (std::size_t k = 0; k < phi.size(); ++k)
            phi[k] *= std::polar(1.0, es_.values[k] * t);
        return matvec(es_.vectors, phi);
    }

private:
    EigenSystem es_;
};

inline std::vector<cplx> evolve_exact(const ComplexMatrix& h, const std::vector<cplx>& psi0,
                                      double t) {
    return ExactPropagator(h).state_at(psi0, t);
}

// Marginal of the pure state |psi><psi| over the kept factors, computed
// without materializing the full projector.
inline DensityMatrix oracle_rdm(const std::vector<cplx>& psi, std::vector<std::size_t> keep) {
    const std::size_t m = detail::factor_count(psi.size(), "oracle_rdm");
    if (std::abs(norm2(psi) - 1.0) > 1e-12)
        throw std::invalid_argument("oracle_rdm: state not normalized within 1e-12");
    keep = detail::checked_keep(std::move(keep), m, "oracle_rdm");
    const std::vector<std::size_t> rest = detail::complement(keep, m);

    const std::size_t dk = std::size_t{1} << keep.size();
    const std::size_t dr = std::size_t{1} << rest.size();
    DensityMatrix out(dk, dk);
    for (std::size_t a = 0; a < dk; ++a)
        for (std::size_t b = 0; b < dk; ++b) {
            cplx s{};
            for (std::size_t e = 0; e < dr; ++e)
                s += psi[detail::assemble_index(a, e, keep, rest, m)] *
                     std::conj(psi[detail::assemble_index(b, e, keep, rest, m)]);
            out(a, b) = s;
        }
    return out;
}

// --- spec builders -------------------------------------------------------

// Spin 0 coupled to each environment spin in the common basis. The combined
// coupling omega of the closed form equals twice the term coefficient, so
// terms carry omega / 2.
inline HamiltonianSpec many_to_one_hamiltonian(const EnvironmentSpec& env) {
    validate_environment(env, "many_to_one_hamiltonian");
    HamiltonianSpec spec;
    spec.n_spins = env.spins.size() + 1;
    spec.terms.reserve(env.spins.size());
    for (std::size_t i = 0; i < env.spins.size(); ++i)
        spec.terms.push_back({0, i + 1, env.spins[i].omega / 2.0, env.basis, env.basis});
    return spec;
}

// Two system qubits (factors 0, 1) coupled to each environment spin.
inline HamiltonianSpec collective_pair_hamiltonian(const TwoQubitEnvSpec& env) {
    validate_environment(env, "collective_pair_hamiltonian");
    HamiltonianSpec spec;
    spec.n_spins = env.spins.size() + 2;
    spec.terms.reserve(2 * env.spins.size());
    for (std::size_t i = 0; i < env.spins.size(); ++i) {
        spec.terms.push_back({0, i + 2, env.spins[i].omega_first / 2.0, env.basis, env.basis});
        spec.terms.push_back({1, i + 2, env.spins[i].omega_second / 2.0, env.basis, env.basis});
    }
    return spec;
}

// Every pair of spins coupled with the corresponding matrix entry; the
// diagonal is ignored (no self-interaction). Combined pair coupling is
// 2 Re(c_ij), matching the coupling-matrix convention.
inline HamiltonianSpec all_to_all_hamiltonian(const CouplingMatrix& c, BasisAngle basis) {
    validate_coupling(c, "all_to_all_hamiltonian");
    HamiltonianSpec spec;
    spec.n_spins = c.rows();
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = i + 1; j < c.cols(); ++j)
            spec.terms.push_back({i, j, c(i, j), basis, basis});
    return spec;
}

// Tensor products, factor 0 leftmost.
inline std::vector<cplx> product_state(const std::vector<QubitState>& factors) {
    std::vector<cplx> v{1.0};
    for (const QubitState& f : factors) {
        std::vector<cplx> next(v.size() * 2);
        for (std::size_t i = 0; i < v.size(); ++i) {
            next[2 * i] = v[i] * f.alpha;
            next[2 * i + 1] = v[i] * f.beta;
        }
        v = std::move(next);
    }
    return v;
}

inline std::vector<cplx> product_state(const QubitState& sys, const EnvironmentSpec& env) {
    std::vector<QubitState> factors{sys};
    for (const EnvSpin& s : env.spins) factors.push_back(s.state);
    return product_state(factors);
}

inline std::vector<cplx> product_state(const TwoQubitState& sys, const TwoQubitEnvSpec& env) {
    std::vector<cplx> v(sys.amps.begin(), sys.amps.end());
    for (const TwoQubitEnvSpin& s : env.spins) {
        std::vector<cplx> next(v.size() * 2);
        for (std::size_t i = 0; i < v.size(); ++i) {
            next[2 * i] = v[i] * s.state.alpha;
            next[2 * i + 1] = v[i] * s.state.beta;
        }
        v = std::move(next);
    }
    return v;
}

}  // namespace decolab
