#pragma once

// Spin states, Pauli operators in a tilted basis, density matrices, partial
// trace, and Bell-basis rotations.
//
// Conventions, fixed project-wide:
//   - Tensor factor 0 is the leftmost ket symbol, i.e. the most significant
//     bit of a basis index: |b0 b1 ... b_{M-1}> has index sum(b_f << (M-1-f)).
//   - A basis angle theta names the spin direction in the x-z plane (phi = 0):
//     sigma_theta = sin(theta) sigma_x + cos(theta) sigma_z, with +1
//     eigenvector R(theta)|0> = cos(theta/2)|0> + sin(theta/2)|1>.
//   - rotate_two_qubit returns the coefficients of the same state expressed
//     in the rotated product basis (a passive transform, R(theta)^dagger on
//     each factor). The symmetric Bell state (|01>+|10>)/sqrt(2) becomes
//     (sin t, cos t, cos t, -sin t)/sqrt(2); the antisymmetric one is
//     invariant for every angle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace decolab {

struct QubitState {
    cplx alpha;  // amplitude of |0>
    cplx beta;   // amplitude of |1>
};

struct TwoQubitState {
    std::array<cplx, 4> amps;  // ordered |00>, |01>, |10>, |11>
};

struct BasisAngle {
    double theta = 0.0;  // radians; 0 = z, pi/2 = x
};

inline void validate_state(const QubitState& s, const char* who) {
    if (!is_finite(s.alpha) || !is_finite(s.beta))
        throw std::invalid_argument(std::string(who) + ": non-finite amplitude");
    const double n = std::norm(s.alpha) + std::norm(s.beta);
    if (std::abs(n - 1.0) > 1e-12)
        throw std::invalid_argument(std::string(who) + ": state not normalized within 1e-12");
}

inline void validate_state(const TwoQubitState& s, const char* who) {
    double n = 0.0;
    for (const cplx& a : s.amps) {
        if (!is_finite(a))
            throw std::invalid_argument(std::string(who) + ": non-finite amplitude");
        n += std::norm(a);
    }
    if (std::abs(n - 1.0) > 1e-12)
        throw std::invalid_argument(std::string(who) + ": state not normalized within 1e-12");
}

// sigma_theta = sin(theta) sigma_x + cos(theta) sigma_z: Hermitian, traceless,
// involutive for every real theta.
inline ComplexMatrix pauli_operator(BasisAngle angle) {
    ComplexMatrix m(2, 2);
    m(0, 0) = std::cos(angle.theta);
    m(0, 1) = std::sin(angle.theta);
    m(1, 0) = std::sin(angle.theta);
    m(1, 1) = -std::cos(angle.theta);
    return m;
}

// R(theta): columns are the theta-basis kets written in the z-basis, so
// sigma_theta = R sigma_z R^dagger. Real because phi = 0.
inline ComplexMatrix basis_rotation(BasisAngle angle) {
    const double c = std::cos(angle.theta / 2.0);
    const double s = std::sin(angle.theta / 2.0);
    ComplexMatrix r(2, 2);
    r(0, 0) = c;
    r(0, 1) = -s;
    r(1, 0) = s;
    r(1, 1) = c;
    return r;
}

// Coefficients of a state in the theta basis: R^dagger applied to z-basis
// amplitudes.
inline QubitState to_rotated_basis(const QubitState& s, BasisAngle angle) {
    const double c = std::cos(angle.theta / 2.0);
    const double t = std::sin(angle.theta / 2.0);
    return {c * s.alpha + t * s.beta, -t * s.alpha + c * s.beta};
}

using DensityMatrix = ComplexMatrix;

inline void validate_density(const DensityMatrix& rho, const char* who) {
    require_square(rho, who);
    if (hermiticity_residual(rho) > 1e-12)
        throw std::invalid_argument(std::string(who) + ": density matrix not Hermitian within 1e-12");
    if (std::abs(trace(rho) - cplx{1.0}) > 1e-12)
        throw std::invalid_argument(std::string(who) + ": density matrix trace differs from 1 by more than 1e-12");
}

namespace detail {

// log2 of a power-of-two dimension, with validation.
inline std::size_t factor_count(std::size_t dim, const char* who) {
    if (dim == 0 || (dim & (dim - 1)) != 0)
        throw std::invalid_argument(std::string(who) + ": dimension is not a power of 2");
    std::size_t m = 0;
    while ((std::size_t{1} << m) < dim) ++m;
    return m;
}

// Canonical ascending keep list; rejects out-of-range and duplicate indices.
inline std::vector<std::size_t> checked_keep(std::vector<std::size_t> keep,
                                             std::size_t m, const char* who) {
    std::sort(keep.begin(), keep.end());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= m)
            throw std::invalid_argument(std::string(who) + ": keep index out of range");
        if (i > 0 && keep[i] == keep[i - 1])
            throw std::invalid_argument(std::string(who) + ": duplicate keep index");
    }
    return keep;
}

// Bit position of factor f inside a full M-factor index (factor 0 = MSB).
inline std::size_t factor_shift(std::size_t m, std::size_t f) { return m - 1 - f; }

// Full index assembled from a kept-subsystem index and a traced-subsystem
// index, both read MSB-first in their own ascending factor order.
inline std::size_t assemble_index(std::size_t kept, std::size_t traced,
                                  const std::vector<std::size_t>& keep,
                                  const std::vector<std::size_t>& rest,
                                  std::size_t m) {
    std::size_t idx = 0;
    for (std::size_t r = 0; r < keep.size(); ++r) {
        const std::size_t bit = (kept >> (keep.size() - 1 - r)) & 1u;
        idx |= bit << factor_shift(m, keep[r]);
    }
    for (std::size_t r = 0; r < rest.size(); ++r) {
        const std::size_t bit = (traced >> (rest.size() - 1 - r)) & 1u;
        idx |= bit << factor_shift(m, rest[r]);
    }
    return idx;
}

inline std::vector<std::size_t> complement(const std::vector<std::size_t>& keep, std::size_t m) {
    std::vector<std::size_t> rest;
    rest.reserve(m - keep.size());
    std::size_t k = 0;
    for (std::size_t f = 0; f < m; ++f) {
        if (k < keep.size() && keep[k] == f) { ++k; continue; }
        rest.push_back(f);
    }
    return rest;
}

}  // namespace detail

// Marginal over the kept factors; the result keeps their relative order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
    require_square(rho, "partial_trace");
    const std::size_t m = detail::factor_count(rho.rows(), "partial_trace");
    keep = detail::checked_keep(std::move(keep), m, "partial_trace");
    const std::vector<std::size_t> rest = detail::complement(keep, m);

    const std::size_t dk = std::size_t{1} << keep.size();
    const std::size_t dr = std::size_t{1} << rest.size();
    DensityMatrix out(dk, dk);
    for (std::size_t a = 0; a < dk; ++a)
        for (std::size_t b = 0; b < dk; ++b) {
            cplx s{};
            for (std::size_t e = 0; e < dr; ++e)
                s += rho(detail::assemble_index(a, e, keep, rest, m),
                         detail::assemble_index(b, e, keep, rest, m));
            out(a, b) = s;
        }
    return out;
}

inline TwoQubitState rotate_two_qubit(const TwoQubitState& s, BasisAngle angle) {
    const double c = std::cos(angle.theta / 2.0);
    const double t = std::sin(angle.theta / 2.0);
    // Passive single-qubit transform T = R(theta)^dagger on each factor.
    const double tm[2][2] = {{c, t}, {-t, c}};
    TwoQubitState out{};
    for (std::size_t k = 0; k < 4; ++k) {
        cplx acc{};
        for (std::size_t l = 0; l < 4; ++l)
            acc += tm[k >> 1][l >> 1] * tm[k & 1][l & 1] * s.amps[l];
        out.amps[k] = acc;
    }
    return out;
}

namespace detail {

template <std::size_t N>
inline double overlap_fidelity(const std::array<cplx, N>& psi, const DensityMatrix& rho,
                               const char* who) {
    if (rho.rows() != N || rho.cols() != N)
        throw std::invalid_argument(std::string(who) + ": state and density matrix dimensions differ");
    cplx s{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            s += std::conj(psi[i]) * rho(i, j) * psi[j];
    return s.real();
}

}  // namespace detail

// Overlap probability <psi0| rho |psi0> of a pure reference state with an
// evolved (generally mixed) state.
inline double fidelity(const QubitState& psi0, const DensityMatrix& rho) {
    validate_state(psi0, "fidelity");
    return detail::overlap_fidelity<2>({psi0.alpha, psi0.beta}, rho, "fidelity");
}

inline double fidelity(const TwoQubitState& psi0, const DensityMatrix& rho) {
    validate_state(psi0, "fidelity");
    return detail::overlap_fidelity<4>(psi0.amps, rho, "fidelity");
}

// States compared modulo a global phase: |<a|b>| = 1 within tol.
inline bool equal_up_to_phase(const TwoQubitState& a, const TwoQubitState& b, double tol) {
    cplx ov{};
    for (std::size_t i = 0; i < 4; ++i) ov += std::conj(a.amps[i]) * b.amps[i];
    return std::abs(std::abs(ov) - 1.0) <= tol;
}

inline bool equal_up_to_phase(const QubitState& a, const QubitState& b, double tol) {
    const cplx ov = std::conj(a.alpha) * b.alpha + std::conj(a.beta) * b.beta;
    return std::abs(std::abs(ov) - 1.0) <= tol;
}

inline DensityMatrix projector(const QubitState& s) {
    DensityMatrix rho(2, 2);
    const std::array<cplx, 2> v{s.alpha, s.beta};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) rho(i, j) = v[i] * std::conj(v[j]);
    return rho;
}

inline DensityMatrix projector(const TwoQubitState& s) {
    DensityMatrix rho(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) rho(i, j) = s.amps[i] * std::conj(s.amps[j]);
    return rho;
}

// The four Bell states; first index flips the sign, second selects the pair.
inline TwoQubitState bell_state(int x, int y) {
    const double r = 1.0 / std::sqrt(2.0);
    const double sign = x ? -1.0 : 1.0;
    TwoQubitState s{};
    if (y == 0) {  // (|00> +- |11>)/sqrt(2)
        s.amps = {r, 0.0, 0.0, sign * r};
    } else {       // (|01> +- |10>)/sqrt(2)
        s.amps = {0.0, r, sign * r, 0.0};
    }
    return s;
}

}  // namespace decolab
