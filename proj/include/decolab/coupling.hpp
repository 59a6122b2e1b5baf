#pragma once

// Many-to-one reduction of an all-to-all spin coupling matrix.
//
// Spin 0 is the system; entries omega_ij of the Hermitian coupling matrix are
// angular frequencies (hbar = 1). Diagonalizing the lower-right environment
// block with a unitary V and transforming row/column 0 by the same V yields
// an arrowhead matrix: quasi-spins with self-energies on the diagonal, each
// coupled only to the system. The similarity preserves the full spectrum and
// the norm of the system row.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jacobi.hpp"
#include "matrix.hpp"

namespace decolab {

using CouplingMatrix = ComplexMatrix;
using UnitaryMatrix = ComplexMatrix;

inline void validate_coupling(const CouplingMatrix& m, const char* who) {
    require_square(m, who);
    if (hermiticity_residual(m) > 1e-12)
        throw std::invalid_argument(std::string(who) + ": coupling matrix not Hermitian within 1e-12");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!is_finite(m(i, j)))
                throw std::invalid_argument(std::string(who) + ": non-finite coupling entry");
}

struct ReducedCoupling {
    double omega00 = 0.0;                   // system self-term, unchanged
    std::vector<cplx> effective_couplings;  // omega'_0i, one per quasi-spin
    std::vector<double> self_energies;      // environment-block eigenvalues, pivot order
};

// The arrowhead coupling matrix a reduction describes.
inline CouplingMatrix arrowhead_matrix(const ReducedCoupling& r) {
    const std::size_t n = r.effective_couplings.size() + 1;
    CouplingMatrix m(n, n);
    m(0, 0) = r.omega00;
    for (std::size_t i = 1; i < n; ++i) {
        m(0, i) = r.effective_couplings[i - 1];
        m(i, 0) = std::conj(r.effective_couplings[i - 1]);
        m(i, i) = r.self_energies[i - 1];
    }
    return m;
}

inline ReducedCoupling many_to_one_reduce(const CouplingMatrix& h) {
    validate_coupling(h, "many_to_one_reduce");
    const std::size_t n = h.rows();
    if (n < 2)
        throw std::invalid_argument("many_to_one_reduce: need at least one environment spin (n >= 2)");

    ComplexMatrix env(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 1; j < n; ++j) env(i - 1, j - 1) = h(i, j);

    // Unsorted kernel: an already-diagonal block stays bit-identical, which
    // makes the reduction idempotent.
    const EigenSystem es = jacobi_eigensystem(env);

    ReducedCoupling r;
    r.omega00 = h(0, 0).real();
    r.self_energies = es.values;
    r.effective_couplings.resize(n - 1);
    for (std::size_t i = 0; i < n - 1; ++i) {
        cplx s{};
        for (std::size_t j = 0; j < n - 1; ++j) s += h(0, j + 1) * es.vectors(j, i);
        r.effective_couplings[i] = s;
    }
    return r;
}

}  // namespace decolab
