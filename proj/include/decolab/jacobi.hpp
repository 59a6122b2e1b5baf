#pragma once

// Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//
// The pivot order is fixed (upper triangle, row-major) and each complex pivot
// is reduced to the real symmetric case through a phase factor, so the whole
// iteration is deterministic: the same input yields bit-identical output on
// every run. Convergence is declared when the off-diagonal Frobenius norm
// drops below 1e-12; the solver gives up after 100 sweeps.
//
// jacobi_eigensystem leaves eigenvalues in pivot order (an already-diagonal
// matrix comes back untouched, which the coupling reduction relies on);
// diagonalize_hermitian sorts ascending with a stable tie order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"

namespace decolab {

struct EigenSystem {
    std::vector<double> values;  // real eigenvalues
    ComplexMatrix vectors;       // unitary; column k pairs with values[k]
    std::size_t sweeps = 0;
};

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

inline EigenSystem jacobi_eigensystem(ComplexMatrix a,
                                      double tol = 1e-12,
                                      std::size_t max_sweeps = 100) {
    require_square(a, "jacobi_eigensystem");
    const std::size_t n = a.rows();

    // Work on an exactly Hermitian copy; the caller validates its tolerance.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) a(j, i) = std::conj(a(i, j));
    }

    ComplexMatrix v = ComplexMatrix::identity(n);
    std::size_t sweeps = 0;
    while (off_diagonal_norm(a) >= tol) {
        if (sweeps == max_sweeps)
            throw std::runtime_error("jacobi_eigensystem: no convergence within 100 sweeps");
        ++sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double m = std::abs(apq);
                if (m < 1e-300) continue;

                // Phase factor u turns the (p,q) pivot real; the remaining
                // 2x2 problem is the classical symmetric rotation.
                const cplx u = apq / m;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * m);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx cu = std::conj(u);

                // A <- U' A U with U = I except U(p,p)=c, U(p,q)=s,
                // U(q,p)=-s*conj(u), U(q,q)=c*conj(u).
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx tp = a(k, p), tq = a(k, q);
                    a(k, p) = c * tp - s * cu * tq;
                    a(k, q) = s * tp + c * cu * tq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx tp = a(p, k), tq = a(q, k);
                    a(p, k) = c * tp - s * u * tq;
                    a(q, k) = s * tp + c * u * tq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx tp = v(k, p), tq = v(k, q);
                    v(k, p) = c * tp - s * cu * tq;
                    v(k, q) = s * tp + c * cu * tq;
                }
            }
        }
    }

    EigenSystem es;
    es.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) es.values[i] = a(i, i).real();
    es.vectors = std::move(v);
    es.sweeps = sweeps;
    return es;
}

// Validating front end: eigenvalues ascending, ties kept in pivot order.
inline EigenSystem diagonalize_hermitian(const ComplexMatrix& h) {
    require_square(h, "diagonalize_hermitian");
    if (hermiticity_residual(h) > 1e-12)
        throw std::invalid_argument("diagonalize_hermitian: matrix is not Hermitian within 1e-12");

    EigenSystem es = jacobi_eigensystem(h);
    const std::size_t n = es.values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return es.values[i] < es.values[j]; });

    EigenSystem sorted;
    sorted.values.resize(n);
    sorted.vectors = ComplexMatrix(n, n);
    sorted.sweeps = es.sweeps;
    for (std::size_t k = 0; k < n; ++k) {
        sorted.values[k] = es.values[order[k]];
        for (std::size_t i = 0; i < n; ++i) sorted.vectors(i, k) = es.vectors(i, order[k]);
    }
    return sorted;
}

// Smallest eigenvalue; used to assert positive semidefiniteness of states.
inline double min_eigenvalue(const ComplexMatrix& h) {
    return diagonalize_hermitian(h).values.front();
}

}  // namespace decolab
