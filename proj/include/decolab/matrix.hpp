#pragma once

// Dense row-major complex matrices at the small sizes this library needs
// (2x2 and 4x4 reduced states, coupling matrices up to a few dozen spins,
// full Hilbert spaces up to 2^14). No attempt at sparsity or blocking.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace decolab {

using cplx = std::complex<double>;

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return a_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> a_;
};

inline void require_square(const ComplexMatrix& m, const char* who) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimensions differ");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(j, i) = std::conj(m(i, j));
    return r;
}

inline std::vector<cplx> matvec(const ComplexMatrix& m, const std::vector<cplx>& v) {
    if (m.cols() != v.size())
        throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<cplx> r(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cplx s{};
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

// A† v without materializing the adjoint.
inline std::vector<cplx> adjoint_matvec(const ComplexMatrix& m, const std::vector<cplx>& v) {
    if (m.rows() != v.size())
        throw std::invalid_argument("adjoint_matvec: dimension mismatch");
    std::vector<cplx> r(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const cplx vi = v[i];
        if (vi == cplx{}) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) r[j] += std::conj(m(i, j)) * vi;
    }
    return r;
}

inline cplx trace(const ComplexMatrix& m) {
    require_square(m, "trace");
    cplx t{};
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

inline double max_abs(const ComplexMatrix& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r = std::max(r, std::abs(m(i, j)));
    return r;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double r = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r = std::max(r, std::abs(a(i, j) - b(i, j)));
    return r;
}

// max |a_ij - conj(a_ji)|; zero for an exactly Hermitian matrix.
inline double hermiticity_residual(const ComplexMatrix& m) {
    require_square(m, "hermiticity_residual");
    double r = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
    return r;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol) {
    return m.rows() == m.cols() && hermiticity_residual(m) <= tol;
}

inline bool is_unitary(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs_diff(matmul(adjoint(m), m), ComplexMatrix::identity(m.rows())) <= tol;
}

inline double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace decolab
