#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace latticetail {

using Cplx = std::complex<double>;
using CplxVector = std::vector<Cplx>;

/// Dense row-major complex matrix. Carrier for H, Q, R, T and the
/// observation vectors they act on. Small dimensions only; no views.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols, Cplx{0.0, 0.0}) {}

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Cplx& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Cplx& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    const std::vector<Cplx>& entries() const { return e_; }

    double frobenius_norm() const;
    bool all_finite() const;

    ComplexMatrix conj_transpose() const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix scaled(Cplx factor) const;

    /// A * x
    CplxVector apply(const CplxVector& x) const;
    /// A^H * x
    CplxVector apply_adjoint(const CplxVector& x) const;

    /// Bottom-right k x k submatrix (the layer-k subsystem of a triangular factor).
    ComplexMatrix bottom_right(std::size_t k) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Cplx> e_;
};

ComplexMatrix operator*(double b, const ComplexMatrix& m);

double vector_norm(const CplxVector& v);

}  // namespace latticetail
