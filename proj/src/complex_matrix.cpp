#include "latticetail/complex_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace latticetail {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Cplx{1.0, 0.0};
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Cplx& z : e_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
    for (const Cplx& z : e_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

ComplexMatrix ComplexMatrix::conj_transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    ComplexMatrix m(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Cplx a = (*this)(i, k);
            if (a == Cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) m(i, j) += a * rhs(k, j);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("matrix difference: dimension mismatch");
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] - rhs.e_[i];
    return m;
}

ComplexMatrix ComplexMatrix::scaled(Cplx factor) const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = factor * e_[i];
    return m;
}

CplxVector ComplexMatrix::apply(const CplxVector& x) const {
    if (x.size() != cols_) throw std::invalid_argument("matrix apply: dimension mismatch");
    CplxVector y(rows_, Cplx{0.0, 0.0});
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
}

CplxVector ComplexMatrix::apply_adjoint(const CplxVector& x) const {
    if (x.size() != rows_) throw std::invalid_argument("matrix apply_adjoint: dimension mismatch");
    CplxVector y(cols_, Cplx{0.0, 0.0});
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) y[j] += std::conj((*this)(i, j)) * x[i];
    return y;
}

ComplexMatrix ComplexMatrix::bottom_right(std::size_t k) const {
    if (k > rows_ || k > cols_) throw std::invalid_argument("bottom_right: k too large");
    ComplexMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = (*this)(rows_ - k + i, cols_ - k + j);
    return m;
}

ComplexMatrix operator*(double b, const ComplexMatrix& m) { return m.scaled(Cplx{b, 0.0}); }

double vector_norm(const CplxVector& v) {
    double s = 0.0;
    for (const Cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace latticetail
