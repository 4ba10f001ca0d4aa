#include "latticetail/gaussian_int.hpp"

#include <stdexcept>

namespace latticetail {

namespace {

// 128-bit Gaussian integer, wide enough for cofactor expansions up to
// dimension 8 with the small transform entries LLL and layer sorting produce.
struct Gauss128 {
    __int128 re = 0;
    __int128 im = 0;

    friend Gauss128 operator+(Gauss128 a, Gauss128 b) { return {a.re + b.re, a.im + b.im}; }
    friend Gauss128 operator-(Gauss128 a, Gauss128 b) { return {a.re - b.re, a.im - b.im}; }
    friend Gauss128 operator*(Gauss128 a, Gauss128 b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
};

Gauss128 widen(GaussInt g) { return {g.re, g.im}; }

// Cofactor expansion along the first remaining row, over active column set.
Gauss128 det_rec(const UnimodularMatrix& m, std::size_t row, std::vector<std::size_t>& cols) {
    if (cols.size() == 1) return widen(m(row, cols[0]));
    Gauss128 acc{0, 0};
    for (std::size_t idx = 0; idx < cols.size(); ++idx) {
        const std::size_t col = cols[idx];
        const GaussInt pivot = m(row, col);
        if (!pivot.is_zero()) {
            std::vector<std::size_t> rest;
            rest.reserve(cols.size() - 1);
            for (std::size_t j = 0; j < cols.size(); ++j)
                if (j != idx) rest.push_back(cols[j]);
            Gauss128 minor = det_rec(m, row + 1, rest);
            Gauss128 term = widen(pivot) * minor;
            if (idx % 2 == 0)
                acc = acc + term;
            else
                acc = acc - term;
        }
    }
    return acc;
}

GaussInt narrow(Gauss128 g) {
    return {static_cast<std::int64_t>(g.re), static_cast<std::int64_t>(g.im)};
}

}  // namespace

bool lex_less(const GaussianIntVector& a, const GaussianIntVector& b) {
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) return lex_less(a[i], b[i]);
    }
    return a.size() < b.size();
}

UnimodularMatrix UnimodularMatrix::identity(std::size_t m) {
    UnimodularMatrix u(m);
    for (std::size_t i = 0; i < m; ++i) u(i, i) = GaussInt{1, 0};
    return u;
}

GaussInt UnimodularMatrix::det() const {
    if (m_ == 0) return GaussInt{1, 0};
    std::vector<std::size_t> cols(m_);
    for (std::size_t j = 0; j < m_; ++j) cols[j] = j;
    return narrow(det_rec(*this, 0, cols));
}

bool UnimodularMatrix::is_unimodular() const {
    const GaussInt d = det();
    return d.re * d.re + d.im * d.im == 1;
}

bool UnimodularMatrix::is_permutation() const {
    for (std::size_t i = 0; i < m_; ++i) {
        std::size_t row_units = 0, col_units = 0;
        for (std::size_t j = 0; j < m_; ++j) {
            const GaussInt& r = (*this)(i, j);
            const GaussInt& c = (*this)(j, i);
            if (r == GaussInt{1, 0})
                ++row_units;
            else if (!r.is_zero())
                return false;
            if (c == GaussInt{1, 0})
                ++col_units;
            else if (!c.is_zero())
                return false;
        }
        if (row_units != 1 || col_units != 1) return false;
    }
    return true;
}

UnimodularMatrix UnimodularMatrix::inverse() const {
    const GaussInt d = det();
    if (d.re * d.re + d.im * d.im != 1)
        throw std::logic_error("UnimodularMatrix::inverse: |det| != 1");

    // adj(T) / det = adj(T) * conj(det) when |det| = 1.
    UnimodularMatrix inv(m_);
    if (m_ == 1) {
        inv(0, 0) = d.conj();
        return inv;
    }
    for (std::size_t i = 0; i < m_; ++i) {
        for (std::size_t j = 0; j < m_; ++j) {
            // Cofactor C_ij: delete row i, column j.
            UnimodularMatrix minor(m_ - 1);
            for (std::size_t r = 0, mr = 0; r < m_; ++r) {
                if (r == i) continue;
                for (std::size_t c = 0, mc = 0; c < m_; ++c) {
                    if (c == j) continue;
                    minor(mr, mc) = (*this)(r, c);
                    ++mc;
                }
                ++mr;
            }
            GaussInt cof = minor.det();
            if ((i + j) % 2 == 1) cof = GaussInt{0, 0} - cof;
            inv(j, i) = cof * d.conj();  // adjugate transposes the cofactors
        }
    }
    return inv;
}

GaussianIntVector UnimodularMatrix::apply(const GaussianIntVector& x) const {
    if (x.size() != m_) throw std::invalid_argument("UnimodularMatrix::apply: dimension mismatch");
    GaussianIntVector y(m_, GaussInt{0, 0});
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) y[i] = y[i] + (*this)(i, j) * x[j];
    return y;
}

ComplexMatrix UnimodularMatrix::to_complex() const {
    ComplexMatrix m(m_, m_);
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) m(i, j) = (*this)(i, j).to_cplx();
    return m;
}

}  // namespace latticetail
