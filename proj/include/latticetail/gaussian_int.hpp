#pragma once

#include "latticetail/complex_matrix.hpp"

#include <cstdint>
#include <vector>

namespace latticetail {

/// Exact Gaussian integer (element of Z[i]).
struct GaussInt {
    std::int64_t re = 0;
    std::int64_t im = 0;

    friend GaussInt operator+(GaussInt a, GaussInt b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussInt operator-(GaussInt a, GaussInt b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussInt operator*(GaussInt a, GaussInt b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(GaussInt a, GaussInt b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(GaussInt a, GaussInt b) { return !(a == b); }

    GaussInt conj() const { return {re, -im}; }
    bool is_zero() const { return re == 0 && im == 0; }
    Cplx to_cplx() const { return Cplx{static_cast<double>(re), static_cast<double>(im)}; }
};

/// Lexicographic order on (re, im); used for deterministic tie-breaking.
inline bool lex_less(GaussInt a, GaussInt b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
}

using GaussianIntVector = std::vector<GaussInt>;

/// First-coordinate-most-significant lexicographic order on vectors.
bool lex_less(const GaussianIntVector& a, const GaussianIntVector& b);

/// Square Gaussian-integer matrix, kept exact. In this project every
/// instance is a basis-change transform and must be unimodular (|det| = 1,
/// det computed in exact arithmetic over Z[i]).
class UnimodularMatrix {
public:
    UnimodularMatrix() = default;
    explicit UnimodularMatrix(std::size_t m) : m_(m), e_(m * m) {}
    static UnimodularMatrix identity(std::size_t m);

    std::size_t dim() const { return m_; }
    GaussInt& operator()(std::size_t i, std::size_t j) { return e_[i * m_ + j]; }
    const GaussInt& operator()(std::size_t i, std::size_t j) const { return e_[i * m_ + j]; }

    bool operator==(const UnimodularMatrix& rhs) const { return m_ == rhs.m_ && e_ == rhs.e_; }

    /// Exact determinant over Z[i] (cofactor expansion, 128-bit intermediates).
    GaussInt det() const;

    /// |det| == 1, checked exactly.
    bool is_unimodular() const;

    /// Exactly one unit entry (+1) per row and column, zeros elsewhere.
    bool is_permutation() const;

    /// Exact inverse via the adjugate; requires |det| = 1.
    UnimodularMatrix inverse() const;

    GaussianIntVector apply(const GaussianIntVector& x) const;

    ComplexMatrix to_complex() const;

private:
    std::size_t m_ = 0;
    std::vector<GaussInt> e_;
};

}  // namespace latticetail
