#pragma once

#include "latticetail/complex_matrix.hpp"
#include "latticetail/gaussian_int.hpp"
#include "latticetail/qrd.hpp"

#include <cstddef>

namespace latticetail {

enum class PreprocMethod { Direct, Clll, Vblast };

/// Triangular factor fed to the decoder, together with the exact unimodular
/// basis change that produced it: q_tilde * r_tilde reconstructs h * t.
struct PreprocOutput {
    PreprocMethod method = PreprocMethod::Direct;
    ComplexMatrix r_tilde;  // M x M, positive real diagonal
    UnimodularMatrix t;     // exact Gaussian-integer transform, |det| = 1
    ComplexMatrix q_tilde;  // N x M, orthonormal columns
};

/// Direct QRD, complex LLL reduction, or layer sorting by iterated minimum
/// pseudoinverse row norm (first-detected stream moved to the last column,
/// where the enumeration starts). delta is the LLL parameter, in (1/4, 1].
PreprocOutput preprocess(const ComplexMatrix& h, PreprocMethod method, double delta = 0.75);

struct LrIdentityResult {
    bool ok = false;
    double residual = 0.0;
};

/// Verifies R = Q' r_tilde t^-1 against an independently computed direct
/// factor R of h, with Q' the QR factor of R t and t^-1 exact over Z[i].
LrIdentityResult lr_identity_check(const ComplexMatrix& h, const PreprocOutput& out);

/// Checks that scaling h by b > 0 leaves the transform bit-identical and
/// scales every sub-Gram determinant by b^(2k).
bool scaling_invariance_check(const ComplexMatrix& h, PreprocMethod method, double b,
                              double delta = 0.75);

/// Complex size reduction plus the Lovasz condition, checked entrywise on an
/// upper triangular factor (used by tests and the verification command).
bool is_clll_reduced(const ComplexMatrix& r, double delta, double tol = 1e-9);

}  // namespace latticetail
