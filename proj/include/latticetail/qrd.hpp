#pragma once

#include "latticetail/complex_matrix.hpp"

#include <cstddef>

namespace latticetail {

/// QR factors of an N x M (N >= M) full-column-rank matrix. The factorization
/// is made unique by forcing the diagonal of r to be real and positive; q then
/// has orthonormal columns and q * r reconstructs the input.
struct QRFactors {
    ComplexMatrix q;  // N x M, orthonormal columns
    ComplexMatrix r;  // M x M upper triangular, positive real diagonal
};

/// Householder QR with diagonal phase normalization.
/// Throws RankDeficientError when the smallest diagonal of r falls below
/// 1e-12 * ||h||_F, i.e. when the positive-diagonal convention is meaningless.
QRFactors qrd(const ComplexMatrix& h);

/// det(R_k^H R_k) for the bottom-right k x k submatrix R_k of an upper
/// triangular factor with positive real diagonal: the squared diagonal product.
/// k is 1-based, 1 <= k <= M; throws InvalidLayerError otherwise.
double sub_gram_det(const ComplexMatrix& r, std::size_t k);

}  // namespace latticetail
