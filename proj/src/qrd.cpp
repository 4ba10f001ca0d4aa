#include "latticetail/qrd.hpp"

#include "latticetail/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace latticetail {

namespace {

// Applies the reflector I - 2 v v^H / (v^H v) (v restricted to rows [col, n))
// to column j of a, rows [col, n).
void apply_reflector(ComplexMatrix& a, const CplxVector& v, double vsq, std::size_t col,
                     std::size_t j) {
    const std::size_t n = a.rows();
    Cplx dot{0.0, 0.0};
    for (std::size_t i = col; i < n; ++i) dot += std::conj(v[i - col]) * a(i, j);
    const Cplx f = 2.0 * dot / vsq;
    for (std::size_t i = col; i < n; ++i) a(i, j) -= f * v[i - col];
}

}  // namespace

QRFactors qrd(const ComplexMatrix& h) {
    const std::size_t n = h.rows();
    const std::size_t m = h.cols();
    if (n < m || m == 0) throw std::invalid_argument("qrd: need N >= M >= 1");
    if (!h.all_finite()) throw std::invalid_argument("qrd: non-finite entries");

    ComplexMatrix a = h;  // working copy, becomes R in its top block
    std::vector<CplxVector> reflectors(m);
    std::vector<double> vsqs(m, 0.0);

    for (std::size_t col = 0; col < m; ++col) {
        double colnorm_sq = 0.0;
        for (std::size_t i = col; i < n; ++i) colnorm_sq += std::norm(a(i, col));
        const double colnorm = std::sqrt(colnorm_sq);

        CplxVector v(n - col, Cplx{0.0, 0.0});
        double vsq = 0.0;
        if (colnorm > 0.0) {
            const Cplx pivot = a(col, col);
            const Cplx phase =
                (pivot == Cplx{0.0, 0.0}) ? Cplx{1.0, 0.0} : pivot / std::abs(pivot);
            const Cplx beta = -phase * colnorm;  // target value of a(col, col)
            for (std::size_t i = col; i < n; ++i) v[i - col] = a(i, col);
            v[0] -= beta;
            for (const Cplx& z : v) vsq += std::norm(z);
            if (vsq > 0.0) {
                for (std::size_t j = col; j < m; ++j) apply_reflector(a, v, vsq, col, j);
            }
            a(col, col) = beta;
            for (std::size_t i = col + 1; i < n; ++i) a(i, col) = Cplx{0.0, 0.0};
        }
        reflectors[col] = std::move(v);
        vsqs[col] = vsq;
    }

    // Thin Q: reflect the leading M columns of the identity in reverse order.
    ComplexMatrix q(n, m);
    for (std::size_t j = 0; j < m; ++j) q(j, j) = Cplx{1.0, 0.0};
    for (std::size_t col = m; col-- > 0;) {
        if (vsqs[col] <= 0.0) continue;
        for (std::size_t j = 0; j < m; ++j) apply_reflector(q, reflectors[col], vsqs[col], col, j);
    }

    // Phase normalization: make the diagonal of R real positive, folding the
    // conjugate phase into the columns of Q so that q * r is unchanged.
    ComplexMatrix r(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) r(i, j) = a(i, j);

    const double scale = h.frobenius_norm();
    for (std::size_t i = 0; i < m; ++i) {
        const double mag = std::abs(r(i, i));
        if (!(mag > 1e-12 * scale))
            throw RankDeficientError("qrd: diagonal entry below rank tolerance");
        const Cplx phase = r(i, i) / mag;
        const Cplx inv_phase = std::conj(phase);
        for (std::size_t j = i; j < m; ++j) r(i, j) *= inv_phase;
        r(i, i) = Cplx{mag, 0.0};
        for (std::size_t k = 0; k < n; ++k) q(k, i) *= phase;
    }
    return QRFactors{std::move(q), std::move(r)};
}

double sub_gram_det(const ComplexMatrix& r, std::size_t k) {
    const std::size_t m = r.cols();
    if (r.rows() != m) throw std::invalid_argument("sub_gram_det: r must be square");
    if (k < 1 || k > m) throw InvalidLayerError("sub_gram_det: layer index out of range");
    double det = 1.0;
    for (std::size_t i = m - k; i < m; ++i) det *= std::norm(r(i, i));
    return det;
}

}  // namespace latticetail
