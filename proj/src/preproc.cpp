#include "latticetail/preproc.hpp"

#include "latticetail/errors.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace latticetail {

namespace {

// Nearest integer with halfway cases toward zero, so the reduced coefficient
// keeps the smaller magnitude as required by the size-reduction convention.
std::int64_t round_half_toward_zero(double x) {
    double r = std::round(x);
    if (std::abs(r - x) == 0.5) r = std::trunc(x);
    return static_cast<std::int64_t>(r);
}

GaussInt round_gauss(Cplx z) {
    return {round_half_toward_zero(z.real()), round_half_toward_zero(z.imag())};
}

void size_reduce_column(ComplexMatrix& r, UnimodularMatrix& t, std::size_t k, std::size_t i) {
    const Cplx mu = r(i, k) / r(i, i);
    const GaussInt c = round_gauss(mu);
    if (c.is_zero()) return;
    const Cplx cc = c.to_cplx();
    for (std::size_t row = 0; row <= i; ++row) r(row, k) -= cc * r(row, i);
    for (std::size_t row = 0; row < t.dim(); ++row) t(row, k) = t(row, k) - c * t(row, i);
}

UnimodularMatrix clll_transform(const ComplexMatrix& h, double delta) {
    const std::size_t m = h.cols();
    ComplexMatrix r = qrd(h).r;
    UnimodularMatrix t = UnimodularMatrix::identity(m);
    if (m < 2) return t;

    const std::size_t max_sweeps = 10000 * m * m;
    std::size_t sweeps = 0;
    std::size_t k = 1;
    while (k < m) {
        if (++sweeps > max_sweeps) throw std::runtime_error("clll: failed to converge");
        size_reduce_column(r, t, k, k - 1);
        const double lhs = delta * std::norm(r(k - 1, k - 1));
        const double rhs = std::norm(r(k, k)) + std::norm(r(k - 1, k));
        if (lhs > rhs) {
            for (std::size_t row = 0; row < m; ++row) std::swap(r(row, k - 1), r(row, k));
            for (std::size_t row = 0; row < m; ++row) std::swap(t(row, k - 1), t(row, k));
            // One Givens rotation restores the triangle, then the rotated row
            // is rephased to keep the diagonal real and positive.
            const Cplx a = r(k - 1, k - 1);
            const Cplx b = r(k, k - 1);
            const double n = std::sqrt(std::norm(a) + std::norm(b));
            if (n == 0.0) throw RankDeficientError("clll: zero pivot during swap");
            for (std::size_t j = k - 1; j < m; ++j) {
                const Cplx u = r(k - 1, j);
                const Cplx v = r(k, j);
                r(k - 1, j) = (std::conj(a) * u + std::conj(b) * v) / n;
                r(k, j) = (-b * u + a * v) / n;
            }
            r(k - 1, k - 1) = Cplx{n, 0.0};
            r(k, k - 1) = Cplx{0.0, 0.0};
            const double mag = std::abs(r(k, k));
            if (mag == 0.0) throw RankDeficientError("clll: zero pivot after swap");
            const Cplx ph = std::conj(r(k, k)) / mag;
            for (std::size_t j = k; j < m; ++j) r(k, j) *= ph;
            r(k, k) = Cplx{mag, 0.0};
            k = k > 1 ? k - 1 : 1;
        } else {
            for (std::size_t i = k - 1; i-- > 0;) size_reduce_column(r, t, k, i);
            ++k;
        }
    }
    return t;
}

UnimodularMatrix vblast_transform(const ComplexMatrix& h) {
    const std::size_t n = h.rows();
    const std::size_t m = h.cols();
    std::vector<std::size_t> remaining(m);
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    std::vector<std::size_t> order;  // order[s] = stream detected at step s
    order.reserve(m);

    while (!remaining.empty()) {
        const std::size_t ms = remaining.size();
        ComplexMatrix hs(n, ms);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < ms; ++j) hs(i, j) = h(i, remaining[j]);
        const ComplexMatrix r = qrd(hs).r;

        // Rows of R^-1 have the same norms as the pseudoinverse rows of hs.
        ComplexMatrix rinv(ms, ms);
        for (std::size_t c = 0; c < ms; ++c) {
            rinv(c, c) = 1.0 / r(c, c);
            for (std::size_t i = c; i-- > 0;) {
                Cplx acc{0.0, 0.0};
                for (std::size_t j = i + 1; j <= c; ++j) acc += r(i, j) * rinv(j, c);
                rinv(i, c) = -acc / r(i, i);
            }
        }
        std::size_t best = 0;
        double best_norm = -1.0;
        for (std::size_t i = 0; i < ms; ++i) {
            double w = 0.0;
            for (std::size_t c = i; c < ms; ++c) w += std::norm(rinv(i, c));
            if (best_norm < 0.0 || w < best_norm) {
                best_norm = w;
                best = i;
            }
        }
        order.push_back(remaining[best]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }

    // First-detected stream goes to the last column, where enumeration roots.
    UnimodularMatrix t(m);
    for (std::size_t s = 0; s < m; ++s) t(order[s], m - 1 - s) = GaussInt{1, 0};
    return t;
}

}  // namespace

PreprocOutput preprocess(const ComplexMatrix& h, PreprocMethod method, double delta) {
    if (h.rows() < h.cols() || h.cols() == 0)
        throw std::invalid_argument("preprocess: need N >= M >= 1");
    UnimodularMatrix t;
    switch (method) {
        case PreprocMethod::Direct:
            t = UnimodularMatrix::identity(h.cols());
            break;
        case PreprocMethod::Clll:
            if (!(delta > 0.25 && delta <= 1.0))
                throw std::invalid_argument("preprocess: delta must be in (1/4, 1]");
            t = clll_transform(h, delta);
            break;
        case PreprocMethod::Vblast:
            t = vblast_transform(h);
            break;
    }
    if (!t.is_unimodular()) throw std::logic_error("preprocess: transform lost unimodularity");
    const QRFactors f = qrd(h * t.to_complex());
    return PreprocOutput{method, f.r, std::move(t), f.q};
}

LrIdentityResult lr_identity_check(const ComplexMatrix& h, const PreprocOutput& out) {
    const ComplexMatrix r = qrd(h).r;
    const ComplexMatrix q_prime = qrd(r * out.t.to_complex()).q;
    const ComplexMatrix rhs = q_prime * out.r_tilde * out.t.inverse().to_complex();
    const double residual = (r - rhs).frobenius_norm();
    return LrIdentityResult{residual <= 1e-8 * r.frobenius_norm(), residual};
}

bool scaling_invariance_check(const ComplexMatrix& h, PreprocMethod method, double b,
                              double delta) {
    if (!(b > 0.0)) throw std::invalid_argument("scaling_invariance_check: b must be positive");
    const PreprocOutput base = preprocess(h, method, delta);
    const PreprocOutput scaled = preprocess(b * h, method, delta);
    if (!(base.t == scaled.t)) return false;
    for (std::size_t k = 1; k <= h.cols(); ++k) {
        const double expect = std::pow(b, 2.0 * static_cast<double>(k)) *
                              sub_gram_det(base.r_tilde, k);
        const double got = sub_gram_det(scaled.r_tilde, k);
        if (std::abs(got - expect) > 1e-10 * expect) return false;
    }
    return true;
}

bool is_clll_reduced(const ComplexMatrix& r, double delta, double tol) {
    const std::size_t m = r.rows();
    if (r.cols() != m) throw std::invalid_argument("is_clll_reduced: r must be square");
    for (std::size_t k = 1; k < m; ++k) {
        for (std::size_t i = 0; i < k; ++i) {
            const Cplx mu = r(i, k) / r(i, i);
            if (std::abs(mu.real()) > 0.5 + tol || std::abs(mu.imag()) > 0.5 + tol) return false;
        }
        const double a2 = std::norm(r(k - 1, k - 1));
        if (delta * a2 > std::norm(r(k, k)) + std::norm(r(k - 1, k)) + tol * a2) return false;
    }
    return true;
}

}  // namespace latticetail
