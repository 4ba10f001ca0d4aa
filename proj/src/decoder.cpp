#include "latticetail/decoder.hpp"

#include "latticetail/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace latticetail {

std::vector<GaussInt> gaussian_integers_in_disk(Cplx center, double radius) {
    std::vector<GaussInt> out;
    if (radius < 0.0) return out;
    const double cr = center.real();
    const double ci = center.imag();
    const double rr = radius * radius;
    // Scan one integer beyond the analytic bounds and let the direct
    // comparison decide; sqrt rounding can otherwise clip boundary points.
    const std::int64_t re_lo = static_cast<std::int64_t>(std::ceil(cr - radius)) - 1;
    const std::int64_t re_hi = static_cast<std::int64_t>(std::floor(cr + radius)) + 1;
    for (std::int64_t re = re_lo; re <= re_hi; ++re) {
        const double dx = static_cast<double>(re) - cr;
        const double slice = rr - dx * dx;
        const double s = slice > 0.0 ? std::sqrt(slice) : 0.0;
        const std::int64_t im_lo = static_cast<std::int64_t>(std::ceil(ci - s)) - 1;
        const std::int64_t im_hi = static_cast<std::int64_t>(std::floor(ci + s)) + 1;
        for (std::int64_t im = im_lo; im <= im_hi; ++im) {
            const double dy = static_cast<double>(im) - ci;
            if (dx * dx + dy * dy <= rr) out.push_back(GaussInt{re, im});
        }
    }
    return out;
}

namespace {

struct SearchState {
    const ComplexMatrix& r;
    const CplxVector& y;
    double rho_sq;
    std::size_t m;
    std::uint64_t budget;  // max total accepted nodes

    std::vector<std::uint64_t> layer_counts;
    std::uint64_t total = 0;
    bool censored = false;
    bool overflow = false;

    GaussianIntVector path;  // coordinate values, filled from index m-1 down
    bool found = false;
    double best_obj = 0.0;
    GaussianIntVector best;

    bool aborted() const { return censored || overflow; }
};

// Depth-first descent over rows m-1 .. 0. accum is the metric of the rows
// already fixed below; a candidate is accepted iff accum + |delta|^2 <= rho^2,
// the same comparison the brute-force oracle applies.
void descend(SearchState& st, std::size_t row, double accum) {
    Cplx xi = st.y[row];
    for (std::size_t j = row + 1; j < st.m; ++j) xi -= st.r(row, j) * st.path[j].to_cplx();
    const double diag = st.r(row, row).real();
    const Cplx center = xi / diag;
    const double t = std::sqrt(st.rho_sq - accum) / diag;

    const double cr = center.real();
    const double ci = center.imag();
    const std::int64_t re_lo = static_cast<std::int64_t>(std::ceil(cr - t)) - 1;
    const std::int64_t re_hi = static_cast<std::int64_t>(std::floor(cr + t)) + 1;
    const std::size_t layer_idx = st.m - 1 - row;  // layer k = m - row, zero-based

    for (std::int64_t re = re_lo; re <= re_hi && !st.aborted(); ++re) {
        const double dx = static_cast<double>(re) - cr;
        const double slice = t * t - dx * dx;
        const double s = slice > 0.0 ? std::sqrt(slice) : 0.0;
        const std::int64_t im_lo = static_cast<std::int64_t>(std::ceil(ci - s)) - 1;
        const std::int64_t im_hi = static_cast<std::int64_t>(std::floor(ci + s)) + 1;
        for (std::int64_t im = im_lo; im <= im_hi && !st.aborted(); ++im) {
            const GaussInt cand{re, im};
            Cplx delta = xi;
            delta -= st.r(row, row) * cand.to_cplx();
            const double metric = accum + std::norm(delta);
            if (!(metric <= st.rho_sq)) continue;

            if (st.total == std::numeric_limits<std::uint64_t>::max()) {
                st.overflow = true;
                break;
            }
            if (st.total >= st.budget) {
                st.censored = true;
                break;
            }
            ++st.layer_counts[layer_idx];
            ++st.total;
            st.path[row] = cand;
            if (row == 0) {
                if (!st.found || metric < st.best_obj ||
                    (metric == st.best_obj && lex_less(st.path, st.best))) {
                    st.found = true;
                    st.best_obj = metric;
                    st.best = st.path;
                }
            } else {
                descend(st, row - 1, metric);
            }
        }
    }
}

}  // namespace

DecodeResult decode(const ComplexMatrix& r, const CplxVector& y, double rho,
                    std::optional<std::uint64_t> node_budget) {
    const std::size_t m = r.rows();
    if (m == 0 || r.cols() != m) throw std::invalid_argument("decode: r must be square");
    if (y.size() != m) throw std::invalid_argument("decode: observation length mismatch");
    if (!(rho > 0.0)) throw InvalidRadiusError("decode: rho must be positive");
    for (std::size_t i = 0; i < m; ++i) {
        const Cplx d = r(i, i);
        if (!(d.real() > 0.0) || d.imag() != 0.0)
            throw std::invalid_argument("decode: r needs a positive real diagonal");
    }

    SearchState st{r,
                   y,
                   rho * rho,
                   m,
                   node_budget.value_or(std::numeric_limits<std::uint64_t>::max()),
                   std::vector<std::uint64_t>(m, 0),
                   0,
                   false,
                   false,
                   GaussianIntVector(m),
                   false,
                   0.0,
                   GaussianIntVector{}};
    descend(st, m - 1, 0.0);

    DecodeResult res;
    res.layer_counts = std::move(st.layer_counts);
    res.total = st.total;
    res.censored = st.censored;
    res.overflow = st.overflow;
    if (st.found) {
        res.solution = std::move(st.best);
        res.objective = st.best_obj;
    }
    return res;
}

DecodeResult solve(const ComplexMatrix& h, const CplxVector& r_vec, double rho,
                   PreprocMethod method, double delta, std::optional<std::uint64_t> node_budget) {
    if (r_vec.size() != h.rows()) throw std::invalid_argument("solve: observation length mismatch");
    const PreprocOutput pp = preprocess(h, method, delta);
    const CplxVector y = pp.q_tilde.apply_adjoint(r_vec);
    DecodeResult res = decode(pp.r_tilde, y, rho, node_budget);
    if (res.solution) res.solution = pp.t.apply(*res.solution);
    return res;
}

}  // namespace latticetail
