#include "latticetail/lattice.hpp"

#include "latticetail/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latticetail {

namespace {

constexpr double kPi = 3.14159265358979323846;

double factorial(std::size_t k) {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f;
}

void require_positive_diagonal(const ComplexMatrix& r) {
    for (std::size_t i = 0; i < r.rows(); ++i) {
        const Cplx d = r(i, i);
        if (!(d.real() > 0.0) || d.imag() != 0.0)
            throw std::invalid_argument("triangular factor needs a positive real diagonal");
    }
}

}  // namespace

double sphere_volume(std::size_t k, double rho) {
    if (k < 1) throw std::invalid_argument("sphere_volume: k >= 1");
    if (rho < 0.0) throw InvalidRadiusError("sphere_volume: negative radius");
    return std::pow(kPi, static_cast<double>(k)) * std::pow(rho * rho, static_cast<double>(k)) /
           factorial(k);
}

double sphere_surface(std::size_t k, double rho) {
    if (k < 1) throw std::invalid_argument("sphere_surface: k >= 1");
    if (rho < 0.0) throw InvalidRadiusError("sphere_surface: negative radius");
    return 2.0 * static_cast<double>(k) * std::pow(kPi, static_cast<double>(k)) *
           std::pow(rho, static_cast<double>(2 * k - 1)) / factorial(k);
}

double covering_radius_ub(const ComplexMatrix& r) {
    require_positive_diagonal(r);
    double s = 0.0;
    for (std::size_t i = 0; i < r.rows(); ++i) s += std::norm(r(i, i));
    return std::sqrt(0.5 * s);
}

SandwichBounds sandwich_bounds(const SphereSpec& spec, double mu) {
    const std::size_t k = spec.r_k.rows();
    require_positive_diagonal(spec.r_k);
    double det = 1.0;
    for (std::size_t i = 0; i < k; ++i) det *= std::norm(spec.r_k(i, i));
    const double rho = spec.radius;
    SandwichBounds b;
    b.lower = (sphere_volume(k, rho) - mu * sphere_surface(k, rho)) / det;
    b.upper = sphere_volume(k, rho + mu) / det;
    return b;
}

double residual_metric(const ComplexMatrix& r, const CplxVector& y, const GaussianIntVector& d) {
    const std::size_t k = r.rows();
    double total = 0.0;
    for (std::size_t ii = k; ii-- > 0;) {
        Cplx delta = y[ii];
        for (std::size_t j = ii + 1; j < k; ++j) delta -= r(ii, j) * d[j].to_cplx();
        delta -= r(ii, ii) * d[ii].to_cplx();
        total += std::norm(delta);
    }
    return total;
}

BruteCount count_points_brute(const SphereSpec& spec) {
    const std::size_t k = spec.r_k.rows();
    if (spec.radius < 0.0) throw InvalidRadiusError("count_points_brute: negative radius");
    if (k > 3) throw TooLargeError("count_points_brute: k > 3");
    require_positive_diagonal(spec.r_k);
    if (spec.center.size() != k)
        throw std::invalid_argument("count_points_brute: center length mismatch");

    double det = 1.0;
    for (std::size_t i = 0; i < k; ++i) det *= std::norm(spec.r_k(i, i));
    if (sphere_volume(k, spec.radius) / det > 1e6)
        throw TooLargeError("count_points_brute: predicted count above 1e6");

    // Interval back-substitution: bound each coordinate by a disk, given the
    // disks already derived for the later coordinates.
    std::vector<Cplx> centers(k);
    std::vector<double> radii(k);
    for (std::size_t ii = k; ii-- > 0;) {
        Cplx num = spec.center[ii];
        double rad = spec.radius;
        for (std::size_t j = ii + 1; j < k; ++j) {
            num -= spec.r_k(ii, j) * centers[j];
            rad += std::abs(spec.r_k(ii, j)) * radii[j];
        }
        const double diag = spec.r_k(ii, ii).real();
        centers[ii] = num / diag;
        radii[ii] = rad / diag;
    }

    // Integer candidate ranges, padded by one to swallow floating slop; the
    // exact membership test below is the arbiter.
    struct Range {
        std::int64_t re_lo, re_hi, im_lo, im_hi;
    };
    std::vector<Range> ranges(k);
    double box_size = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double cr = centers[i].real();
        const double ci = centers[i].imag();
        const double t = radii[i];
        ranges[i] = Range{static_cast<std::int64_t>(std::ceil(cr - t)) - 1,
                          static_cast<std::int64_t>(std::floor(cr + t)) + 1,
                          static_cast<std::int64_t>(std::ceil(ci - t)) - 1,
                          static_cast<std::int64_t>(std::floor(ci + t)) + 1};
        box_size *= static_cast<double>(ranges[i].re_hi - ranges[i].re_lo + 1) *
                    static_cast<double>(ranges[i].im_hi - ranges[i].im_lo + 1);
        if (box_size > 2e7) throw TooLargeError("count_points_brute: candidate box too large");
    }

    const double rho_sq = spec.radius * spec.radius;
    BruteCount result;
    GaussianIntVector d(k);
    // Nested scan over the box, coordinate 0 outermost.
    std::vector<std::int64_t> re(k), im(k);
    std::size_t level = 0;
    re[0] = ranges[0].re_lo;
    im[0] = ranges[0].im_lo;
    while (true) {
        if (level == k) {
            if (residual_metric(spec.r_k, spec.center, d) <= rho_sq) {
                result.points.push_back(d);
            }
            --level;
        } else {
            if (im[level] > ranges[level].im_hi) {
                im[level] = ranges[level].im_lo;
                ++re[level];
            }
            if (re[level] > ranges[level].re_hi) {
                if (level == 0) break;
                --level;
            } else {
                d[level] = GaussInt{re[level], im[level]};
                ++im[level];
                ++level;
                if (level < k) {
                    re[level] = ranges[level].re_lo;
                    im[level] = ranges[level].im_lo;
                }
            }
        }
    }
    result.count = result.points.size();
    return result;
}

GaussianIntVector clp_brute(const ComplexMatrix& r, const CplxVector& y) {
    const std::size_t m = r.rows();
    require_positive_diagonal(r);
    if (y.size() != m) throw std::invalid_argument("clp_brute: dimension mismatch");

    // Babai rounding point by back substitution.
    GaussianIntVector babai(m);
    for (std::size_t ii = m; ii-- > 0;) {
        Cplx num = y[ii];
        for (std::size_t j = ii + 1; j < m; ++j) num -= r(ii, j) * babai[j].to_cplx();
        const Cplx c = num / r(ii, ii).real();
        babai[ii] = GaussInt{std::llround(c.real()), std::llround(c.imag())};
    }

    constexpr std::int64_t kSpan = 3;
    GaussianIntVector best = babai;
    double best_obj = residual_metric(r, y, best);

    GaussianIntVector d(m);
    std::vector<std::int64_t> re(m), im(m);
    for (std::size_t i = 0; i < m; ++i) {
        re[i] = babai[i].re - kSpan;
        im[i] = babai[i].im - kSpan;
    }
    std::size_t level = 0;
    while (true) {
        if (level == m) {
            const double obj = residual_metric(r, y, d);
            if (obj < best_obj || (obj == best_obj && lex_less(d, best))) {
                best_obj = obj;
                best = d;
            }
            --level;
        } else {
            if (im[level] > babai[level].im + kSpan) {
                im[level] = babai[level].im - kSpan;
                ++re[level];
            }
            if (re[level] > babai[level].re + kSpan) {
                if (level == 0) break;
                --level;
            } else {
                d[level] = GaussInt{re[level], im[level]};
                ++im[level];
                ++level;
                if (level < m) {
                    re[level] = babai[level].re - kSpan;
                    im[level] = babai[level].im - kSpan;
                }
            }
        }
    }
    return best;
}

}  // namespace latticetail
