#include "latticetail/errors.hpp"
#include "latticetail/lattice.hpp"
#include "latticetail/qrd.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace latticetail;

namespace {

constexpr double kPi = 3.14159265358979323846;

SphereSpec make_spec(ComplexMatrix r, CplxVector y, double rho) {
    return SphereSpec{std::move(r), std::move(y), rho};
}

ComplexMatrix scalar_r(double v) {
    ComplexMatrix r(1, 1);
    r(0, 0) = Cplx{v, 0.0};
    return r;
}

}  // namespace

TEST_CASE("sphere volume closed forms") {
    CHECK(sphere_volume(1, 1.0) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(sphere_volume(2, 1.0) == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-14));
    CHECK(sphere_volume(3, 0.0) == 0.0);
    CHECK(sphere_volume(2, 3.0) == doctest::Approx(kPi * kPi * 81.0 / 2.0).epsilon(1e-14));
}

TEST_CASE("sphere surface matches the volume derivative") {
    CHECK(sphere_surface(1, 1.0) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(sphere_surface(1, 2.0) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK(sphere_surface(2, 1.0) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));
    for (std::size_t k = 1; k <= 4; ++k) {
        for (const double rho : {0.5, 1.0, 2.0, 7.0}) {
            const double fd = testutil::central_diff(
                [k](double x) { return sphere_volume(k, x); }, rho, 1e-6 * rho);
            CHECK(sphere_surface(k, rho) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("covering radius upper bound") {
    CHECK(covering_radius_ub(ComplexMatrix::identity(1)) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(covering_radius_ub(ComplexMatrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(covering_radius_ub(3.0 * ComplexMatrix::identity(2)) ==
          doctest::Approx(3.0).epsilon(1e-14));
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        TrialRng rng(50, trial);
        const ComplexMatrix r = qrd(testutil::random_matrix(rng, 3, 3)).r;
        for (const double b : {0.5, 2.0, 11.0})
            CHECK(covering_radius_ub(b * r) ==
                  doctest::Approx(b * covering_radius_ub(r)).epsilon(1e-12));
    }
}

TEST_CASE("sampled covering-radius lower bound stays below the upper bound") {
    TrialRng rng(51, 0);
    const ComplexMatrix r = qrd(testutil::random_matrix(rng, 2, 2)).r;
    const double ub = covering_radius_ub(r);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        CplxVector u(2);
        for (auto& c : u) c = Cplx{rng.uniform(), rng.uniform()};
        const CplxVector y = r.apply(u);
        const GaussianIntVector nearest = clp_brute(r, y);
        worst = std::max(worst, std::sqrt(residual_metric(r, y, nearest)));
    }
    CHECK(worst <= ub);

    // And the identity lattice: the bound is met exactly at the deep hole.
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    double worst_eye = 0.0;
    for (int i = 0; i < 10000; ++i) {
        CplxVector y(2);
        for (auto& c : y) c = Cplx{rng.uniform(), rng.uniform()};
        const GaussianIntVector nearest = clp_brute(eye, y);
        worst_eye = std::max(worst_eye, std::sqrt(residual_metric(eye, y, nearest)));
    }
    CHECK(worst_eye <= 1.0);
    CHECK(worst_eye > 0.9);  // corners of the unit cell approach distance 1
}

TEST_CASE("sandwich bounds worked example") {
    const double mu = std::sqrt(2.0) / 2.0;
    const SphereSpec spec = make_spec(ComplexMatrix::identity(1), {Cplx{0.0, 0.0}}, 10.0);
    const SandwichBounds b = sandwich_bounds(spec, mu);
    CHECK(b.lower == doctest::Approx(kPi * 100.0 - mu * 2.0 * kPi * 10.0).epsilon(1e-12));
    CHECK(b.upper == doctest::Approx(kPi * (10.0 + mu) * (10.0 + mu)).epsilon(1e-12));
    const BruteCount brute = count_points_brute(spec);
    CHECK(brute.count == 317);
    CHECK(b.lower <= static_cast<double>(brute.count));
    CHECK(static_cast<double>(brute.count) <= b.upper);
}

TEST_CASE("sandwich bounds degenerate cases") {
    const SphereSpec spec = make_spec(ComplexMatrix::identity(1), {Cplx{0.0, 0.0}}, 2.0);
    const SandwichBounds b0 = sandwich_bounds(spec, 0.0);
    CHECK(b0.lower == doctest::Approx(sphere_volume(1, 2.0)).epsilon(1e-14));
    CHECK(b0.upper == doctest::Approx(sphere_volume(1, 2.0)).epsilon(1e-14));

    const SphereSpec zero = make_spec(ComplexMatrix::identity(1), {Cplx{0.0, 0.0}}, 0.0);
    const SandwichBounds bz = sandwich_bounds(zero, 0.7);
    CHECK(bz.lower <= 0.0);
    CHECK(bz.upper == doctest::Approx(sphere_volume(1, 0.7)).epsilon(1e-14));
}

TEST_CASE("count_points_brute scalar examples") {
    const BruteCount nine = count_points_brute(make_spec(scalar_r(1.0), {Cplx{0.0, 0.0}}, 1.5));
    CHECK(nine.count == 9);
    const BruteCount one = count_points_brute(make_spec(scalar_r(1.0), {Cplx{0.0, 0.0}}, 0.5));
    REQUIRE(one.count == 1);
    CHECK(one.points[0][0] == GaussInt{0, 0});
    CHECK_THROWS_AS(count_points_brute(make_spec(scalar_r(1.0), {Cplx{0.0, 0.0}}, -1.0)),
                    InvalidRadiusError);
}

TEST_CASE("count_points_brute guards") {
    CHECK_THROWS_AS(count_points_brute(make_spec(ComplexMatrix::identity(4),
                                                 CplxVector(4, Cplx{0.0, 0.0}), 1.0)),
                    TooLargeError);
    CHECK_THROWS_AS(count_points_brute(make_spec(scalar_r(1.0), {Cplx{0.0, 0.0}}, 1e4)),
                    TooLargeError);
}

TEST_CASE("count_points_brute respects the triangular coupling") {
    // Upper triangular with a strong off-diagonal: membership must be decided
    // by the full metric, not per-coordinate disks.
    ComplexMatrix r(2, 2);
    r(0, 0) = Cplx{1.0, 0.0};
    r(0, 1) = Cplx{0.9, -0.4};
    r(1, 1) = Cplx{0.8, 0.0};
    const CplxVector y{Cplx{0.3, -0.2}, Cplx{0.45, 0.1}};
    const BruteCount res = count_points_brute(make_spec(r, y, 1.4));
    for (const GaussianIntVector& d : res.points)
        CHECK(residual_metric(r, y, d) <= 1.4 * 1.4);
    // Independent sanity: a wide rectangular rescan finds the same number.
    std::uint64_t slow = 0;
    for (std::int64_t a = -8; a <= 8; ++a)
        for (std::int64_t b = -8; b <= 8; ++b)
            for (std::int64_t c = -8; c <= 8; ++c)
                for (std::int64_t e = -8; e <= 8; ++e) {
                    const GaussianIntVector d{GaussInt{a, b}, GaussInt{c, e}};
                    if (residual_metric(r, y, d) <= 1.4 * 1.4) ++slow;
                }
    CHECK(res.count == slow);
}

TEST_CASE("clp_brute examples") {
    SUBCASE("exact lattice point") {
        TrialRng rng(52, 0);
        const ComplexMatrix r = qrd(testutil::random_matrix(rng, 2, 2)).r;
        const GaussianIntVector d{GaussInt{2, -1}, GaussInt{0, 3}};
        const CplxVector y = r.apply({d[0].to_cplx(), d[1].to_cplx()});
        const GaussianIntVector got = clp_brute(r, y);
        CHECK(got == d);
        CHECK(residual_metric(r, y, got) <= 1e-18);
    }
    SUBCASE("scalar nearest point") {
        const GaussianIntVector got = clp_brute(scalar_r(2.0), {Cplx{1.9, 0.0}});
        CHECK(got[0] == GaussInt{1, 0});
    }
    SUBCASE("tie breaks toward the lexicographically smaller vector") {
        const GaussianIntVector got = clp_brute(scalar_r(2.0), {Cplx{1.0, 0.0}});
        CHECK(got[0] == GaussInt{0, 0});
    }
}

TEST_CASE("sandwich bounds contain brute counts on random instances") {
    for (std::uint64_t trial = 0; trial < 60; ++trial) {
        TrialRng rng(53, trial);
        const std::size_t k = 1 + static_cast<std::size_t>(trial % 3);
        const ComplexMatrix r = qrd(testutil::random_matrix(rng, k, k)).r;
        const CplxVector y = testutil::random_vector(rng, k);
        const double rho = 0.3 + 1.2 * rng.uniform();
        const SphereSpec spec = make_spec(r, y, rho);
        BruteCount brute;
        try {
            brute = count_points_brute(spec);
        } catch (const TooLargeError&) {
            continue;  // ill-conditioned draw; the guard is doing its job
        }
        const SandwichBounds b = sandwich_bounds(spec, covering_radius_ub(r));
        CHECK(b.lower <= static_cast<double>(brute.count));
        CHECK(static_cast<double>(brute.count) <= b.upper);
    }
}

TEST_CASE("residual_metric agrees with the direct norm") {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        TrialRng rng(54, trial);
        const std::size_t k = 1 + static_cast<std::size_t>(trial % 3);
        const ComplexMatrix r = qrd(testutil::random_matrix(rng, k, k)).r;
        const CplxVector y = testutil::random_vector(rng, k);
        GaussianIntVector d(k);
        for (auto& g : d)
            g = GaussInt{static_cast<std::int64_t>(rng.uniform() * 5) - 2,
                         static_cast<std::int64_t>(rng.uniform() * 5) - 2};
        CplxVector rd = r.apply([&] {
            CplxVector v(k);
            for (std::size_t i = 0; i < k; ++i) v[i] = d[i].to_cplx();
            return v;
        }());
        double direct = 0.0;
        for (std::size_t i = 0; i < k; ++i) direct += std::norm(y[i] - rd[i]);
        CHECK(residual_metric(r, y, d) == doctest::Approx(direct).epsilon(1e-12));
    }
}
