#include "latticetail/decoder.hpp"
#include "latticetail/errors.hpp"
#include "latticetail/lattice.hpp"
#include "latticetail/qrd.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace latticetail;

namespace {

CplxVector tail(const CplxVector& y, std::size_t k) {
    return CplxVector(y.end() - static_cast<std::ptrdiff_t>(k), y.end());
}

}  // namespace

TEST_CASE("gaussian_integers_in_disk examples") {
    SUBCASE("unit disk around the origin") {
        const auto pts = gaussian_integers_in_disk(Cplx{0, 0}, 1.0);
        REQUIRE(pts.size() == 5);
        CHECK(pts[0] == GaussInt{-1, 0});
        CHECK(pts[1] == GaussInt{0, -1});
        CHECK(pts[2] == GaussInt{0, 0});
        CHECK(pts[3] == GaussInt{0, 1});
        CHECK(pts[4] == GaussInt{1, 0});
    }
    SUBCASE("no integer near a half point") {
        CHECK(gaussian_integers_in_disk(Cplx{0.5, 0}, 0.4).empty());
    }
    SUBCASE("radius zero on an exact hit") {
        const auto pts = gaussian_integers_in_disk(Cplx{3, 4}, 0.0);
        REQUIRE(pts.size() == 1);
        CHECK(pts[0] == GaussInt{3, 4});
    }
    SUBCASE("negative radius yields nothing") {
        CHECK(gaussian_integers_in_disk(Cplx{0, 0}, -1.0).empty());
    }
}

TEST_CASE("gaussian_integers_in_disk is exactly the disk") {
    for (std::uint64_t trial = 0; trial < 40; ++trial) {
        TrialRng rng(70, trial);
        const Cplx c{4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0};
        const double radius = 2.5 * rng.uniform();
        const auto pts = gaussian_integers_in_disk(c, radius);
        for (const GaussInt& d : pts) CHECK(std::abs(c - d.to_cplx()) <= radius);
        std::uint64_t slow = 0;
        for (std::int64_t re = -6; re <= 6; ++re)
            for (std::int64_t im = -6; im <= 6; ++im)
                if (std::abs(c - Cplx{static_cast<double>(re), static_cast<double>(im)}) <= radius)
                    ++slow;
        CHECK(pts.size() == slow);
        CHECK(std::is_sorted(pts.begin(), pts.end(), [](GaussInt a, GaussInt b) {
            return lex_less(a, b);
        }));
    }
}

TEST_CASE("decode worked examples") {
    SUBCASE("identity, tight radius") {
        const DecodeResult res =
            decode(ComplexMatrix::identity(2), CplxVector(2, Cplx{0, 0}), 0.5);
        CHECK(res.layer_counts == std::vector<std::uint64_t>{1, 1});
        CHECK(res.total == 2);
        REQUIRE(res.found());
        CHECK(*res.solution == GaussianIntVector{GaussInt{0, 0}, GaussInt{0, 0}});
        CHECK(*res.objective == 0.0);
    }
    SUBCASE("scalar radius 1.5 counts nine points") {
        const DecodeResult res = decode(ComplexMatrix::identity(1), {Cplx{0, 0}}, 1.5);
        CHECK(res.layer_counts == std::vector<std::uint64_t>{9});
        REQUIRE(res.found());
        CHECK(*res.solution == GaussianIntVector{GaussInt{0, 0}});
    }
    SUBCASE("deep hole with a small radius finds nothing") {
        const DecodeResult res = decode(ComplexMatrix::identity(1), {Cplx{0.5, 0.5}}, 0.1);
        CHECK_FALSE(res.found());
        CHECK(res.layer_counts == std::vector<std::uint64_t>{0});
        CHECK(res.total == 0);
    }
}

TEST_CASE("decode input validation") {
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    const CplxVector y(2, Cplx{0, 0});
    CHECK_THROWS_AS(decode(eye, y, 0.0), InvalidRadiusError);
    CHECK_THROWS_AS(decode(eye, y, -1.0), InvalidRadiusError);
    CHECK_THROWS_AS(decode(eye, CplxVector(3, Cplx{0, 0}), 1.0), std::invalid_argument);
    ComplexMatrix bad = eye;
    bad(1, 1) = Cplx{-1.0, 0.0};
    CHECK_THROWS_AS(decode(bad, y, 1.0), std::invalid_argument);
    bad(1, 1) = Cplx{1.0, 0.5};
    CHECK_THROWS_AS(decode(bad, y, 1.0), std::invalid_argument);
}

TEST_CASE("layer counts match the brute-force oracle exactly") {
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        TrialRng rng(71, trial);
        const std::size_t m = 1 + static_cast<std::size_t>(trial % 3);
        const ComplexMatrix r = qrd(testutil::random_matrix(rng, m, m)).r;
        const CplxVector y = testutil::random_vector(rng, m);
        const double rho = 0.3 + 1.0 * rng.uniform();

        DecodeResult res;
        std::vector<BruteCount> brute(m);
        try {
            res = decode(r, y, rho);
            for (std::size_t k = 1; k <= m; ++k)
                brute[k - 1] = count_points_brute(SphereSpec{r.bottom_right(k), tail(y, k), rho});
        } catch (const TooLargeError&) {
            continue;
        }

        for (std::size_t k = 1; k <= m; ++k)
            CHECK(res.layer_counts[k - 1] == brute[k - 1].count);
        CHECK(res.total == res.layer_counts[0] + (m > 1 ? res.layer_counts[1] : 0) +
                               (m > 2 ? res.layer_counts[2] : 0));
        CHECK(res.found() == (res.layer_counts[m - 1] > 0));

        if (res.found()) {
            // The enumerated point set is the optimality arbiter: the decoder
            // must return the (objective, lex) minimum over it.
            REQUIRE_FALSE(brute[m - 1].points.empty());
            const GaussianIntVector* best = &brute[m - 1].points.front();
            double best_obj = residual_metric(r, y, *best);
            for (const GaussianIntVector& d : brute[m - 1].points) {
                const double obj = residual_metric(r, y, d);
                if (obj < best_obj || (obj == best_obj && lex_less(d, *best))) {
                    best = &d;
                    best_obj = obj;
                }
            }
            CHECK(*res.solution == *best);
            CHECK(*res.objective == best_obj);
            // clp_brute agrees whenever its documented Babai-box limitation
            // is not binding, i.e. the box reached the optimum.
            const GaussianIntVector clp = clp_brute(r, y);
            if (residual_metric(r, y, clp) == best_obj) CHECK(clp == *best);
        }
    }
}

TEST_CASE("sandwich bounds hold on every layer of a decode") {
    for (std::uint64_t trial = 0; trial < 30; ++trial) {
        TrialRng rng(72, trial);
        const ComplexMatrix r = qrd(testutil::random_matrix(rng, 3, 3)).r;
        const CplxVector y = testutil::random_vector(rng, 3);
        const double rho = 0.4 + 0.8 * rng.uniform();
        const DecodeResult res = decode(r, y, rho);
        const double mu = covering_radius_ub(r);
        for (std::size_t k = 1; k <= 3; ++k) {
            const SandwichBounds b =
                sandwich_bounds(SphereSpec{r.bottom_right(k), tail(y, k), rho}, mu);
            CHECK(b.lower <= static_cast<double>(res.layer_counts[k - 1]));
            CHECK(static_cast<double>(res.layer_counts[k - 1]) <= b.upper);
        }
    }
}

TEST_CASE("layer counts are monotone in the radius") {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        TrialRng rng(73, trial);
        const ComplexMatrix r = qrd(testutil::random_matrix(rng, 3, 3)).r;
        const CplxVector y = testutil::random_vector(rng, 3);
        const double rho1 = 0.3 + 0.5 * rng.uniform();
        const double rho2 = rho1 + rng.uniform();
        const DecodeResult a = decode(r, y, rho1);
        const DecodeResult b = decode(r, y, rho2);
        for (std::size_t k = 0; k < 3; ++k) CHECK(a.layer_counts[k] <= b.layer_counts[k]);
        CHECK(a.total <= b.total);
    }
}

TEST_CASE("node budget censors with exact accounting") {
    const ComplexMatrix r = ComplexMatrix::identity(2);
    const CplxVector y(2, Cplx{0, 0});
    const DecodeResult full = decode(r, y, 2.5);
    REQUIRE(full.total > 20);
    CHECK_FALSE(full.censored);

    const DecodeResult cut = decode(r, y, 2.5, 10);
    CHECK(cut.censored);
    CHECK(cut.total == 10);
    CHECK(cut.layer_counts[0] + cut.layer_counts[1] == cut.total);

    // A budget at or above the true total never censors.
    const DecodeResult exact = decode(r, y, 2.5, full.total);
    CHECK_FALSE(exact.censored);
    CHECK(exact.total == full.total);
    CHECK(exact.solution == full.solution);
}

TEST_CASE("solve recovers a noiseless integer observation") {
    const CplxVector obs{Cplx{3, 4}, Cplx{-2, 0}};
    const DecodeResult res = solve(ComplexMatrix::identity(2), obs, 0.5, PreprocMethod::Direct);
    REQUIRE(res.found());
    CHECK(*res.solution == GaussianIntVector{GaussInt{3, 4}, GaussInt{-2, 0}});
    CHECK(res.total == 2);
}

TEST_CASE("all methods recover the transmitted point without noise") {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        TrialRng rng(74, trial);
        const ComplexMatrix h = testutil::random_matrix(rng, 2, 2);
        const GaussianIntVector sent{GaussInt{1, -2}, GaussInt{0, 1}};
        const CplxVector r_vec = h.apply({sent[0].to_cplx(), sent[1].to_cplx()});
        for (const auto method :
             {PreprocMethod::Direct, PreprocMethod::Clll, PreprocMethod::Vblast}) {
            const DecodeResult res = solve(h, r_vec, 0.5, method);
            REQUIRE(res.found());
            CHECK(*res.solution == sent);
            CHECK(*res.objective <= 1e-16);
        }
    }
}

TEST_CASE("methods agree on the solution whenever both find one") {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        TrialRng rng(75, trial);
        const ComplexMatrix h = testutil::random_matrix(rng, 3, 3);
        const CplxVector r_vec = testutil::random_vector(rng, 3);
        const double rho = 0.6 + 0.8 * rng.uniform();
        const DecodeResult direct = solve(h, r_vec, rho, PreprocMethod::Direct);
        for (const auto method : {PreprocMethod::Clll, PreprocMethod::Vblast}) {
            const DecodeResult other = solve(h, r_vec, rho, method);
            if (direct.found() && other.found()) {
                CHECK(*other.solution == *direct.solution);
                CHECK(*other.objective == doctest::Approx(*direct.objective).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("preprocessing changes the counts, not the decoded point") {
    // A skewed basis: direct enumeration visits far more nodes than the
    // reduced one, but both must land on the same lattice point.
    ComplexMatrix h(2, 2);
    h(0, 0) = Cplx{1, 0};
    h(0, 1) = Cplx{9, 1};
    h(1, 1) = Cplx{0.5, 0};
    TrialRng rng(76, 0);
    const CplxVector r_vec{rng.cnormal(1.0), rng.cnormal(1.0)};
    const DecodeResult direct = solve(h, r_vec, 2.0, PreprocMethod::Direct);
    const DecodeResult reduced = solve(h, r_vec, 2.0, PreprocMethod::Clll);
    REQUIRE(direct.found());
    REQUIRE(reduced.found());
    CHECK(*direct.solution == *reduced.solution);
    CHECK(reduced.total < direct.total);
}
