#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "sectomo/phi.hpp"
#include "sectomo/probes.hpp"

using namespace sectomo;
using Catch::Approx;

TEST_CASE("tangent chord probe: concentric disks give constant chords") {
    const auto K = ConvexBody2::disk({0, 0}, 3.0);
    const auto D = ConvexBody2::disk({0, 0}, 1.0);
    const auto t = tangent_chord_probe(K, D, 64);
    const double expect = 2.0 * std::sqrt(2.0); // sqrt(9 - 1)
    REQUIRE(t.theta.size() == 64);
    for (size_t k = 0; k < t.theta.size(); ++k) {
        CHECK(t.v1[k] == Approx(expect).epsilon(1e-12));
        CHECK(t.v2[k] == Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("tangent chord probe: near-degenerate annulus") {
    const auto K = ConvexBody2::disk({0, 0}, 1.0 + 1e-6);
    const auto D = ConvexBody2::disk({0, 0}, 1.0);
    const auto t = tangent_chord_probe(K, D, 16);
    const double expect = std::sqrt((1.0 + 1e-6) * (1.0 + 1e-6) - 1.0);
    for (double v : t.v1) CHECK(v == Approx(expect).margin(1e-10));
}

TEST_CASE("tangent chord probe: ellipse with offset disk frame") {
    const auto K = ConvexBody2::ellipse({0, 0}, 2.0, 1.0);
    const auto D = ConvexBody2::disk({0.5, 0}, 0.3);
    const auto t = tangent_chord_probe(K, D, 64);
    // frame xi=(1,0): line x=0.8, endpoints y = +-sqrt(1-0.8^2/4), p=(0.8,0)
    const double expect = std::sqrt(1.0 - 0.16);
    CHECK(t.theta[0] == 0.0);
    CHECK(t.v1[0] == Approx(expect).epsilon(1e-9));
    CHECK(t.v2[0] == Approx(expect).epsilon(1e-9));
}

TEST_CASE("tangent chord probe rejects escaped inner bodies") {
    const auto K = ConvexBody2::disk({0, 0}, 3.0);
    CHECK_THROWS_AS(tangent_chord_probe(K, ConvexBody2::disk({5, 0}, 1.0), 16), InnerNotContained);
    CHECK_THROWS_AS(tangent_chord_probe(K, ConvexBody2::disk({0, 0}, 1.0), 4), GridTooCoarse);
}

TEST_CASE("tangent chord probe agrees with direct chord recomputation") {
    const auto K = ConvexBody2::ellipse({0.2, -0.1}, 2.5, 1.4, 0.3);
    const auto D = ConvexBody2::disk({0.3, 0.1}, 0.5);
    const auto t = tangent_chord_probe(K, D, 128);
    for (size_t k = 0; k < t.theta.size(); ++k) {
        const TangentFrame f = tangent_frame(D, t.theta[k]);
        const auto c = K.chord(f.line);
        REQUIRE(c);
        const double s1 = dot(c->first - f.p, f.u), s2 = dot(c->second - f.p, f.u);
        CHECK(t.v1[k] == Approx(std::max(s1, s2)).margin(1e-9));
        CHECK(t.v2[k] == Approx(-std::min(s1, s2)).margin(1e-9));
    }
}

TEST_CASE("tangent chord probe with polygon inner body skips edge normals") {
    const auto K = ConvexBody2::disk({0, 0}, 2.0);
    const auto D = ConvexBody2::polygon({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
    const auto t = tangent_chord_probe(K, D, 64);
    const auto normals = edge_normal_angles(D);
    REQUIRE(t.theta.size() == 60); // four edge normals fall on the 64-grid
    for (double th : t.theta) CHECK_FALSE(near_edge_normal(normals, th));
}

TEST_CASE("symmetric pair: reflected inner body sees reflected data") {
    // for origin-symmetric K, rho_{K,D}(u,xi) = rho_{K,-D}(-u,-xi)
    const auto K = ConvexBody2::ellipse({0, 0}, 2.5, 1.2, 0.4);
    const auto D = ConvexBody2::disk({0.5, 0.2}, 0.3);
    const auto Dn = ConvexBody2::disk({-0.5, -0.2}, 0.3);
    const auto t1 = tangent_chord_probe(K, D, 64);
    const auto t2 = tangent_chord_probe(K, Dn, 64);
    for (size_t k = 0; k < t1.theta.size(); ++k) {
        // the frame of -D at xi' = -xi has u' = -u, so rho_{K,-D}(-u,-xi) is
        // the first payload of the reflected table half a turn away
        CHECK(t1.v1[k] == Approx(t2.value1(t1.theta[k] + pi)).margin(1e-9));
        CHECK(t1.v2[k] == Approx(t2.value2(t1.theta[k] + pi)).margin(1e-9));
    }
}

TEST_CASE("power functional") {
    const double r = 2.0 * std::sqrt(2.0);
    CHECK(power_functional(r, r, 1.0, Mode::Sum) == Approx(4.0 * std::sqrt(2.0)));
    CHECK(power_functional(1.7, 1.7, 3.0, Mode::Diff) == 0.0);
    CHECK(power_functional(2.0, 1.0, 2.0, Mode::Sum) == Approx(5.0));
    CHECK_THROWS_AS(power_functional(1.0, 1.0, 0.0, Mode::Sum), InvalidPower);
    CHECK_THROWS_AS(power_functional(1.0, 1.0, -2.0, Mode::Sum), InvalidPower);
}

TEST_CASE("cap area probe") {
    SECTION("concentric disks: circular segment, constant") {
        const auto t = cap_area_probe(ConvexBody2::disk({0, 0}, 2.0), ConvexBody2::disk({0, 0}, 1.0), 32);
        const double expect = 4.0 * pi / 3.0 - std::sqrt(3.0);
        for (double v : t.v1) CHECK(v == Approx(expect).epsilon(1e-12));
    }
    SECTION("square body, unit inner disk, frame xi=(1,0)") {
        const auto K = ConvexBody2::polygon({{-2, -2}, {2, -2}, {2, 2}, {-2, 2}});
        const auto t = cap_area_probe(K, ConvexBody2::disk({0, 0}, 1.0), 32);
        CHECK(t.theta[0] == 0.0);
        CHECK(t.v1[0] == Approx(4.0).epsilon(1e-9)); // [1,2] x [-2,2]
    }
    SECTION("inner disk grown to the body: caps vanish") {
        const auto t = cap_area_probe(ConvexBody2::disk({0, 0}, 2.0),
                                      ConvexBody2::disk({0, 0}, 2.0 - 1e-5), 16);
        for (double v : t.v1) {
            CHECK(v >= 0.0);
            CHECK(v < 1e-6);
        }
    }
}

TEST_CASE("cap derivative reproduces the chord-power difference") {
    SECTION("concentric disks: identically zero") {
        const auto t = cap_area_probe(ConvexBody2::disk({0, 0}, 2.0), ConvexBody2::disk({0, 0}, 1.0), 512);
        for (int k = 0; k < 8; ++k)
            CHECK(cap_derivative_to_rho2_diff(t, two_pi * k / 8.0) == Approx(0.0).margin(1e-9));
    }
    SECTION("mirror-symmetric ellipse scenario: zero at the symmetry frame") {
        const auto K = ConvexBody2::ellipse({0, 0}, 2.0, 1.0);
        const auto D = ConvexBody2::disk({0.5, 0}, 0.3);
        const auto t = cap_area_probe(K, D, 512);
        CHECK(cap_derivative_to_rho2_diff(t, 0.0) == Approx(0.0).margin(1e-7));
    }
    SECTION("offset disk body vs direct chords") {
        const auto K = ConvexBody2::disk({0.4, 0}, 3.0);
        const auto D = ConvexBody2::disk({0, 0}, 1.0);
        const auto caps = cap_area_probe(K, D, 512);
        const auto chords = tangent_chord_probe(K, D, 512);
        for (double th : {pi / 2.0, 0.7, 2.9, 4.2}) {
            const double direct =
                0.5 * (chords.value1(th) * chords.value1(th) - chords.value2(th) * chords.value2(th));
            const double est = cap_derivative_to_rho2_diff(caps, th);
            CHECK(est == Approx(direct).margin(std::max(1e-5, 1e-3 * std::fabs(direct))));
        }
    }
    SECTION("coarse tables are rejected") {
        const auto t = cap_area_probe(ConvexBody2::disk({0, 0}, 2.0), ConvexBody2::disk({0, 0}, 1.0), 64);
        CHECK_THROWS_AS(cap_derivative_to_rho2_diff(t, 0.0), GridTooCoarse);
    }
}

TEST_CASE("point chord probe") {
    const auto K = ConvexBody2::disk({0, 0}, 1.0);
    const auto t = point_chord_probe(K, {0.3, 0}, 64);
    CHECK(t.v1[0] == Approx(0.7).epsilon(1e-12));
    CHECK(t.v2[0] == Approx(1.3).epsilon(1e-12));
    SECTION("offset-disk identity rho(xi) - rho(-xi) = -2<p,xi>") {
        for (size_t k = 0; k < t.theta.size(); ++k)
            CHECK(t.v1[k] - t.v2[k] == Approx(-2.0 * 0.3 * std::cos(t.theta[k])).margin(1e-9));
    }
    SECTION("center of a symmetric body: zero difference") {
        const auto E = ConvexBody2::ellipse({1, 2}, 2.0, 0.7, 0.5);
        const auto tc = point_chord_probe(E, {1, 2}, 64);
        for (size_t k = 0; k < tc.theta.size(); ++k)
            CHECK(tc.v1[k] - tc.v2[k] == Approx(0.0).margin(1e-9));
    }
    SECTION("point outside") {
        CHECK_THROWS_AS(point_chord_probe(K, {2, 0}, 16), PointOutsideBody);
    }
}

TEST_CASE("halfspace volume probe") {
    const auto K = ConvexBody2::disk({0, 0}, 1.0);
    SECTION("centered: every direction halves the disk") {
        const auto t = halfspace_volume_probe(K, {0, 0}, 32);
        for (double v : t.v1) CHECK(v == Approx(pi / 2.0).epsilon(1e-12));
    }
    SECTION("offset point: circular segment") {
        const auto t = halfspace_volume_probe(K, {0.3, 0}, 32);
        const double expect = std::acos(0.3) - 0.3 * std::sqrt(1.0 - 0.09);
        CHECK(t.v1[0] == Approx(expect).epsilon(1e-9));
    }
    SECTION("square through its center") {
        const auto S = ConvexBody2::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
        const auto t = halfspace_volume_probe(S, {0.5, 0.5}, 8);
        CHECK(t.value1(pi / 2.0) == Approx(0.5).epsilon(1e-9));
    }
}

TEST_CASE("revolution section areas") {
    const auto ball = ConvexBody2::disk({0, 0}, 1.0);
    SECTION("great circle") {
        CHECK(revolution_section_area(ball, {0.0, 0, 0, 1}) == Approx(pi).epsilon(1e-6));
        CHECK(revolution_section_area(ball, {0.0, 1, 0, 0}) == Approx(pi).epsilon(1e-6));
    }
    SECTION("ball radius 2 cut at distance 1") {
        const auto b2 = ConvexBody2::disk({0, 0}, 2.0);
        CHECK(revolution_section_area(b2, {1.0, 1, 0, 0}) == Approx(3.0 * pi).epsilon(1e-6));
    }
    SECTION("oblique plane, closed-form ball section") {
        // plane through (0.5,0,0), normal 60 deg off the axis -> distance 0.25
        const Plane3 pl{0.5, 0.5, 0.0, std::sqrt(3.0) / 2.0};
        CHECK(revolution_section_area(ball, pl) == Approx(pi * (1.0 - 0.0625)).epsilon(1e-6));
    }
    SECTION("prolate spheroid axial cut") {
        const auto prof = ConvexBody2::ellipse({0, 0}, 2.0, 1.0);
        // r^2(x) = 1 - x^2/4 at x=0.5
        CHECK(revolution_section_area(prof, {0.5, 1, 0, 0}) == Approx(pi * 0.9375).epsilon(1e-6));
    }
    SECTION("oblique spheroid section vs Monte Carlo") {
        const auto prof = ConvexBody2::ellipse({0, 0}, 2.0, 1.0);
        const Plane3 pl{0.3, 0.6, 0.0, 0.8};
        const double quad = revolution_section_area(prof, pl);
        // sample the plane disk of radius 3 around (0.3,0,0) projected in-plane
        std::mt19937_64 rng(20240817);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        const double e2y = 1.0, e2z = 0.0;                 // n x axis normalized
        const double e1x = -0.8, e1y = 0.0, e1z = 0.6;     // n x e2
        long hits = 0;
        const long n = 10'000'000;
        for (long s = 0; s < n; ++s) {
            const double a = u(rng), b = u(rng);
            const double x = 0.3 + a * e1x;
            const double y = a * e1y + b * e2y;
            const double z = a * e1z + b * e2z;
            if (x * x / 4.0 + y * y + z * z <= 1.0) ++hits;
        }
        const double mc = 36.0 * double(hits) / double(n);
        CHECK(quad == Approx(mc).margin(1e-3 * std::max(1.0, quad) * 3.0));
    }
    SECTION("asymmetric profile is rejected") {
        CHECK_THROWS_AS(revolution_section_area(ConvexBody2::disk({0, 0.5}, 1.0), {0.0, 1, 0, 0}),
                        NonConvexProfile);
    }
}

TEST_CASE("vertex cone probe") {
    const auto D = ConvexBody2::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    const auto K = ConvexBody2::disk({0, 0}, 3.0);
    // vertex (1,1) is index 2 in ccw order
    const auto [a0, a1] = vertex_cone_interval(D, 2);
    CHECK(Angle::wrap(a1 - a0) == Approx(pi / 2.0).epsilon(1e-12));

    const auto t = vertex_cone_probe(K, D, 2, 64);
    REQUIRE(t.cone);
    SECTION("diagonal chord split at the vertex") {
        const double th = 5.0 * pi / 4.0; // toward the center
        CHECK(t.value1(th) == Approx(3.0 + std::sqrt(2.0)).margin(1e-9));
        CHECK(t.value2(th) == Approx(3.0 - std::sqrt(2.0)).margin(1e-9));
        // opposite nappe resolves to the swapped payload
        CHECK(t.value1(pi / 4.0) == Approx(3.0 - std::sqrt(2.0)).margin(1e-9));
    }
    SECTION("directions outside the double cone are rejected") {
        CHECK_THROWS_AS(t.value1(3.0 * pi / 4.0), DirectionOutsideCone);
        CHECK_NOTHROW(t.value1(0.1)); // opposite nappe of the cone
    }
    SECTION("the four vertex cones cover all directions") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, two_pi);
        for (int s = 0; s < 10000; ++s) {
            const double th = u(rng);
            bool covered = false;
            for (size_t k = 0; k < 4 && !covered; ++k) {
                const auto [b0, b1] = vertex_cone_interval(D, k);
                const double w = Angle::wrap(b1 - b0);
                const double rel = Angle::wrap(th - b0);
                const double opp = Angle::wrap(th - b0 - pi);
                covered = rel <= w + 1e-12 || opp <= w + 1e-12;
            }
            CHECK(covered);
        }
    }
}
