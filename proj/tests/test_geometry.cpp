#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sectomo/geometry.hpp"

using namespace sectomo;

namespace {
const ConvexBody2 unit_disk = ConvexBody2::disk({0, 0}, 1.0);
const ConvexBody2 square = ConvexBody2::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
const ConvexBody2 ell21 = ConvexBody2::ellipse({0, 0}, 2.0, 1.0);
}

TEST_CASE("support function basics") {
    for (double th : {0.0, 0.7, 2.9, 5.5}) CHECK(unit_disk.support(th) == Catch::Approx(1.0));

    const auto off = ConvexBody2::disk({1, 0}, 1.0);
    CHECK(off.support(0.0) == Catch::Approx(2.0));

    CHECK(square.support(pi / 4) == Catch::Approx(std::sqrt(2.0)));
    CHECK(square.support(0.0) == Catch::Approx(1.0));
}

TEST_CASE("support derivative") {
    CHECK(unit_disk.support_derivative(1.3) == Catch::Approx(0.0).margin(1e-15));

    const auto off = ConvexBody2::disk({1, 0}, 1.0); // h = cos(theta) + 1
    CHECK(off.support_derivative(pi / 2) == Catch::Approx(-1.0));

    const auto ser = ConvexBody2::support_series(2.0, {{0.0, 0.0}, {0.1, 0.0}});
    CHECK(ser.support(pi / 4) == Catch::Approx(2.0)); // cos(pi/2) = 0
    CHECK(ser.support_derivative(pi / 4) == Catch::Approx(-0.2));

    CHECK_THROWS_AS(square.support_derivative(0.0), NotDifferentiable);
    // inside a vertex normal fan the polygon support is smooth
    CHECK(square.support_derivative(pi / 4) ==
          Catch::Approx(dot(Vec2{1, 1}, perp(dir(pi / 4)))));
}

TEST_CASE("contact sets") {
    const auto c = unit_disk.contact_set(0.0);
    CHECK_FALSE(c.is_segment);
    CHECK(c.a.x == Catch::Approx(1.0));
    CHECK(c.a.y == Catch::Approx(0.0).margin(1e-15));

    const auto face = square.contact_set(0.0);
    CHECK(face.is_segment);
    CHECK(face.a.x == Catch::Approx(1.0));
    CHECK(face.b.x == Catch::Approx(1.0));
    CHECK(std::min(face.a.y, face.b.y) == Catch::Approx(-1.0));
    CHECK(std::max(face.a.y, face.b.y) == Catch::Approx(1.0));

    const auto vtx = square.contact_set(pi / 4);
    CHECK_FALSE(vtx.is_segment);
    CHECK(vtx.a.x == Catch::Approx(1.0));
    CHECK(vtx.a.y == Catch::Approx(1.0));
}

TEST_CASE("chords") {
    const auto c = unit_disk.chord(Line2{{1, 0}, 0.0});
    REQUIRE(c);
    CHECK(dist(c->first, c->second) == Catch::Approx(2.0));

    const auto big = ConvexBody2::disk({0, 0}, 3.0);
    const auto c2 = big.chord(Line2{{1, 0}, 1.0});
    REQUIRE(c2);
    CHECK(dist(c2->first, c2->second) == Catch::Approx(4.0 * std::sqrt(2.0)));

    const auto c3 = ell21.chord(Line2{{1, 0}, 1.0});
    REQUIRE(c3);
    CHECK(dist(c3->first, c3->second) == Catch::Approx(std::sqrt(3.0)));

    CHECK_FALSE(unit_disk.chord(Line2{{1, 0}, 1.5}).has_value());
}

TEST_CASE("chord endpoints lie on line and boundary") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(0.0, two_pi), offs(-0.9, 0.9);
    const ConvexBody2 bodies[] = {
        unit_disk, ell21, square,
        ConvexBody2::support_series(2.0, {{0.0, 0.0}, {0.1, 0.05}})};
    for (const auto& b : bodies) {
        for (int k = 0; k < 25; ++k) {
            const Line2 l{dir(ang(rng)), offs(rng)};
            const auto c = b.chord(l);
            REQUIRE(c);
            for (const Point2& e : {c->first, c->second}) {
                CHECK(std::fabs(l.signed_dist(e)) < 1e-9);
                CHECK(std::fabs(b.gauge(e) - 1.0) < 1e-7);
            }
        }
    }
}

TEST_CASE("halfplane areas") {
    const auto d2 = ConvexBody2::disk({0, 0}, 2.0);
    CHECK(d2.halfplane_area(Line2{{1, 0}, 1.0}, +1) ==
          Catch::Approx(4.0 * pi / 3.0 - std::sqrt(3.0)));

    CHECK(unit_disk.halfplane_area(Line2{{1, 0}, 0.0}, +1) == Catch::Approx(pi / 2));
    CHECK(unit_disk.halfplane_area(Line2{{1, 0}, 0.0}, -1) == Catch::Approx(pi / 2));

    const auto sq02 = ConvexBody2::polygon({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    CHECK(sq02.halfplane_area(Line2{{1, 0}, 1.0}, +1) == Catch::Approx(2.0));
}

TEST_CASE("halfplane areas sum to total area") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(0.0, two_pi), offs(-0.8, 0.8);
    const ConvexBody2 bodies[] = {
        unit_disk, ell21, square,
        ConvexBody2::support_series(1.5, {{0.05, 0.0}, {0.0, 0.08}})};
    for (const auto& b : bodies) {
        for (int k = 0; k < 20; ++k) {
            const Line2 l{dir(ang(rng)), offs(rng)};
            const double s = b.halfplane_area(l, +1) + b.halfplane_area(l, -1);
            CHECK(s == Catch::Approx(b.area()).epsilon(1e-7));
        }
    }
}

TEST_CASE("support dominates sampled boundary points") {
    const ConvexBody2 bodies[] = {
        ell21, square, ConvexBody2::support_series(2.0, {{0.1, -0.05}, {0.02, 0.1}})};
    for (const auto& b : bodies) {
        const auto poly = b.polygonize(512);
        for (int k = 0; k < 128; ++k) {
            const double th = two_pi * k / 128.0;
            const Vec2 u = dir(th);
            double best = -1e300;
            for (const Point2& p : poly) best = std::max(best, dot(p, u));
            CHECK(b.support(th) >= best - 1e-9);
        }
    }
}

TEST_CASE("tangent lines through an external point") {
    const auto tp = tangent_lines_through(unit_disk, {2, 0});
    const Point2 cl = tp.left.contact.point(), cr = tp.right.contact.point();
    CHECK(cl.x == Catch::Approx(0.5));
    CHECK(cr.x == Catch::Approx(0.5));
    CHECK(std::fabs(cl.y) == Catch::Approx(std::sqrt(3.0) / 2.0));
    CHECK(cl.y == Catch::Approx(-cr.y));
    // convention: left = positive cross with the view direction
    CHECK(cross(cl - Vec2{2, 0}, Vec2{0, 0} - Vec2{2, 0}) > 0.0);

    for (const auto& t : {tp.left, tp.right}) {
        CHECK(std::fabs(dot(Vec2{2, 0}, t.line.normal) - t.line.offset) < 1e-9);
        for (int k = 0; k < 64; ++k)
            CHECK(unit_disk.support(two_pi * k / 64.0) >= 0.0); // body bounded
        CHECK(unit_disk.support_dir(t.line.normal) == Catch::Approx(t.line.offset).margin(1e-9));
    }

    const auto sq = tangent_lines_through(square, {3, 3});
    const Point2 a = sq.left.contact.point(), b = sq.right.contact.point();
    CHECK(((std::fabs(a.x - 1) < 1e-8 && std::fabs(a.y + 1) < 1e-8) ||
           (std::fabs(a.x + 1) < 1e-8 && std::fabs(a.y - 1) < 1e-8)));
    CHECK(dot(a - b, a - b) > 1.0);

    CHECK_THROWS_AS(tangent_lines_through(unit_disk, {0.2, 0.1}), PointInsideBody);

    // limiting tangency from just outside the boundary
    const auto lim = tangent_lines_through(unit_disk, {1.0 + 1e-7, 0.0});
    CHECK(dist(lim.left.contact.point(), {1, 0}) < 1e-3);
    CHECK(dist(lim.right.contact.point(), {1, 0}) < 1e-3);
}

TEST_CASE("common tangents of two unit disks") {
    const auto d1 = ConvexBody2::disk({0, 0}, 1.0);
    const auto d2 = ConvexBody2::disk({3, 0}, 1.0);
    const auto rep = common_tangents(d1, d2);
    REQUIRE(rep.admissible);
    REQUIRE(rep.tangents.size() == 2);
    for (const auto& t : rep.tangents) {
        CHECK(std::fabs(std::fabs(t.line.normal.y) - 1.0) < 1e-9);
        CHECK(t.line.offset == Catch::Approx(1.0));
    }
}

TEST_CASE("admissibility rejections") {
    const auto inner = ConvexBody2::disk({0, 0}, 1.0);
    const auto outer = ConvexBody2::disk({0, 0}, 3.0);
    const auto rep = common_tangents(inner, outer);
    CHECK_FALSE(rep.admissible);
    CHECK(rep.reason == "containment");
    CHECK_THROWS_AS(require_admissible(rep), NotAdmissible);
}

TEST_CASE("overlapping disks with two boundary crossings are admissible") {
    const auto d1 = ConvexBody2::disk({0, 0}, 1.0);
    const auto d2 = ConvexBody2::disk({2.5, 0}, 2.0);
    const auto rep = common_tangents(d1, d2);
    REQUIRE(rep.admissible);
    REQUIRE(rep.tangents.size() == 2);
    // oracle: h1(th) = h2(th) iff <c2 - c1, u> = r1 - r2 = -1
    for (const auto& t : rep.tangents) {
        CHECK(2.5 * t.line.normal.x == Catch::Approx(-1.0).margin(1e-9));
        CHECK(t.line.offset == Catch::Approx(1.0 + 0.0 * t.line.normal.x).margin(1e-9));
    }
}

TEST_CASE("tangency helpers on smooth bodies") {
    // returned tangent supports the body: all sampled points on one side
    const auto ser = ConvexBody2::support_series(2.0, {{0.15, 0.0}, {0.0, 0.1}});
    const auto tp = tangent_lines_through(ser, {5, 1});
    for (const auto& t : {tp.left, tp.right}) {
        for (const Point2& p : ser.polygonize(512))
            CHECK(t.line.signed_dist(p) < 1e-7);
    }
}

TEST_CASE("radial function and gauge") {
    CHECK(unit_disk.radial_from({0.3, 0}, {1, 0}) == Catch::Approx(0.7));
    CHECK(unit_disk.radial_from({0.3, 0}, {-1, 0}) == Catch::Approx(1.3));
    CHECK(ell21.radial_from({0, 0}, {1, 0}) == Catch::Approx(2.0));
    CHECK(square.radial_from({0, 0}, normalized({1, 1})) == Catch::Approx(std::sqrt(2.0)));

    const auto ser = ConvexBody2::support_series(2.0, {});
    CHECK(ser.radial_from({0.5, 0}, {1, 0}) == Catch::Approx(1.5).epsilon(1e-9));
    CHECK(ser.gauge({2.0, 0.0}) == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("area formulas") {
    CHECK(unit_disk.area() == Catch::Approx(pi));
    CHECK(ell21.area() == Catch::Approx(2.0 * pi));
    CHECK(square.area() == Catch::Approx(4.0));
    const auto ser = ConvexBody2::support_series(2.0, {{0.0, 0.0}, {0.1, 0.0}});
    // (1/2) int (h^2 - h'^2): pi a0^2 + (pi/2)(1 - 4) * 0.01
    CHECK(ser.area() == Catch::Approx(pi * 4.0 - 1.5 * pi * 0.01));
    // cross-check against polygonized shoelace
    const auto poly = ser.polygonize(4096);
    double a2 = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) a2 += cross(poly[i], poly[(i + 1) % poly.size()]);
    CHECK(0.5 * a2 == Catch::Approx(ser.area()).epsilon(1e-5));
}

TEST_CASE("body validation") {
    CHECK_THROWS_AS(ConvexBody2::disk({0, 0}, -1.0), InvalidBody);
    CHECK_THROWS_AS(ConvexBody2::polygon({{0, 0}, {1, 0}, {2, 0}, {1, 1}, {0.2, 0.05}}),
                    InvalidBody);
    // strongly concave series: h + h'' < 0 somewhere
    CHECK_THROWS_AS(ConvexBody2::support_series(1.0, {{0.0, 0.0}, {0.5, 0.0}}), InvalidBody);
}
