#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "sectomo/csvio.hpp"
#include "sectomo/interp.hpp"
#include "sectomo/probes.hpp"

using namespace sectomo;
using Catch::Approx;

TEST_CASE("shortest round-trip double formatting is bit exact") {
    std::mt19937_64 rng(123456789);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-30, 30);
    for (int k = 0; k < 10000; ++k) {
        const double x = std::ldexp(mant(rng), expo(rng));
        const double y = parse_double(fmt_double(x));
        CHECK(std::memcmp(&x, &y, sizeof x) == 0);
    }
    for (double x : {0.0, 1.0, -1.0, pi, two_pi, 0.1, 1e-300, 1e300}) {
        const double y = parse_double(fmt_double(x));
        CHECK(std::memcmp(&x, &y, sizeof x) == 0);
    }
}

TEST_CASE("DataTable csv round trip is bit exact") {
    const auto K = ConvexBody2::ellipse({0.1, -0.2}, 2.0, 1.1, 0.35);
    const auto D = ConvexBody2::disk({0.2, 0.1}, 0.4);
    const auto t = tangent_chord_probe(K, D, 64);

    std::stringstream s1;
    t.write_csv(s1);
    std::stringstream in(s1.str());
    const auto t2 = DataTable::read_csv(in);
    std::stringstream s2;
    t2.write_csv(s2);
    CHECK(s1.str() == s2.str());

    REQUIRE(t2.theta.size() == t.theta.size());
    for (size_t k = 0; k < t.theta.size(); ++k) {
        CHECK(std::memcmp(&t.theta[k], &t2.theta[k], sizeof(double)) == 0);
        CHECK(std::memcmp(&t.v1[k], &t2.v1[k], sizeof(double)) == 0);
        CHECK(std::memcmp(&t.v2[k], &t2.v2[k], sizeof(double)) == 0);
    }
    CHECK(t2.kind == t.kind);
    CHECK(t2.body_id == t.body_id);
    CHECK(t2.inner_id == t.inner_id);
}

TEST_CASE("vertex-cone tables keep the cone through serialization") {
    const auto D = ConvexBody2::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    const auto K = ConvexBody2::disk({0, 0}, 3.0);
    const auto t = vertex_cone_probe(K, D, 2, 32);
    std::stringstream s;
    t.write_csv(s);
    const auto t2 = DataTable::read_csv(s);
    REQUIRE(t2.cone);
    CHECK(t2.cone->first == t.cone->first);
    CHECK(t2.cone->second == t.cone->second);
    CHECK_THROWS_AS(t2.value1(3.0 * pi / 4.0), DirectionOutsideCone);
}

TEST_CASE("interpolation reproduces grid nodes exactly") {
    const auto K = ConvexBody2::disk({0.4, 0.1}, 3.0);
    const auto D = ConvexBody2::disk({0, 0}, 1.0);
    const auto t = tangent_chord_probe(K, D, 64);
    for (size_t k = 0; k < t.theta.size(); ++k) {
        CHECK(t.value1(t.theta[k]) == Approx(t.v1[k]).margin(1e-13));
        CHECK(t.value2(t.theta[k]) == Approx(t.v2[k]).margin(1e-13));
    }
}

TEST_CASE("held-out interpolation error on smooth bodies") {
    const auto K = ConvexBody2::ellipse({0.2, -0.1}, 2.4, 1.6, 0.25);
    const auto D = ConvexBody2::disk({0.3, 0.1}, 0.5);
    const auto t = tangent_chord_probe(K, D, 512);
    for (int k = 0; k < 512; ++k) {
        const double th = two_pi * (k + 0.5) / 512.0;
        const TangentFrame f = tangent_frame(D, th);
        const auto c = K.chord(f.line);
        REQUIRE(c);
        const double s1 = dot(c->first - f.p, f.u), s2 = dot(c->second - f.p, f.u);
        CHECK(t.value1(th) == Approx(std::max(s1, s2)).margin(1e-6));
        CHECK(t.value2(th) == Approx(-std::min(s1, s2)).margin(1e-6));
    }
}

TEST_CASE("periodic monotone cubic stays within local data bounds") {
    // monotone data segments interpolate monotonically: no overshoot
    std::vector<double> th, v;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> jump(0.0, 1.0);
    double acc = 1.0;
    for (int k = 0; k < 32; ++k) {
        th.push_back(two_pi * k / 32.0);
        acc += (k < 16 ? jump(rng) : -jump(rng)); // up then down, stays positive-ish
        v.push_back(acc);
    }
    PeriodicPchip f(th, v);
    auto secant = [&](int k) { return v[((k % 32) + 32 + 1) % 32] - v[((k % 32) + 32) % 32]; };
    for (int k = 0; k < 32; ++k) {
        // monotonicity is only promised strictly inside monotone runs
        if (secant(k - 1) * secant(k) <= 0.0 || secant(k) * secant(k + 1) <= 0.0) continue;
        const double a = th[k];
        const double b = (k + 1 < 32) ? th[k + 1] : two_pi;
        const double lo = std::min(v[k], v[(k + 1) % 32]);
        const double hi = std::max(v[k], v[(k + 1) % 32]);
        for (int j = 1; j < 16; ++j) {
            const double x = a + (b - a) * j / 16.0;
            const double y = f(x);
            CHECK(y >= lo - 1e-12);
            CHECK(y <= hi + 1e-12);
        }
    }
}

TEST_CASE("csv parsing rejects malformed tables") {
    std::stringstream bad1("nonsense\n");
    CHECK_THROWS_AS(DataTable::read_csv(bad1), Error);
    std::stringstream bad2("kind,body,inner,i\n");
    CHECK_THROWS_AS(DataTable::read_csv(bad2), Error);
    std::stringstream bad3("kind,body,inner,i\nwat,K,D,1\n");
    CHECK_THROWS_AS(DataTable::read_csv(bad3), Error);
}
