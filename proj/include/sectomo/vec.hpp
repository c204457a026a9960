#pragma once

#include <cmath>
#include <numbers>

namespace sectomo {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double pi = std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
};

using Point2 = Vec2;
using Dir2 = Vec2; // unit norm by convention, |v| = 1 within 1e-12

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }

// ccw quarter turn
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
// cw quarter turn
inline Vec2 perp_cw(Vec2 a) { return {a.y, -a.x}; }

inline Vec2 dir(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline Vec2 rotate(Vec2 v, double a) {
    const double c = std::cos(a), s = std::sin(a);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Polar angle wrapped to [0, 2pi).
struct Angle {
    double rad = 0.0;

    Angle() = default;
    Angle(double r) : rad(wrap(r)) {}

    static double wrap(double r) {
        r = std::fmod(r, two_pi);
        if (r < 0.0) r += two_pi;
        // fmod of values just below 2pi can round back up
        if (r >= two_pi) r -= two_pi;
        return r;
    }

    Angle operator+(Angle o) const { return Angle(rad + o.rad); }
    Angle operator-(Angle o) const { return Angle(rad - o.rad); }
    Dir2 direction() const { return dir(rad); }
};

inline double angle_of(Vec2 v) { return Angle::wrap(std::atan2(v.y, v.x)); }

// Unsigned angle between two vectors, in [0, pi].
inline double angle_between(Vec2 a, Vec2 b) {
    return std::atan2(std::fabs(cross(a, b)), dot(a, b));
}

// Signed difference a - b wrapped to (-pi, pi].
inline double angle_diff(double a, double b) {
    double d = std::fmod(a - b, two_pi);
    if (d > pi) d -= two_pi;
    if (d <= -pi) d += two_pi;
    return d;
}

// Line {x : <x, normal> = offset}, with H+ = {<x, normal> >= offset}.
struct Line2 {
    Dir2 normal;
    double offset = 0.0;

    Point2 foot() const { return normal * offset; }
    double signed_dist(Point2 p) const { return dot(p, normal) - offset; }
    // in-line direction: normal rotated by -pi/2
    Dir2 tangent() const { return perp_cw(normal); }
};

} // namespace sectomo
