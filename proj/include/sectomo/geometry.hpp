#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "sectomo/errors.hpp"
#include "sectomo/rootfind.hpp"
#include "sectomo/vec.hpp"

namespace sectomo {

// Set of boundary points achieving the support value in a direction:
// either a single point or (for polygon faces) a segment.
struct SupportSet {
    Point2 a;
    Point2 b;
    bool is_segment = false;

    Point2 point() const { return is_segment ? (a + b) * 0.5 : a; }
};

struct Disk {
    Point2 center;
    double radius;
};

struct Ellipse {
    Point2 center;
    double semi_a; // along dir(rotation)
    double semi_b;
    double rotation = 0.0;
};

struct ConvexPolygon {
    std::vector<Point2> vertices; // ccw
    bool strictly_convex = true;
};

// h(theta) = a0 + sum_m (a_m cos m*theta + b_m sin m*theta)
struct SupportSeries {
    double a0;
    std::vector<std::pair<double, double>> terms; // (a_m, b_m), m = 1..M
};

class ConvexBody2 {
public:
    using Rep = std::variant<Disk, Ellipse, ConvexPolygon, SupportSeries>;

    static ConvexBody2 disk(Point2 c, double r) {
        if (!(r > 0.0)) throw InvalidBody("disk radius must be positive");
        return ConvexBody2(Disk{c, r}, c);
    }

    static ConvexBody2 ellipse(Point2 c, double a, double b, double rot = 0.0) {
        if (!(a > 0.0 && b > 0.0)) throw InvalidBody("ellipse semi-axes must be positive");
        return ConvexBody2(Ellipse{c, a, b, rot}, c);
    }

    static ConvexBody2 polygon(std::vector<Point2> verts) {
        if (verts.size() < 3) throw InvalidBody("polygon needs at least 3 vertices");
        double a2 = 0.0;
        for (size_t i = 0; i < verts.size(); ++i) {
            const Point2& p = verts[i];
            const Point2& q = verts[(i + 1) % verts.size()];
            a2 += cross(p, q);
        }
        if (a2 < 0.0) std::reverse(verts.begin(), verts.end());
        ConvexPolygon poly{std::move(verts), true};
        const size_t n = poly.vertices.size();
        Point2 c{0, 0};
        for (const Point2& p : poly.vertices) c += p;
        c = c / double(n);
        double scale = 0.0;
        for (const Point2& p : poly.vertices) scale = std::max(scale, dist(p, c));
        for (size_t i = 0; i < n; ++i) {
            const Vec2 e0 = poly.vertices[(i + 1) % n] - poly.vertices[i];
            const Vec2 e1 = poly.vertices[(i + 2) % n] - poly.vertices[(i + 1) % n];
            const double cr = cross(e0, e1);
            if (cr < -1e-12 * scale * scale) throw InvalidBody("polygon is not convex");
            if (cr <= 1e-12 * scale * scale) poly.strictly_convex = false;
        }
        return ConvexBody2(std::move(poly), c);
    }

    static ConvexBody2 support_series(double a0, std::vector<std::pair<double, double>> terms) {
        SupportSeries s{a0, std::move(terms)};
        // sampled convexity: h + h'' > 0
        const int n = 2048;
        for (int k = 0; k < n; ++k) {
            const double th = two_pi * k / n;
            if (series_h(s, th) + series_h2(s, th) <= 0.0)
                throw InvalidBody("support series is not convex (h + h'' <= 0 sampled)");
        }
        Point2 c{0, 0};
        for (int k = 0; k < 64; ++k) c += series_contact(s, two_pi * k / 64.0);
        return ConvexBody2(std::move(s), c / 64.0);
    }

    const Rep& rep() const { return rep_; }
    bool is_polygon() const { return std::holds_alternative<ConvexPolygon>(rep_); }

    // A fixed interior reference point (center / vertex mean / boundary mean).
    Point2 ref_point() const { return ref_; }

    // h(theta) = max{<x, u(theta)> : x in body}
    double support(double theta) const { return support_dir(dir(theta)); }

    double support_dir(Vec2 u) const {
        return std::visit([&](const auto& b) { return sup_impl(b, u); }, rep_);
    }

    // h'(theta); throws NotDifferentiable for polygons at edge normals.
    double support_derivative(double theta) const {
        const Vec2 u = dir(theta);
        const Vec2 du = perp(u);
        if (const auto* p = std::get_if<ConvexPolygon>(&rep_)) {
            const SupportSet s = contact_impl(*p, u);
            if (s.is_segment) throw NotDifferentiable("polygon support not differentiable at edge normal");
            return dot(s.a, du);
        }
        if (const auto* d = std::get_if<Disk>(&rep_)) return dot(d->center, du);
        if (const auto* e = std::get_if<Ellipse>(&rep_)) {
            const double phi = theta - e->rotation;
            const double c = std::cos(phi), s = std::sin(phi);
            const double h0 = std::sqrt(e->semi_a * e->semi_a * c * c + e->semi_b * e->semi_b * s * s);
            return dot(e->center, du) + (e->semi_b * e->semi_b - e->semi_a * e->semi_a) * s * c / h0;
        }
        return series_h1(std::get<SupportSeries>(rep_), theta);
    }

    SupportSet contact_set(double theta) const {
        const Vec2 u = dir(theta);
        return std::visit([&](const auto& b) { return contact_impl(b, u); }, rep_);
    }

    // Unique contact point; for polygon face normals returns the face midpoint.
    Point2 boundary_point(double theta) const { return contact_set(theta).point(); }

    double area() const {
        return std::visit([&](const auto& b) { return area_impl(b); }, rep_);
    }

    bool contains(Point2 p, double tol = 1e-12) const {
        return std::visit([&](const auto& b) { return contains_impl(b, p, tol); }, rep_);
    }

    // Distance from an interior point p to the boundary along unit direction d.
    double radial_from(Point2 p, Vec2 d) const {
        return std::visit([&](const auto& b) { return radial_impl(b, p, d); }, rep_);
    }

    // Gauge about the reference point: <1 inside, 1 on the boundary.
    double gauge(Point2 p) const {
        const Vec2 v = p - ref_;
        const double r = norm(v);
        if (r == 0.0) return 0.0;
        return r / radial_from(ref_, v / r);
    }

    // Intersection segment with a line, endpoints ordered by line.tangent().
    // Empty optional when disjoint; tangential touch gives a zero-length segment.
    std::optional<std::pair<Point2, Point2>> chord(const Line2& line) const {
        auto iv = chord_interval(line);
        if (!iv) return std::nullopt;
        const Point2 base = line.foot();
        const Vec2 t = line.tangent();
        return std::make_pair(base + iv->first * t, base + iv->second * t);
    }

    // Area of body cut off by the half-plane {side * (<x,n> - offset) >= 0}.
    double halfplane_area(const Line2& line, int side) const {
        Line2 l = line;
        if (side < 0) { l.normal = -l.normal; l.offset = -l.offset; }
        return std::visit([&](const auto& b) { return cap_impl(b, l); }, rep_);
    }

    // Boundary polyline, ccw. Polygons return their vertices.
    std::vector<Point2> polygonize(int n = 4096) const {
        if (const auto* p = std::get_if<ConvexPolygon>(&rep_)) return p->vertices;
        std::vector<Point2> out;
        out.reserve(n);
        for (int k = 0; k < n; ++k) out.push_back(boundary_point(two_pi * k / n));
        return out;
    }

private:
    ConvexBody2(Rep r, Point2 ref) : rep_(std::move(r)), ref_(ref) {}

    Rep rep_;
    Point2 ref_;

    // ---- support ----
    static double sup_impl(const Disk& d, Vec2 u) { return dot(d.center, u) + d.radius; }
    static double sup_impl(const Ellipse& e, Vec2 u) {
        const Vec2 e1 = dir(e.rotation);
        const double c1 = dot(u, e1), c2 = cross(e1, u);
        return dot(e.center, u) +
               std::sqrt(e.semi_a * e.semi_a * c1 * c1 + e.semi_b * e.semi_b * c2 * c2);
    }
    static double sup_impl(const ConvexPolygon& p, Vec2 u) {
        double best = -1e300;
        for (const Point2& v : p.vertices) best = std::max(best, dot(v, u));
        return best;
    }
    static double sup_impl(const SupportSeries& s, Vec2 u) { return series_h(s, angle_of(u)); }

    static double series_h(const SupportSeries& s, double th) {
        double h = s.a0;
        for (size_t m = 1; m <= s.terms.size(); ++m)
            h += s.terms[m - 1].first * std::cos(m * th) + s.terms[m - 1].second * std::sin(m * th);
        return h;
    }
    static double series_h1(const SupportSeries& s, double th) {
        double h = 0.0;
        for (size_t m = 1; m <= s.terms.size(); ++m)
            h += double(m) * (-s.terms[m - 1].first * std::sin(m * th) +
                              s.terms[m - 1].second * std::cos(m * th));
        return h;
    }
    static double series_h2(const SupportSeries& s, double th) {
        double h = 0.0;
        for (size_t m = 1; m <= s.terms.size(); ++m)
            h -= double(m * m) * (s.terms[m - 1].first * std::cos(m * th) +
                                  s.terms[m - 1].second * std::sin(m * th));
        return h;
    }
    static Point2 series_contact(const SupportSeries& s, double th) {
        const Vec2 u = dir(th);
        return series_h(s, th) * u + series_h1(s, th) * perp(u);
    }

    // ---- contact sets ----
    static SupportSet contact_impl(const Disk& d, Vec2 u) {
        return {d.center + d.radius * u, {}, false};
    }
    static SupportSet contact_impl(const Ellipse& e, Vec2 u) {
        const Vec2 e1 = dir(e.rotation);
        const double c1 = dot(u, e1), c2 = cross(e1, u);
        const double h0 = std::sqrt(e.semi_a * e.semi_a * c1 * c1 + e.semi_b * e.semi_b * c2 * c2);
        const Vec2 local{e.semi_a * e.semi_a * c1 / h0, e.semi_b * e.semi_b * c2 / h0};
        return {e.center + rotate(local, e.rotation), {}, false};
    }
    static SupportSet contact_impl(const ConvexPolygon& p, Vec2 u) {
        double best = -1e300;
        for (const Point2& v : p.vertices) best = std::max(best, dot(v, u));
        double scale = 1.0;
        for (const Point2& v : p.vertices) scale = std::max(scale, norm(v));
        std::vector<Point2> hits;
        for (const Point2& v : p.vertices)
            if (dot(v, u) >= best - 1e-12 * scale) hits.push_back(v);
        if (hits.size() == 1) return {hits[0], {}, false};
        // face: pick extreme pair along the edge direction
        const Vec2 t = perp(u);
        auto cmp = [&](Point2 a, Point2 b) { return dot(a, t) < dot(b, t); };
        const Point2 lo = *std::min_element(hits.begin(), hits.end(), cmp);
        const Point2 hi = *std::max_element(hits.begin(), hits.end(), cmp);
        return {lo, hi, true};
    }
    static SupportSet contact_impl(const SupportSeries& s, Vec2 u) {
        return {series_contact(s, angle_of(u)), {}, false};
    }

    // ---- area ----
    static double area_impl(const Disk& d) { return pi * d.radius * d.radius; }
    static double area_impl(const Ellipse& e) { return pi * e.semi_a * e.semi_b; }
    static double area_impl(const ConvexPolygon& p) { return shoelace(p.vertices); }
    static double area_impl(const SupportSeries& s) {
        // (1/2) int (h^2 - h'^2) dtheta, termwise
        double a = pi * s.a0 * s.a0;
        for (size_t m = 1; m <= s.terms.size(); ++m) {
            const auto [am, bm] = s.terms[m - 1];
            a += 0.5 * pi * (1.0 - double(m * m)) * (am * am + bm * bm);
        }
        return a;
    }

    static double shoelace(const std::vector<Point2>& v) {
        double a2 = 0.0;
        for (size_t i = 0; i < v.size(); ++i) a2 += cross(v[i], v[(i + 1) % v.size()]);
        return 0.5 * a2;
    }

    // ---- membership ----
    static bool contains_impl(const Disk& d, Point2 p, double tol) {
        return dist(p, d.center) <= d.radius + tol;
    }
    static bool contains_impl(const Ellipse& e, Point2 p, double tol) {
        const Vec2 q = rotate(p - e.center, -e.rotation);
        const double g = std::hypot(q.x / e.semi_a, q.y / e.semi_b);
        return g <= 1.0 + tol / std::min(e.semi_a, e.semi_b);
    }
    static bool contains_impl(const ConvexPolygon& p, Point2 x, double tol) {
        const size_t n = p.vertices.size();
        for (size_t i = 0; i < n; ++i) {
            const Point2 a = p.vertices[i], b = p.vertices[(i + 1) % n];
            const Vec2 e = b - a;
            if (cross(e, x - a) < -tol * norm(e)) return false;
        }
        return true;
    }
    bool contains_impl(const SupportSeries& s, Point2 p, double tol) const {
        const Vec2 v = p - ref_;
        const double r = norm(v);
        if (r == 0.0) return true;
        return r <= radial_impl(s, ref_, v / r) + tol;
    }

    // ---- radial functions ----
    static double radial_impl(const Disk& d, Point2 p, Vec2 u) {
        const Vec2 w = p - d.center;
        const double b = dot(w, u);
        const double disc = b * b - (norm2(w) - d.radius * d.radius);
        if (disc < 0.0) throw PointOutsideBody("radial_from: point outside disk");
        return -b + std::sqrt(disc);
    }
    static double radial_impl(const Ellipse& e, Point2 p, Vec2 u) {
        const Vec2 w = rotate(p - e.center, -e.rotation);
        const Vec2 v = rotate(u, -e.rotation);
        const Vec2 ws{w.x / e.semi_a, w.y / e.semi_b};
        const Vec2 vs{v.x / e.semi_a, v.y / e.semi_b};
        const double A = norm2(vs), B = dot(ws, vs), C = norm2(ws) - 1.0;
        const double disc = B * B - A * C;
        if (disc < 0.0) throw PointOutsideBody("radial_from: point outside ellipse");
        return (-B + std::sqrt(disc)) / A;
    }
    static double radial_impl(const ConvexPolygon& p, Point2 x, Vec2 u) {
        const size_t n = p.vertices.size();
        double t = 1e300;
        for (size_t i = 0; i < n; ++i) {
            const Point2 a = p.vertices[i], b = p.vertices[(i + 1) % n];
            const Vec2 nrm = normalized(perp_cw(b - a)); // outward for ccw
            const double den = dot(u, nrm);
            if (den > 1e-15) {
                const double ti = (dot(a, nrm) - dot(x, nrm)) / den;
                t = std::min(t, ti);
            }
        }
        if (t < 0.0 || t >= 1e300) throw PointOutsideBody("radial_from: point outside polygon");
        return t;
    }
    static double radial_impl(const SupportSeries& s, Point2 p, Vec2 u) {
        // Find theta with boundary_point(theta) - p parallel to u; the direction
        // angle of the boundary seen from an interior point is monotone in theta.
        const double target = angle_of(u);
        auto f = [&](double th) {
            return angle_diff(angle_of(series_contact(s, th) - p), target);
        };
        const int n = 128;
        double a = 0.0, fa = f(0.0);
        for (int k = 1; k <= n; ++k) {
            const double b = two_pi * k / n;
            const double fb = f(b);
            // genuine crossing of 0 (avoid the +pi/-pi wrap jump)
            if (fa <= 0.0 && fb >= 0.0 && fb - fa < pi) {
                const double th = bisect([&](double t) { return f(t); }, a, b, 1e-13);
                const Point2 q = series_contact(s, th);
                const double r = dot(q - p, u);
                if (r < 0.0) throw PointOutsideBody("radial_from: point outside body");
                return r;
            }
            a = b;
            fa = fb;
        }
        throw PointOutsideBody("radial_from: no boundary direction match");
    }

    // ---- chords ----
    std::optional<std::pair<double, double>> chord_interval(const Line2& line) const {
        if (const auto* d = std::get_if<Disk>(&rep_)) {
            const double sd = line.signed_dist(d->center);
            const double disc = d->radius * d->radius - sd * sd;
            if (disc < 0.0) return std::nullopt;
            const double mid = dot(d->center - line.foot(), line.tangent());
            const double half = std::sqrt(std::max(0.0, disc));
            return std::make_pair(mid - half, mid + half);
        }
        if (const auto* e = std::get_if<Ellipse>(&rep_)) {
            const Point2 base = line.foot();
            const Vec2 t = line.tangent();
            const Vec2 w = rotate(base - e->center, -e->rotation);
            const Vec2 v = rotate(t, -e->rotation);
            const Vec2 ws{w.x / e->semi_a, w.y / e->semi_b};
            const Vec2 vs{v.x / e->semi_a, v.y / e->semi_b};
            const double A = norm2(vs), B = dot(ws, vs), C = norm2(ws) - 1.0;
            const double disc = B * B - A * C;
            if (disc < 0.0) return std::nullopt;
            const double sq = std::sqrt(disc);
            return std::make_pair((-B - sq) / A, (-B + sq) / A);
        }
        if (const auto* p = std::get_if<ConvexPolygon>(&rep_)) {
            double lo = -1e300, hi = 1e300;
            const Point2 base = line.foot();
            const Vec2 t = line.tangent();
            const size_t n = p->vertices.size();
            for (size_t i = 0; i < n; ++i) {
                const Point2 a = p->vertices[i], b = p->vertices[(i + 1) % n];
                const Vec2 nrm = normalized(perp_cw(b - a));
                const double den = dot(t, nrm);
                const double num = dot(a, nrm) - dot(base, nrm);
                if (std::fabs(den) < 1e-15) {
                    if (num < 0.0) return std::nullopt;
                } else if (den > 0.0) {
                    hi = std::min(hi, num / den);
                } else {
                    lo = std::max(lo, num / den);
                }
            }
            if (lo > hi) return std::nullopt;
            return std::make_pair(lo, hi);
        }
        // SupportSeries: bisection on the gauge along the line
        const Vec2 xi = line.normal;
        const double h_fwd = support_dir(xi), h_bwd = support_dir(-xi);
        if (line.offset > h_fwd || -line.offset > h_bwd) return std::nullopt;
        const Point2 base = line.foot();
        const Vec2 t = line.tangent();
        auto g = [&](double s) { return gauge(base + s * t) - 1.0; };
        const double extent = support_dir(t) + support_dir(-t) + norm(ref_) + 1.0;
        // locate an inside point by golden-section on the gauge
        double a = -extent, b = extent;
        for (int it = 0; it < 160; ++it) {
            const double m1 = a + (b - a) * 0.381966, m2 = b - (b - a) * 0.381966;
            if (g(m1) < g(m2)) b = m2; else a = m1;
            if (b - a < 1e-13 * extent) break;
        }
        const double smin = 0.5 * (a + b);
        if (g(smin) > 1e-12) {
            if (g(smin) < 1e-7) return std::make_pair(smin, smin); // tangential touch
            return std::nullopt;
        }
        const double s_lo = bisect(g, -extent, smin, 1e-12);
        const double s_hi = bisect(g, smin, extent, 1e-12);
        return std::make_pair(s_lo, s_hi);
    }

    // ---- half-plane areas (H+ side of l) ----
    static double cap_impl(const Disk& d, const Line2& l) {
        const double sd = l.signed_dist(d.center); // center in H+ iff sd > 0
        const double R = d.radius;
        const double t = std::clamp(-sd, -R, R); // distance from center to line, signed toward H+
        // segment on H+ side: area = R^2 acos(t/R) - t sqrt(R^2 - t^2)
        return R * R * std::acos(t / R) - t * std::sqrt(std::max(0.0, R * R - t * t));
    }
    static double cap_impl(const Ellipse& e, const Line2& l) {
        // affine map to the unit disk: x = c + Rot * S * q
        const Vec2 n_local = rotate(l.normal, -e.rotation);
        const Vec2 ns{n_local.x * e.semi_a, n_local.y * e.semi_b};
        const double len = norm(ns);
        const Line2 lq{ns / len, (l.offset - dot(l.normal, e.center)) / len};
        return e.semi_a * e.semi_b * cap_impl(Disk{{0, 0}, 1.0}, lq);
    }
    static double cap_impl(const ConvexPolygon& p, const Line2& l) {
        return shoelace(clip_halfplane(p.vertices, l));
    }
    double cap_impl(const SupportSeries& s, const Line2& l) const {
        (void)s;
        // inscribed-polygon area error ~ n^-2; 16384 keeps it below 1e-8 relative
        return shoelace(clip_halfplane(polygonize(16384), l));
    }

public:
    // Sutherland-Hodgman clip of a ccw polygon against H+ = {signed_dist >= 0}.
    static std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly, const Line2& l) {
        std::vector<Point2> out;
        const size_t n = poly.size();
        for (size_t i = 0; i < n; ++i) {
            const Point2 a = poly[i], b = poly[(i + 1) % n];
            const double da = l.signed_dist(a), db = l.signed_dist(b);
            if (da >= 0.0) out.push_back(a);
            if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0))
                out.push_back(a + (da / (da - db)) * (b - a));
        }
        return out;
    }
};

// Both supporting lines of D through an exterior point Q, labeled by the
// viewing-from-Q convention (cross of contact-Q with refpoint-Q, positive = left).
struct TangentThrough {
    Line2 line;
    double theta; // normal angle
    SupportSet contact;
};

struct TangentPair {
    TangentThrough left;
    TangentThrough right;
};

inline TangentPair tangent_lines_through(const ConvexBody2& D, Point2 Q) {
    auto f = [&](double a) { return dot(Q, dir(a)) - D.support(a); };
    const int n = 2048;
    std::vector<double> roots;
    double prev = f(0.0);
    double fmax = prev, amax = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double b = two_pi * k / n;
        const double fb = f(b);
        if (fb > fmax) { fmax = fb; amax = b; }
        if ((prev <= 0.0) != (fb <= 0.0))
            roots.push_back(bisect(f, two_pi * (k - 1) / n, b, 1e-13));
        prev = fb;
    }
    if (roots.size() != 2) {
        // grazing or near-coincident tangents (roots in one grid cell, or a
        // root landing exactly on a grid node): refine the peak by golden
        // section, then walk out from it
        const double step = two_pi / n;
        double lo = amax - step, hi = amax + step;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double g1 = hi - gr * (hi - lo), g2 = lo + gr * (hi - lo);
        double fg1 = f(g1), fg2 = f(g2);
        for (int it = 0; it < 120; ++it) {
            if (fg1 < fg2) { lo = g1; g1 = g2; fg1 = fg2; g2 = lo + gr * (hi - lo); fg2 = f(g2); }
            else { hi = g2; g2 = g1; fg2 = fg1; g1 = hi - gr * (hi - lo); fg1 = f(g1); }
        }
        amax = 0.5 * (lo + hi);
        if (f(amax) <= 1e-12) throw PointInsideBody("tangent_lines_through: point inside body");
        roots.clear();
        double aL = amax - step;
        int guard = 0;
        while (f(aL) > 0.0 && ++guard <= n) aL -= step;
        if (guard > n) throw Error("tangent_lines_through: failed to bracket both tangents");
        roots.push_back(bisect(f, aL, aL + step, 1e-13));
        double aR = amax + step;
        guard = 0;
        while (f(aR) > 0.0 && ++guard <= n) aR += step;
        if (guard > n) throw Error("tangent_lines_through: failed to bracket both tangents");
        roots.push_back(bisect(f, aR - step, aR, 1e-13));
        for (double& r : roots) r = Angle::wrap(r);
        std::sort(roots.begin(), roots.end());
    }
    if (roots.size() > 2) {
        // keep the two best-separated roots (spurious grazing duplicates)
        std::sort(roots.begin(), roots.end());
        std::vector<double> keep{roots.front()};
        for (double r : roots)
            if (r - keep.back() > 1e-9) keep.push_back(r);
        roots = keep;
    }

    auto mk = [&](double a) {
        const Vec2 u = dir(a);
        return TangentThrough{Line2{u, D.support(a)}, a, D.contact_set(a)};
    };
    TangentThrough t0 = mk(roots[0]);
    TangentThrough t1 = mk(roots[roots.size() - 1]);
    const Vec2 view = D.ref_point() - Q;
    const bool t0_left = cross(t0.contact.point() - Q, view) > 0.0;
    if (t0_left) return {t0, t1};
    return {t1, t0};
}

struct CommonTangent {
    Line2 line;
    double theta;       // common normal angle
    SupportSet contact1; // on D1
    SupportSet contact2; // on D2
    bool separating = false;
};

struct AdmissibilityReport {
    bool admissible = false;
    std::string reason; // empty when admissible
    std::vector<CommonTangent> tangents; // non-separating common supporting lines
    int separating_count = 0;
    bool union_convex = false;
};

namespace detail {

inline std::vector<double> support_equal_angles(const ConvexBody2& A, const ConvexBody2& B,
                                                int grid) {
    auto f = [&](double a) { return A.support(a) - B.support(a); };
    std::vector<double> roots;
    double prev = f(0.0);
    for (int k = 1; k <= grid; ++k) {
        const double b = two_pi * k / grid;
        const double fb = f(b);
        if ((prev <= 0.0) != (fb <= 0.0))
            roots.push_back(bisect(f, two_pi * (k - 1) / grid, b, 1e-12));
        prev = fb;
    }
    return roots;
}

inline bool segment_leaves_union(const ConvexBody2& D1, const ConvexBody2& D2,
                                 Point2 a, Point2 b) {
    for (int k = 0; k <= 256; ++k) {
        const Point2 p = a + (double(k) / 256.0) * (b - a);
        if (!D1.contains(p, 1e-9) && !D2.contains(p, 1e-9)) return true;
    }
    return false;
}

} // namespace detail

inline AdmissibilityReport common_tangents(const ConvexBody2& D1, const ConvexBody2& D2,
                                           int grid = 4096) {
    AdmissibilityReport rep;

    // containment dominance check
    bool d1_in_d2 = true, d2_in_d1 = true;
    for (int k = 0; k < 1024; ++k) {
        const double th = two_pi * k / 1024.0;
        const double h1 = D1.support(th), h2 = D2.support(th);
        if (h1 > h2 + 1e-12) d1_in_d2 = false;
        if (h2 > h1 + 1e-12) d2_in_d1 = false;
    }
    if (d1_in_d2 || d2_in_d1) {
        rep.reason = "containment";
        return rep;
    }

    for (double th : detail::support_equal_angles(D1, D2, grid)) {
        const Vec2 u = dir(th);
        rep.tangents.push_back(CommonTangent{Line2{u, D1.support(th)}, th,
                                             D1.contact_set(th), D2.contact_set(th), false});
    }
    // internal (separating) common supporting lines: h1(th) = -h2(th + pi)
    {
        auto g = [&](double a) { return D1.support(a) + D2.support(a + pi); };
        double prev = g(0.0);
        for (int k = 1; k <= grid; ++k) {
            const double b = two_pi * k / grid;
            const double gb = g(b);
            if ((prev <= 0.0) != (gb <= 0.0)) ++rep.separating_count;
            prev = gb;
        }
    }

    if (rep.tangents.size() != 2) {
        rep.reason = "tangent count " + std::to_string(rep.tangents.size()) + " != 2";
        return rep;
    }

    bool leaves = false;
    for (const CommonTangent& t : rep.tangents) {
        // convex hull of the two support sets along the line
        std::vector<Point2> pts{t.contact1.a, t.contact2.a};
        if (t.contact1.is_segment) pts.push_back(t.contact1.b);
        if (t.contact2.is_segment) pts.push_back(t.contact2.b);
        const Vec2 d = t.line.tangent();
        auto cmp = [&](Point2 x, Point2 y) { return dot(x, d) < dot(y, d); };
        const Point2 lo = *std::min_element(pts.begin(), pts.end(), cmp);
        const Point2 hi = *std::max_element(pts.begin(), pts.end(), cmp);
        if (detail::segment_leaves_union(D1, D2, lo, hi)) leaves = true;
    }
    rep.union_convex = !leaves;
    if (rep.union_convex) {
        rep.reason = "convex union";
        return rep;
    }

    rep.admissible = true;
    return rep;
}

inline void require_admissible(const AdmissibilityReport& rep) {
    if (!rep.admissible) throw NotAdmissible(rep.reason);
}

// True when inner lies strictly inside outer, with the given support margin.
inline bool strictly_inside(const ConvexBody2& inner, const ConvexBody2& outer,
                            double margin = 1e-9, int grid = 1024) {
    for (int k = 0; k < grid; ++k) {
        const double th = two_pi * k / grid;
        if (inner.support(th) > outer.support(th) - margin) return false;
    }
    return true;
}

} // namespace sectomo
