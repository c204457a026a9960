#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sectomo/csvio.hpp"
#include "sectomo/geometry.hpp"
#include "sectomo/interp.hpp"
#include "sectomo/quadrature.hpp"

namespace sectomo {

// A supporting line of an inner body D: outer normal xi, contact p, and the
// in-line direction u = xi rotated by +pi/2.
struct TangentFrame {
    Dir2 xi;
    Point2 p;
    Dir2 u;
    Line2 line;
    double theta_xi = 0.0;
};

inline TangentFrame tangent_frame(const ConvexBody2& D, double theta_xi) {
    const Vec2 xi = dir(theta_xi);
    const SupportSet s = D.contact_set(theta_xi);
    if (s.is_segment)
        throw NotDifferentiable("tangent frame at a polygon edge normal");
    return {xi, s.a, perp(xi), Line2{xi, D.support(theta_xi)}, theta_xi};
}

// Edge-normal angles of a polygon inner body; probe grids skip frames within
// `excl` radians of these.
inline std::vector<double> edge_normal_angles(const ConvexBody2& D) {
    std::vector<double> out;
    if (const auto* p = std::get_if<ConvexPolygon>(&D.rep())) {
        const size_t n = p->vertices.size();
        for (size_t i = 0; i < n; ++i)
            out.push_back(angle_of(perp_cw(p->vertices[(i + 1) % n] - p->vertices[i])));
    }
    return out;
}

inline bool near_edge_normal(const std::vector<double>& normals, double theta, double excl = 1e-6) {
    for (double a : normals)
        if (std::fabs(angle_diff(theta, a)) < excl) return true;
    return false;
}

enum class ProbeKind { ChordPair, CapArea, HalfPlaneVolume };

inline std::string to_string(ProbeKind k) {
    switch (k) {
        case ProbeKind::ChordPair: return "chord_pair";
        case ProbeKind::CapArea: return "cap_area";
        default: return "halfplane_volume";
    }
}

inline ProbeKind probe_kind_from(const std::string& s) {
    if (s == "chord_pair") return ProbeKind::ChordPair;
    if (s == "cap_area") return ProbeKind::CapArea;
    if (s == "halfplane_volume") return ProbeKind::HalfPlaneVolume;
    throw Error("unknown probe kind: " + s);
}

// Interpolated map from frame angle to probe payloads. ChordPair tables hold
// (rho_plus, rho_minus); area tables hold a single value.
class DataTable {
public:
    ProbeKind kind = ProbeKind::ChordPair;
    std::string body_id = "K";
    std::string inner_id = "D";
    double power_i = 1.0; // metadata: the power the table is meant to feed
    std::vector<double> theta;
    std::vector<double> v1;
    std::vector<double> v2; // empty for single-payload kinds
    std::optional<std::pair<double, double>> cone; // angular interval, vertex-cone tables

    bool has_second() const { return !v2.empty(); }

    double value1(double th) const {
        ensure();
        const auto [t, sw] = cone_resolve(th);
        return sw ? (*i2_)(t) : (*i1_)(t);
    }
    double value2(double th) const {
        if (!has_second()) throw Error("DataTable has no second payload");
        ensure();
        const auto [t, sw] = cone_resolve(th);
        return sw ? (*i1_)(t) : (*i2_)(t);
    }

    std::pair<double, double> chord_pair(double th) const {
        if (kind != ProbeKind::ChordPair) throw Error("not a chord-pair table");
        return {value1(th), value2(th)};
    }

    void write_csv(std::ostream& os) const {
        os << "kind,body,inner,i\n";
        os << to_string(kind) << ',' << body_id << ',' << inner_id << ',' << fmt_double(power_i)
           << '\n';
        if (cone) os << "cone," << fmt_double(cone->first) << ',' << fmt_double(cone->second) << '\n';
        for (size_t k = 0; k < theta.size(); ++k) {
            os << fmt_double(theta[k]) << ',' << fmt_double(v1[k]);
            if (has_second()) os << ',' << fmt_double(v2[k]);
            os << '\n';
        }
    }

    static DataTable read_csv(std::istream& is) {
        DataTable t;
        std::string line;
        if (!std::getline(is, line) || split_csv_line(line)[0] != "kind")
            throw Error("DataTable csv: missing header");
        if (!std::getline(is, line)) throw Error("DataTable csv: missing metadata row");
        auto meta = split_csv_line(line);
        if (meta.size() != 4) throw Error("DataTable csv: bad metadata row");
        t.kind = probe_kind_from(meta[0]);
        t.body_id = meta[1];
        t.inner_id = meta[2];
        t.power_i = parse_double(meta[3]);
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            auto f = split_csv_line(line);
            if (f[0] == "cone") {
                t.cone = {parse_double(f[1]), parse_double(f[2])};
                continue;
            }
            t.theta.push_back(parse_double(f[0]));
            t.v1.push_back(parse_double(f[1]));
            if (f.size() > 2) t.v2.push_back(parse_double(f[2]));
        }
        return t;
    }

private:
    mutable std::optional<PeriodicPchip> i1_, i2_;

    void ensure() const {
        if (!i1_) {
            i1_.emplace(theta, v1);
            if (has_second()) i2_.emplace(theta, v2);
        }
    }

    // Map a direction into the table's nappe; the opposite nappe swaps the
    // two radial payloads.
    std::pair<double, bool> cone_resolve(double th) const {
        if (!cone) return {th, false};
        const double rel = Angle::wrap(th - cone->first);
        const double width = Angle::wrap(cone->second - cone->first);
        const double opp = Angle::wrap(th - cone->first - pi);
        if (rel <= width + 1e-12) return {th, false};
        if (opp <= width + 1e-12) return {Angle::wrap(th - pi), true};
        throw DirectionOutsideCone("direction outside the vertex double cone");
    }
};

// rho^i sums/differences of a chord pair.
enum class Mode { Sum, Diff };

inline double power_functional(double rho_plus, double rho_minus, double i, Mode mode) {
    if (!(i > 0.0)) throw InvalidPower("power must be positive");
    const double a = std::pow(rho_plus, i), b = std::pow(rho_minus, i);
    return mode == Mode::Sum ? a + b : a - b;
}

namespace detail {

inline std::vector<double> frame_grid(const ConvexBody2& D, int grid_size) {
    const auto normals = edge_normal_angles(D);
    std::vector<double> out;
    out.reserve(grid_size);
    for (int k = 0; k < grid_size; ++k) {
        const double th = two_pi * k / grid_size;
        if (!near_edge_normal(normals, th)) out.push_back(th);
    }
    return out;
}

} // namespace detail

// rho_{K,D}(u,xi) and rho_{K,D}(-u,xi) over a grid of tangent frames of D.
inline DataTable tangent_chord_probe(const ConvexBody2& K, const ConvexBody2& D, int grid_size,
                                     std::string body_id = "K", std::string inner_id = "D") {
    if (grid_size < 8) throw GridTooCoarse("tangent_chord_probe: grid_size < 8");
    if (!strictly_inside(D, K, 0.0)) throw InnerNotContained("inner body not inside the body");
    DataTable t;
    t.kind = ProbeKind::ChordPair;
    t.body_id = std::move(body_id);
    t.inner_id = std::move(inner_id);
    for (double th : detail::frame_grid(D, grid_size)) {
        const TangentFrame f = tangent_frame(D, th);
        const auto c = K.chord(f.line);
        if (!c) throw InnerNotContained("tangent line misses the body");
        const double s1 = dot(c->first - f.p, f.u), s2 = dot(c->second - f.p, f.u);
        const double rp = std::max(s1, s2), rm = -std::min(s1, s2);
        if (rp < -1e-12 || rm < -1e-12)
            throw InnerNotContained("contact point outside the chord");
        t.theta.push_back(th);
        t.v1.push_back(std::max(0.0, rp));
        t.v2.push_back(std::max(0.0, rm));
    }
    return t;
}

// Area of K cut off beyond each tangent line of D.
inline DataTable cap_area_probe(const ConvexBody2& K, const ConvexBody2& D, int grid_size,
                                std::string body_id = "K", std::string inner_id = "D") {
    if (grid_size < 8) throw GridTooCoarse("cap_area_probe: grid_size < 8");
    if (!strictly_inside(D, K, 0.0)) throw InnerNotContained("inner body not inside the body");
    DataTable t;
    t.kind = ProbeKind::CapArea;
    t.body_id = std::move(body_id);
    t.inner_id = std::move(inner_id);
    for (double th : detail::frame_grid(D, grid_size)) {
        const TangentFrame f = tangent_frame(D, th);
        t.theta.push_back(th);
        t.v1.push_back(K.halfplane_area(f.line, +1));
    }
    return t;
}

// d(cap area)/d(frame angle) = (rho_plus^2 - rho_minus^2)/2; estimated by
// central differences with one Richardson step on the table.
inline double cap_derivative_to_rho2_diff(const DataTable& table, double theta_xi) {
    if (table.kind != ProbeKind::CapArea) throw Error("cap_derivative: not a cap-area table");
    if (table.theta.size() < 256) throw GridTooCoarse("cap_derivative: grid_size < 256");
    const double h = two_pi / double(table.theta.size());
    auto d = [&](double step) {
        return (table.value1(theta_xi + step) - table.value1(theta_xi - step)) / (2.0 * step);
    };
    return (4.0 * d(h) - d(2.0 * h)) / 3.0;
}

// rho_{K,p}(xi) and rho_{K,p}(-xi) over grid directions from an interior point.
inline DataTable point_chord_probe(const ConvexBody2& K, Point2 p, int grid_size,
                                   std::string body_id = "K", std::string inner_id = "p") {
    if (!K.contains(p, -1e-12)) throw PointOutsideBody("point_chord_probe: point outside body");
    DataTable t;
    t.kind = ProbeKind::ChordPair;
    t.body_id = std::move(body_id);
    t.inner_id = std::move(inner_id);
    for (int k = 0; k < grid_size; ++k) {
        const double th = two_pi * k / grid_size;
        t.theta.push_back(th);
        t.v1.push_back(K.radial_from(p, dir(th)));
        t.v2.push_back(K.radial_from(p, -dir(th)));
    }
    return t;
}

// Area of K on the positive side of {<x - p, v> >= 0} for grid directions v.
inline DataTable halfspace_volume_probe(const ConvexBody2& K, Point2 p, int grid_size,
                                        std::string body_id = "K", std::string inner_id = "p") {
    if (!K.contains(p, -1e-12)) throw PointOutsideBody("halfspace_volume_probe: point outside body");
    DataTable t;
    t.kind = ProbeKind::HalfPlaneVolume;
    t.body_id = std::move(body_id);
    t.inner_id = std::move(inner_id);
    for (int k = 0; k < grid_size; ++k) {
        const double th = two_pi * k / grid_size;
        const Vec2 v = dir(th);
        t.theta.push_back(th);
        t.v1.push_back(K.halfplane_area(Line2{v, dot(p, v)}, +1));
    }
    return t;
}

// ---- revolution bodies -------------------------------------------------

struct Plane3 {
    double axis_point_x = 0.0;    // point (x, 0, 0) on the axis of revolution
    double nx = 0.0, ny = 0.0, nz = 1.0; // unit normal
};

// Plane-section area of the body obtained by revolving a convex profile
// (symmetric about the x-axis) around that axis; adaptive 1D quadrature.
inline double revolution_section_area(const ConvexBody2& profile, const Plane3& plane,
                                      double tol = 1e-8) {
    for (int k = 0; k < 256; ++k) {
        const double th = two_pi * k / 256.0;
        if (std::fabs(profile.support(th) - profile.support(-th)) > 1e-9)
            throw NonConvexProfile("profile is not symmetric about the axis");
    }
    const double xmin = -profile.support_dir({-1, 0});
    const double xmax = profile.support_dir({1, 0});
    auto r_max = [&](double x) {
        const auto c = profile.chord(Line2{{1, 0}, x});
        if (!c) return 0.0;
        return std::max({c->first.y, c->second.y, 0.0});
    };

    const double nlat = std::hypot(plane.ny, plane.nz);
    const double qx = plane.axis_point_x;
    if (nlat < 1e-12) {
        const double r = r_max(qx);
        return pi * r * r;
    }
    // in-plane basis: e2 perpendicular to the axis, e1 completing it
    const double e2y = plane.nz / nlat, e2z = -plane.ny / nlat; // e2 = normalize(n x axis), e2.x = 0
    // e1 = n x e2
    const double e1x = plane.ny * e2z - plane.nz * e2y;
    const double e1y = plane.nz * 0.0 - plane.nx * e2z;
    const double e1z = plane.nx * e2y - plane.ny * 0.0;
    const double e1n = std::sqrt(e1x * e1x + e1y * e1y + e1z * e1z);
    const double ux = e1x / e1n, uy = e1y / e1n, uz = e1z / e1n;

    auto chord_len = [&](double s) {
        const double x = qx + s * ux;
        const double rm = r_max(x);
        if (rm <= 0.0) return 0.0;
        const double wy = s * uy, wz = s * uz; // yz offset of the point q + s*e1
        const double proj = wy * e2y + wz * e2z;
        const double d2 = wy * wy + wz * wz - proj * proj;
        const double disc = rm * rm - d2;
        return disc > 0.0 ? 2.0 * std::sqrt(disc) : 0.0;
    };

    double s_lo, s_hi;
    if (std::fabs(ux) > 1e-12) {
        s_lo = (xmin - qx) / ux;
        s_hi = (xmax - qx) / ux;
        if (s_lo > s_hi) std::swap(s_lo, s_hi);
    } else {
        // plane parallel to the axis: lateral extent bounds s
        const double rbound = std::max(std::fabs(profile.support_dir({0, 1})),
                                       std::fabs(profile.support_dir({0, -1})));
        s_lo = -rbound;
        s_hi = rbound;
    }
    return integrate(chord_len, s_lo, s_hi, tol, 40);
}

// ---- vertex double cones ----------------------------------------------

// Angular interval (one nappe) of directions from polygon vertex k into D.
inline std::pair<double, double> vertex_cone_interval(const ConvexBody2& D, size_t k) {
    const auto* p = std::get_if<ConvexPolygon>(&D.rep());
    if (!p) throw Error("vertex_cone_interval: not a polygon");
    const size_t n = p->vertices.size();
    const Point2 v = p->vertices[k % n];
    const Point2 nxt = p->vertices[(k + 1) % n];
    const Point2 prv = p->vertices[(k + n - 1) % n];
    return {angle_of(nxt - v), angle_of(prv - v)};
}

// point_chord_probe at a polygon vertex, restricted to the double cone.
inline DataTable vertex_cone_probe(const ConvexBody2& K, const ConvexBody2& D, size_t k,
                                   int grid_size, std::string body_id = "K") {
    const auto [a0, a1] = vertex_cone_interval(D, k);
    const auto* p = std::get_if<ConvexPolygon>(&D.rep());
    const Point2 v = p->vertices[k % p->vertices.size()];
    if (!K.contains(v, -1e-12)) throw PointOutsideBody("vertex not inside the body");
    const double width = Angle::wrap(a1 - a0);
    DataTable t;
    t.kind = ProbeKind::ChordPair;
    t.body_id = std::move(body_id);
    t.inner_id = "v" + std::to_string(k);
    t.cone = {a0, a1};
    for (int j = 0; j <= grid_size; ++j) {
        const double th = Angle::wrap(a0 + width * j / grid_size);
        t.theta.push_back(th);
        t.v1.push_back(K.radial_from(v, dir(th)));
        t.v2.push_back(K.radial_from(v, -dir(th)));
    }
    // keep nodes ascending for interpolation
    std::vector<size_t> idx(t.theta.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return t.theta[a] < t.theta[b]; });
    DataTable s = t;
    for (size_t i = 0; i < idx.size(); ++i) {
        s.theta[i] = t.theta[idx[i]];
        s.v1[i] = t.v1[idx[i]];
        s.v2[i] = t.v2[idx[i]];
    }
    return s;
}

} // namespace sectomo
