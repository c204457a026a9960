#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "sectomo/geometry.hpp"
#include "sectomo/probes.hpp"

namespace sectomo {

// Section data consumed by the maps: either the body itself or a measured table.
class ChordDataSource {
public:
    explicit ChordDataSource(ConvexBody2 oracle) : rep_(std::move(oracle)) {}
    explicit ChordDataSource(DataTable table) : rep_(std::move(table)) {}

    bool is_oracle() const { return std::holds_alternative<ConvexBody2>(rep_); }
    const ConvexBody2& oracle() const { return std::get<ConvexBody2>(rep_); }

    // (rho_plus, rho_minus) along the frame direction u = perp(xi) at a tangent
    // frame of the inner body.
    std::pair<double, double> chord_pair(const ConvexBody2& inner, double theta_xi) const {
        if (const auto* K = std::get_if<ConvexBody2>(&rep_)) {
            const TangentFrame f = tangent_frame(inner, theta_xi);
            const auto c = K->chord(f.line);
            if (!c) throw DataExhausted("tangent line misses the data envelope");
            const double s1 = dot(c->first - f.p, f.u), s2 = dot(c->second - f.p, f.u);
            return {std::max(s1, s2), -std::min(s1, s2)};
        }
        const auto& t = std::get<DataTable>(rep_);
        if (t.kind != ProbeKind::ChordPair) throw Error("data source table is not chord-pair");
        return t.chord_pair(theta_xi);
    }

    // (rho(xi), rho(-xi)) about an interior point, xi = dir(theta).
    std::pair<double, double> point_pair(Point2 p, double theta) const {
        if (const auto* K = std::get_if<ConvexBody2>(&rep_))
            return {K->radial_from(p, dir(theta)), K->radial_from(p, -dir(theta))};
        const auto& t = std::get<DataTable>(rep_);
        if (t.kind != ProbeKind::ChordPair) throw Error("data source table is not chord-pair");
        return t.chord_pair(theta);
    }

private:
    std::variant<ConvexBody2, DataTable> rep_;
};

enum class Branch { Left, Right };

inline Branch flipped(Branch b) { return b == Branch::Left ? Branch::Right : Branch::Left; }

struct PhiConfig {
    ConvexBody2 inner;
    double i = 1.0;
    Mode mode = Mode::Sum;
    Branch branch = Branch::Left;
};

namespace detail {

inline double solve_power(double value_i, double i) {
    // s with s^i = value_i; tolerate tiny negative round-off
    if (value_i < 0.0) {
        if (value_i > -1e-9) return 0.0;
        throw NegativePower("power equation has no nonnegative solution");
    }
    return std::pow(value_i, 1.0 / i);
}

struct TangentPick {
    Point2 T;
    Vec2 u_toward_q; // unit, from contact toward the query point
    double theta_xi;
};

inline TangentPick pick_tangent(const ConvexBody2& inner, Point2 Q, Branch branch) {
    const TangentPair tp = tangent_lines_through(inner, Q);
    const TangentThrough& t = branch == Branch::Left ? tp.left : tp.right;
    const Point2 T = t.contact.point();
    const Vec2 d = Q - T;
    const double n = norm(d);
    if (n < 1e-14) throw Error("query point coincides with the contact point");
    return {T, d / n, t.theta};
}

} // namespace detail

// The tangent-chord map: sends Q along its supporting line of cfg.inner to the
// point beyond the contact T whose chord-power split matches the section data.
inline Point2 phi_body(Point2 Q, const PhiConfig& cfg, const ChordDataSource& data) {
    if (!(cfg.i > 0.0)) throw InvalidPower("power must be positive");
    const auto pick = detail::pick_tangent(cfg.inner, Q, cfg.branch);
    const auto [rp, rm] = data.chord_pair(cfg.inner, pick.theta_xi);
    const Vec2 u_frame = perp(dir(pick.theta_xi));
    const bool along = dot(pick.u_toward_q, u_frame) > 0.0;
    const double rho_u = along ? rp : rm;
    const double rho_mu = along ? rm : rp;
    const double qt = std::pow(dist(Q, pick.T), cfg.i);
    double s_i;
    if (cfg.mode == Mode::Sum) {
        const double F = std::pow(rho_u, cfg.i) + std::pow(rho_mu, cfg.i);
        if (qt > F + 1e-9 * std::max(1.0, F))
            throw DataExhausted("|QT|^i exceeds the section functional");
        s_i = std::max(0.0, F - qt);
    } else {
        const double F = std::pow(rho_u, cfg.i) - std::pow(rho_mu, cfg.i);
        s_i = qt - F;
    }
    const double s = detail::solve_power(s_i, cfg.i);
    return pick.T - s * pick.u_toward_q;
}

// Inverse of phi_body; from the image point the supporting line is the one on
// the opposite branch.
inline Point2 phi_body_inverse(Point2 P, const PhiConfig& cfg, const ChordDataSource& data) {
    if (!(cfg.i > 0.0)) throw InvalidPower("power must be positive");
    const auto pick = detail::pick_tangent(cfg.inner, P, flipped(cfg.branch));
    const auto [rp, rm] = data.chord_pair(cfg.inner, pick.theta_xi);
    const Vec2 u_frame = perp(dir(pick.theta_xi));
    // the forward map's u points from T toward the preimage, i.e. away from P
    const bool along = dot(-pick.u_toward_q, u_frame) > 0.0;
    const double rho_u = along ? rp : rm;
    const double rho_mu = along ? rm : rp;
    const double pt = std::pow(dist(P, pick.T), cfg.i);
    double s_i;
    if (cfg.mode == Mode::Sum) {
        const double F = std::pow(rho_u, cfg.i) + std::pow(rho_mu, cfg.i);
        if (pt > F + 1e-9 * std::max(1.0, F))
            throw DataExhausted("|PT|^i exceeds the section functional");
        s_i = std::max(0.0, F - pt);
    } else {
        const double F = std::pow(rho_u, cfg.i) - std::pow(rho_mu, cfg.i);
        s_i = F + pt;
    }
    const double s = detail::solve_power(s_i, cfg.i);
    return pick.T - s * pick.u_toward_q;
}

// Point-based map through an interior point p.
inline Point2 phi_point(Point2 Q, Point2 p, double i, Mode mode, const ChordDataSource& data) {
    if (!(i > 0.0)) throw InvalidPower("power must be positive");
    const Vec2 d = Q - p;
    const double n = norm(d);
    if (n < 1e-14) throw DegenerateDirection("query point coincides with the reference point");
    const Vec2 xi = d / n;
    const auto [ru, rmu] = data.point_pair(p, angle_of(xi));
    const double qp = std::pow(n, i);
    double s_i;
    if (mode == Mode::Sum) {
        const double F = std::pow(ru, i) + std::pow(rmu, i);
        if (qp > F + 1e-9 * std::max(1.0, F))
            throw DataExhausted("|Qp|^i exceeds the section functional");
        s_i = std::max(0.0, F - qp);
    } else {
        s_i = qp - (std::pow(ru, i) - std::pow(rmu, i));
    }
    const double s = detail::solve_power(s_i, i);
    return p - s * xi;
}

inline Point2 phi_point_inverse(Point2 P, Point2 p, double i, Mode mode,
                                const ChordDataSource& data) {
    if (!(i > 0.0)) throw InvalidPower("power must be positive");
    const Vec2 d = P - p;
    const double n = norm(d);
    if (n < 1e-14) throw DegenerateDirection("query point coincides with the reference point");
    const Vec2 xi = -d / n; // direction from p toward the preimage
    const auto [ru, rmu] = data.point_pair(p, angle_of(xi));
    const double pp = std::pow(n, i);
    double s_i;
    if (mode == Mode::Sum) {
        const double F = std::pow(ru, i) + std::pow(rmu, i);
        if (pp > F + 1e-9 * std::max(1.0, F))
            throw DataExhausted("|Pp|^i exceeds the section functional");
        s_i = std::max(0.0, F - pp);
    } else {
        s_i = (std::pow(ru, i) - std::pow(rmu, i)) + pp;
    }
    const double s = detail::solve_power(s_i, i);
    return p + s * xi;
}

// Rotation map of the unit-disk constant-cap argument, in (theta, r) coordinates
// Q = (cos t, sin t) + r (sin t, -cos t).
inline std::pair<Angle, double> phi_disk_rotation(std::pair<Angle, double> state) {
    return {state.first + Angle(2.0 * std::atan(state.second)), state.second};
}

inline Point2 disk_rotation_embed(std::pair<Angle, double> state) {
    const double t = state.first.rad, r = state.second;
    return Point2{std::cos(t), std::sin(t)} + r * Point2{std::sin(t), -std::cos(t)};
}

// ---- orbit iteration ---------------------------------------------------

struct NeighborhoodBounds {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double k = 0.0; // db/(ac)
};

// Step-3 contraction constant from the common-tangent reference points, with a
// fractional slack on each distance bound.
inline NeighborhoodBounds contraction_bound(Point2 X0, Point2 Y0, Point2 p1, Point2 p2,
                                            double margin = 0.0) {
    const double x1 = dist(X0, p1), y1 = dist(Y0, p1);
    const double x2 = dist(X0, p2), y2 = dist(Y0, p2);
    if (y1 * x2 >= x1 * y2)
        throw RatioNotContracting("zero-margin ratio |Y0p1||X0p2| / (|X0p1||Y0p2|) >= 1");
    NeighborhoodBounds nb;
    nb.a = x1 * (1.0 - margin);
    nb.b = y1 * (1.0 + margin);
    nb.c = y2 * (1.0 - margin);
    nb.d = x2 * (1.0 + margin);
    nb.k = nb.d * nb.b / (nb.a * nb.c);
    return nb;
}

struct OrbitSetup {
    PhiConfig cfg1;
    PhiConfig cfg2;
    ChordDataSource data1;
    ChordDataSource data2;
    Line2 l;   // the fixed common tangent, outer normal for both inner bodies
    Point2 p1; // contact of D1 with l
    Point2 p2; // contact of D2 with l
    Point2 X0; // boundary-on-l reference the angles are measured against
    Point2 Y0;
    double neighborhood_margin = 0.0;
};

struct StopRule {
    double theta_min = 1e-10;
    int max_iter = 10000;
};

struct OrbitTrace {
    std::vector<Point2> points;      // Q_j
    std::vector<Point2> mid_points;  // phi_1(Q_j)
    std::vector<double> theta;       // angle(phi1(Qj)->Qj, p1->X0)
    std::vector<double> eta;         // angle(phi1(Qj)->Q_{j+1}, p1->X0)
    std::vector<double> ratios;      // sin(theta_{j+1})/sin(theta_j)
    std::vector<bool> in_neighborhood;
    NeighborhoodBounds bounds;
};

namespace detail {

inline std::optional<Point2> line_intersect(const Line2& a, const Line2& b) {
    const double det = cross(a.normal, b.normal);
    if (std::fabs(det) < 1e-14) return std::nullopt;
    // solve <x, na> = oa, <x, nb> = ob
    return Point2{(a.offset * b.normal.y - b.offset * a.normal.y) / det,
                  (b.offset * a.normal.x - a.offset * b.normal.x) / det};
}

} // namespace detail

// Q_{j+1} = phi_2^{-1}(phi_1(Q_j)) with angle diagnostics. A starting point on
// the far side of l from the inner bodies is first pulled back by phi_2^{-1}.
inline OrbitTrace orbit(Point2 Q0, const OrbitSetup& s, const StopRule& stop = {}) {
    OrbitTrace tr;
    tr.bounds = contraction_bound(s.X0, s.Y0, s.p1, s.p2, s.neighborhood_margin);
    const Vec2 ref = normalized(s.X0 - s.p1);
    const double body_side = s.l.signed_dist(s.cfg1.inner.ref_point()) > 0 ? 1.0 : -1.0;

    auto run = [&](auto&& f, Point2 q) {
        try {
            return f(q);
        } catch (const DataExhausted& e) {
            throw OrbitEscaped(std::string("orbit left the data envelope: ") + e.what());
        } catch (const PointInsideBody& e) {
            throw OrbitEscaped(std::string("orbit entered an inner body: ") + e.what());
        }
    };

    Point2 Q = Q0;
    if (s.l.signed_dist(Q) * body_side < -1e-12)
        Q = run([&](Point2 q) { return phi_body_inverse(q, s.cfg2, s.data2); }, Q0);

    for (int j = 0; j < stop.max_iter; ++j) {
        tr.points.push_back(Q);
        const Point2 P = run([&](Point2 q) { return phi_body(q, s.cfg1, s.data1); }, Q);
        tr.mid_points.push_back(P);
        const double th = angle_between(Q - P, ref);
        tr.theta.push_back(th);
        if (tr.theta.size() >= 2) {
            const double prev = tr.theta[tr.theta.size() - 2];
            tr.ratios.push_back(std::sin(th) / std::sin(prev));
            if (th >= prev + 1e-12)
                throw NonDecreasingAngle("orbit angle failed to decrease");
        }
        if (th < stop.theta_min) break;
        const Point2 Qn = run([&](Point2 q) { return phi_body_inverse(q, s.cfg2, s.data2); }, P);
        tr.eta.push_back(angle_between(Qn - P, ref));

        // neighborhood membership per the a,b,c,d distance bounds, via the
        // intersections of the two supporting lines with l
        bool inside = false;
        const auto t1 = detail::line_intersect(Line2{normalized(perp(Q - P)), dot(normalized(perp(Q - P)), P)}, s.l);
        const auto t3 = detail::line_intersect(Line2{normalized(perp(Qn - P)), dot(normalized(perp(Qn - P)), P)}, s.l);
        if (t1 && t3) {
            inside = dist(Q, *t1) > tr.bounds.a && dist(P, *t1) < tr.bounds.b &&
                     dist(P, *t3) > tr.bounds.c && dist(Qn, *t3) < tr.bounds.d;
        }
        tr.in_neighborhood.push_back(inside);
        Q = Qn;
    }
    return tr;
}

} // namespace sectomo
