#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sectomo/geometry.hpp"
#include "sectomo/phi.hpp"
#include "sectomo/probes.hpp"
#include "sectomo/rootfind.hpp"

namespace sectomo {

// ---- convex hulls and convex-position screening ------------------------

// Andrew monotone chain; returns the hull ccw without repeated endpoint.
inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Point2> h(2 * n);
    size_t k = 0;
    for (size_t idx = 0; idx < n; ++idx) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[idx] - h[k - 2]) <= 0.0) --k;
        h[k++] = pts[idx];
    }
    const size_t lower = k + 1;
    for (size_t idx = n - 1; idx-- > 0;) {
        while (k >= lower && cross(h[k - 1] - h[k - 2], pts[idx] - h[k - 2]) <= 0.0) --k;
        h[k++] = pts[idx];
    }
    h.resize(k - 1);
    return h;
}

// Largest depth of any point strictly interior to the hull of the whole set;
// 0 when every point is in convex position.
inline double convex_position_violation(const std::vector<Point2>& pts) {
    if (pts.size() < 4) return 0.0;
    const auto hull = convex_hull(pts);
    if (hull.size() < 3) return 0.0;
    double worst = 0.0;
    for (const Point2& p : pts) {
        double depth = std::numeric_limits<double>::infinity();
        for (size_t e = 0; e < hull.size(); ++e) {
            const Point2 a = hull[e], b = hull[(e + 1) % hull.size()];
            const Vec2 inward = perp(normalized(b - a));
            depth = std::min(depth, dot(p - a, inward));
        }
        worst = std::max(worst, depth);
    }
    return std::max(0.0, worst);
}

// ---- scenarios ---------------------------------------------------------

// A fully wired two-inner-body measurement setup: the admissible pair, the
// section data for each, the working common tangent l with its contacts, the
// second common tangent lambda, and the map branches that make the boundary
// point X0 on l a fixed point of the composed map.
struct Scenario {
    ConvexBody2 D1;
    ConvexBody2 D2;
    ChordDataSource data1;
    ChordDataSource data2;
    double i = 1.0;
    Mode mode = Mode::Sum;
    Line2 l;
    Point2 p1, p2; // contacts of D1, D2 with l
    Line2 lambda;  // the other common supporting line
    Branch branch1 = Branch::Left;
    Branch branch2 = Branch::Left;
    std::optional<ConvexBody2> oracle;

    PhiConfig cfg1() const { return {D1, i, mode, branch1}; }
    PhiConfig cfg2() const { return {D2, i, mode, branch2}; }
    double length_scale() const { return std::max(1.0, dist(p1, p2)); }
};

namespace detail {

// The chord endpoints cut on the frame of `theta` as read from the data.
inline std::pair<Point2, Point2> envelope_chord(const ConvexBody2& inner,
                                                const ChordDataSource& data, double theta) {
    const TangentFrame f = tangent_frame(inner, theta);
    const auto [rp, rm] = data.chord_pair(inner, theta);
    return {f.p + rp * f.u, f.p - rm * f.u};
}

// The branch for which the supporting line from Q is (numerically) the line
// with normal angle theta_l.
inline Branch branch_selecting(const ConvexBody2& inner, Point2 Q, double theta_l) {
    for (Branch b : {Branch::Left, Branch::Right}) {
        const auto pick = pick_tangent(inner, Q, b);
        if (std::fabs(angle_diff(pick.theta_xi, theta_l)) < 1e-6) return b;
    }
    throw Error("no supporting line from the point matches the common tangent");
}

} // namespace detail

// Assembles a Scenario: checks admissibility, picks the working tangent as
// the one with the stronger orbit contraction, labels X0/Y0 so the contraction
// ratio is < 1, and derives the map branches fixing X0.
inline Scenario make_scenario(ConvexBody2 D1, ConvexBody2 D2, ChordDataSource data1,
                              ChordDataSource data2, double i, Mode mode,
                              std::optional<ConvexBody2> oracle = std::nullopt) {
    const auto rep = common_tangents(D1, D2);
    require_admissible(rep);

    struct Candidate {
        Line2 l;
        Point2 p1, p2, X0, Y0;
        double theta1 = 0.0, theta2 = 0.0;
        double k = 0.0;
        bool ok = false;
    };
    Candidate cand[2];
    for (int c = 0; c < 2; ++c) {
        const CommonTangent& t = rep.tangents[c];
        Candidate& cd = cand[c];
        cd.l = t.line;
        cd.p1 = t.contact1.point();
        cd.p2 = t.contact2.point();
        cd.theta1 = t.theta;
        cd.theta2 = t.theta;
        try {
            const auto [e1, e2] = detail::envelope_chord(D1, data1, t.theta);
            // X0 is the chord endpoint on the far side of D2's contact
            const bool first_far = dist(e1, cd.p1) >= dist(e2, cd.p1);
            cd.X0 = first_far ? e1 : e2;
            cd.Y0 = first_far ? e2 : e1;
            cd.k = contraction_bound(cd.X0, cd.Y0, cd.p1, cd.p2).k;
            cd.ok = true;
        } catch (const Error&) {
            cd.ok = false;
        }
    }
    if (!cand[0].ok && !cand[1].ok)
        throw RatioNotContracting("no common tangent yields a contracting orbit");
    const Candidate& best =
        (!cand[1].ok || (cand[0].ok && cand[0].k <= cand[1].k)) ? cand[0] : cand[1];
    const Candidate& other = (&best == &cand[0]) ? cand[1] : cand[0];

    Scenario sc{std::move(D1), std::move(D2), std::move(data1), std::move(data2),
                i,  mode, best.l, best.p1, best.p2, other.l,
                Branch::Left, Branch::Left, std::move(oracle)};
    sc.branch1 = detail::branch_selecting(sc.D1, best.X0, best.theta1);
    sc.branch2 = flipped(detail::branch_selecting(sc.D2, best.Y0, best.theta2));
    return sc;
}

// Smallest distance from P to a chord endpoint implied by the data, over both
// inner bodies and both supporting lines through P.
inline double boundary_envelope_distance(const Scenario& sc, Point2 P) {
    double best = std::numeric_limits<double>::infinity();
    const std::pair<const ConvexBody2*, const ChordDataSource*> sources[2] = {
        {&sc.D1, &sc.data1}, {&sc.D2, &sc.data2}};
    for (const auto& [inner, data] : sources) {
        for (Branch b : {Branch::Left, Branch::Right}) {
            try {
                const auto pick = detail::pick_tangent(*inner, P, b);
                const auto [rp, rm] = data->chord_pair(*inner, pick.theta_xi);
                const double s = dot(P - pick.T, perp(dir(pick.theta_xi)));
                best = std::min(best, std::min(std::fabs(s - rp), std::fabs(s + rm)));
            } catch (const Error&) {
            }
        }
    }
    return best;
}

// ---- boundary propagation ----------------------------------------------

struct Provenance {
    int id = 0;
    int parent = -1; // -1 for the seed
    int step = 0;    // breadth-first depth
    int map = -1;    // 0 phi1, 1 phi1^-1, 2 phi2, 3 phi2^-1
};

struct BoundaryCloud {
    std::vector<Point2> points;
    std::vector<Provenance> provenance;
    std::vector<Point2> hull;
};

namespace detail {

inline std::vector<std::pair<Point2, Provenance>> expand_frontier(const Scenario& sc, Point2 seed,
                                                                  int budget) {
    const PhiConfig c1 = sc.cfg1(), c2 = sc.cfg2();
    auto apply = [&](int map, Point2 q) -> std::optional<Point2> {
        try {
            switch (map) {
                case 0: return phi_body(q, c1, sc.data1);
                case 1: return phi_body_inverse(q, c1, sc.data1);
                case 2: return phi_body(q, c2, sc.data2);
                default: return phi_body_inverse(q, c2, sc.data2);
            }
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    const double dedup = 1e-7 * sc.length_scale();
    std::vector<std::pair<Point2, Provenance>> cloud;
    cloud.push_back({seed, Provenance{0, -1, 0, -1}});
    size_t next = 0;
    while (static_cast<int>(cloud.size()) < budget && next < cloud.size()) {
        const auto [q, prov] = cloud[next++];
        for (int m = 0; m < 4 && static_cast<int>(cloud.size()) < budget; ++m) {
            const auto img = apply(m, q);
            if (!img) continue;
            bool known = false;
            for (const auto& [p, _] : cloud)
                if (dist(p, *img) < dedup) {
                    known = true;
                    break;
                }
            if (known) continue;
            cloud.push_back({*img, Provenance{static_cast<int>(cloud.size()), prov.id,
                                              prov.step + 1, m}});
        }
    }
    return cloud;
}

} // namespace detail

// Breadth-first expansion of the four maps from a boundary seed, with
// convex-position screening of the result.
inline BoundaryCloud propagate_boundary(const Scenario& sc, Point2 seed, int budget) {
    if (budget < 1) throw Error("propagate_boundary: budget must be positive");
    const double env = boundary_envelope_distance(sc, seed);
    if (!(env < 1e-6 * sc.length_scale()))
        throw SeedOffBoundary("seed is " + std::to_string(env) + " away from the data envelope");

    auto raw = detail::expand_frontier(sc, seed, budget);
    if (static_cast<int>(raw.size()) < budget)
        throw FrontierStalled("only " + std::to_string(raw.size()) + " of " +
                              std::to_string(budget) + " points reachable");

    // convex-position screening: drop points strictly interior to the hull
    BoundaryCloud cloud;
    std::vector<Point2> all;
    all.reserve(raw.size());
    for (const auto& [p, _] : raw) all.push_back(p);
    const auto hull = convex_hull(all);
    const double tol = 1e-7;
    for (const auto& [p, prov] : raw) {
        double depth = std::numeric_limits<double>::infinity();
        for (size_t e = 0; e < hull.size(); ++e) {
            const Point2 a = hull[e], b = hull[(e + 1) % hull.size()];
            depth = std::min(depth, dot(p - a, perp(normalized(b - a))));
        }
        if (hull.size() >= 3 && depth > tol) continue;
        cloud.points.push_back(p);
        cloud.provenance.push_back(prov);
    }
    cloud.hull = convex_hull(cloud.points);
    return cloud;
}

// ---- seed solving on the common tangent --------------------------------

struct SeedSolution {
    Point2 X0, Y0;
    double residual = 0.0; // consistency score at the root; ~0 for clean data
};

namespace detail {

// Composed-map iteration until the increment stalls; the attractor is the
// data's boundary point on l.
inline Point2 composed_limit(const Scenario& sc, Point2 start) {
    const PhiConfig c1 = sc.cfg1(), c2 = sc.cfg2();
    const double tol = 1e-13 * sc.length_scale();
    Point2 q = start;
    for (int j = 0; j < 500; ++j) {
        const Point2 p = phi_body(q, c1, sc.data1);
        const Point2 qn = phi_body_inverse(p, c2, sc.data2);
        const double inc = dist(qn, q);
        q = qn;
        if (inc < tol) break;
    }
    return q;
}

} // namespace detail

// Finds the boundary points X0, Y0 on the common tangent l by root-finding
// the offset between a candidate position and the attractor of a short
// composed-map orbit launched from it.
inline SeedSolution solve_seed(const Scenario& sc) {
    const Vec2 td = sc.l.tangent();
    const Point2 foot = sc.l.foot();
    auto at = [&](double t) { return foot + t * td; };
    auto pos = [&](Point2 p) { return dot(p - foot, td); };

    // coarse location of the X0-side chord endpoint from the l-frame data
    const double theta1 = angle_of(sc.l.normal);
    const auto [e1, e2] = detail::envelope_chord(sc.D1, sc.data1, theta1);
    const Point2 X0c = dist(e1, sc.p1) >= dist(e2, sc.p1) ? e1 : e2;
    const double span = std::max(dist(sc.p1, sc.p2), 0.25 * dist(e1, e2));
    const double t0 = pos(X0c);
    const double half = 0.45 * std::min(span, dist(X0c, sc.p2));

    // the flipped first-map branch sends an on-line candidate across the body
    Scenario flip = sc;
    flip.branch1 = flipped(sc.branch1);
    const PhiConfig fc1 = flip.cfg1();

    auto residual = [&](double t) -> std::optional<double> {
        try {
            const Point2 start = phi_body(at(t), fc1, sc.data1);
            return pos(detail::composed_limit(sc, start)) - t;
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    // bracket a sign change on a coarse grid, then bisection + secant
    const int grid = 16;
    double lo = 0.0, hi = 0.0;
    bool have = false;
    std::optional<double> prev;
    double prev_t = 0.0;
    for (int g = 0; g <= grid; ++g) {
        const double t = t0 - half + 2.0 * half * g / grid;
        const auto r = residual(t);
        if (r && prev && *prev * *r <= 0.0) {
            lo = prev_t;
            hi = t;
            have = true;
            break;
        }
        if (r) {
            prev = r;
            prev_t = t;
        }
    }
    if (!have) throw NoRoot("seed residual has no sign change along the common tangent");

    const double t_star = bisect_secant([&](double t) { return residual(t).value_or(1e9); },
                                        lo, hi, 1e-10);

    SeedSolution sol;
    sol.X0 = at(t_star);
    sol.Y0 = phi_body(sol.X0, sc.cfg1(), sc.data1);

    // consistency score: round trip along l plus convex-position violation of
    // a short propagated cloud
    const Point2 back = phi_body_inverse(sol.Y0, sc.cfg2(), sc.data2);
    double score = dist(back, sol.X0);
    auto raw = detail::expand_frontier(sc, sol.X0, 24);
    std::vector<Point2> pts;
    for (const auto& [p, _] : raw) pts.push_back(p);
    score = std::max(score, convex_position_violation(pts));
    sol.residual = score;
    return sol;
}

// ---- uniqueness verification -------------------------------------------

struct DiscrepancyReport {
    double max_discrepancy = 0.0; // sup |F_K - F_L| over all probed frames
    double l2_discrepancy = 0.0;  // root mean square over the frames
    double max_first = 0.0;       // per-inner-body maxima
    double max_second = 0.0;
    double hausdorff = 0.0; // between K and L
    bool two_inner = true;
    bool consistent = false; // meaningful only with two inner bodies
};

namespace detail {

inline std::pair<double, double> frame_discrepancy(const ConvexBody2& K, const ConvexBody2& L,
                                                   const ConvexBody2& D, double i, Mode mode,
                                                   int grid_size) {
    double mx = 0.0, sq = 0.0;
    for (int g = 0; g < grid_size; ++g) {
        const double th = two_pi * g / grid_size;
        const TangentFrame f = tangent_frame(D, th);
        auto functional = [&](const ConvexBody2& B) {
            const auto c = B.chord(f.line);
            if (!c) return 0.0;
            const double s1 = dot(c->first - f.p, f.u), s2 = dot(c->second - f.p, f.u);
            return power_functional(std::max(s1, s2), -std::min(s1, s2), i, mode);
        };
        const double d = std::fabs(functional(K) - functional(L));
        mx = std::max(mx, d);
        sq += d * d;
    }
    return {mx, std::sqrt(sq / grid_size)};
}

} // namespace detail

inline double hausdorff_distance(const ConvexBody2& K, const ConvexBody2& L, int grid = 4096) {
    double mx = 0.0;
    for (int g = 0; g < grid; ++g) {
        const double th = two_pi * g / grid;
        mx = std::max(mx, std::fabs(K.support(th) - L.support(th)));
    }
    return mx;
}

// Compares the section data of K and L over the tangent frames of both inner
// bodies; equal data for an admissible pair certifies K = L.
inline DiscrepancyReport verify_uniqueness(const ConvexBody2& K, const ConvexBody2& L,
                                           const ConvexBody2& D1, const ConvexBody2& D2,
                                           double i, Mode mode, int grid_size = 1024,
                                           double tol = 1e-6) {
    DiscrepancyReport rep;
    const auto [m1, l1] = detail::frame_discrepancy(K, L, D1, i, mode, grid_size);
    const auto [m2, l2] = detail::frame_discrepancy(K, L, D2, i, mode, grid_size);
    rep.max_first = m1;
    rep.max_second = m2;
    rep.max_discrepancy = std::max(m1, m2);
    rep.l2_discrepancy = std::sqrt(0.5 * (l1 * l1 + l2 * l2));
    rep.hausdorff = hausdorff_distance(K, L);
    rep.two_inner = true;
    rep.consistent = rep.max_discrepancy < tol;
    return rep;
}

// Single-inner-body comparison: reports the evidence but never claims a
// uniqueness verdict (equal data over one inner body is not known to imply
// K = L).
inline DiscrepancyReport verify_uniqueness_single(const ConvexBody2& K, const ConvexBody2& L,
                                                  const ConvexBody2& D1, double i, Mode mode,
                                                  int grid_size = 1024) {
    DiscrepancyReport rep;
    const auto [m1, l1] = detail::frame_discrepancy(K, L, D1, i, mode, grid_size);
    rep.max_first = rep.max_discrepancy = m1;
    rep.l2_discrepancy = l1;
    rep.hausdorff = hausdorff_distance(K, L);
    rep.two_inner = false;
    rep.consistent = false;
    return rep;
}

// ---- constant-cap disk detection ---------------------------------------

struct DiskVerdict {
    bool is_disk = false;
    Point2 center{};
    double radius = 0.0;
    double cap_deviation = 0.0;  // spread of the cap areas across frames
    double max_rho2_diff = 0.0;  // derivative-based chord-split asymmetry
    double fit_residual = 0.0;   // worst model error of the fitted disk
    double orbit_max_gap = 0.0;  // rotation-orbit density diagnostic
    double witness_theta = 0.0;  // frame of worst deviation when not a disk
};

namespace detail {

// Area of a disk of radius R beyond a line at signed distance delta from its
// center.
inline double disk_segment_area(double R, double delta) {
    if (delta >= R) return 0.0;
    if (delta <= -R) return pi * R * R;
    return R * R * std::acos(delta / R) - delta * std::sqrt(R * R - delta * delta);
}

} // namespace detail

// Decides from a cap-area table over the tangent lines of disk D whether the
// sampled body is a disk, returning its center and radius when it is.
inline DiskVerdict detect_disk(const DataTable& table, const Disk& D) {
    if (table.kind != ProbeKind::CapArea)
        throw Error("detect_disk: table is not a cap-area table");
    if (table.theta.size() < 8)
        throw IncompleteTable("detect_disk: fewer than 8 frames");
    {
        std::vector<double> th(table.theta);
        for (double& a : th) a = Angle::wrap(a);
        std::sort(th.begin(), th.end());
        double gap = two_pi - th.back() + th.front();
        for (size_t k = 0; k + 1 < th.size(); ++k) gap = std::max(gap, th[k + 1] - th[k]);
        if (gap > pi / 2.0) throw IncompleteTable("detect_disk: frame coverage has gaps");
    }

    DiskVerdict v;
    const auto [mn_it, mx_it] = std::minmax_element(table.v1.begin(), table.v1.end());
    v.cap_deviation = *mx_it - *mn_it;
    const double scale = std::max(1.0, std::fabs(*mx_it));

    if (table.theta.size() >= 256)
        for (int g = 0; g < 64; ++g)
            v.max_rho2_diff = std::max(
                v.max_rho2_diff,
                std::fabs(cap_derivative_to_rho2_diff(table, two_pi * g / 64.0)) * 2.0);

    const double mean =
        std::accumulate(table.v1.begin(), table.v1.end(), 0.0) / table.v1.size();

    // model fit: center c and radius R with cap(theta) predicted by the
    // segment beyond the supporting line of D
    auto predict = [&](Point2 c, double R, double th) {
        const Vec2 u = dir(th);
        const double delta = dot(D.center - c, u) + D.radius;
        return detail::disk_segment_area(R, delta);
    };

    // initial radius from the mean cap with the center at D's center
    double R = D.radius * 1.5;
    {
        double hiR = D.radius * 2.0;
        while (detail::disk_segment_area(hiR, D.radius) < mean && hiR < 1e8) hiR *= 2.0;
        R = bisect([&](double r) { return detail::disk_segment_area(r, D.radius) - mean; },
                   D.radius, hiR, 1e-13 * hiR);
    }
    Point2 c = D.center;

    // Gauss-Newton on (cx, cy, R) against the table nodes
    const size_t n = table.theta.size();
    for (int it = 0; it < 80; ++it) {
        double JTJ[3][3] = {};
        double JTr[3] = {};
        const double h = 1e-7 * std::max(1.0, R);
        for (size_t k = 0; k < n; ++k) {
            const double th = table.theta[k];
            const double r0 = predict(c, R, th) - table.v1[k];
            const double j[3] = {
                (predict({c.x + h, c.y}, R, th) - predict({c.x - h, c.y}, R, th)) / (2 * h),
                (predict({c.x, c.y + h}, R, th) - predict({c.x, c.y - h}, R, th)) / (2 * h),
                (predict(c, R + h, th) - predict(c, R - h, th)) / (2 * h)};
            for (int a = 0; a < 3; ++a) {
                JTr[a] += j[a] * r0;
                for (int b = 0; b < 3; ++b) JTJ[a][b] += j[a] * j[b];
            }
        }
        // solve the 3x3 normal equations by Gaussian elimination
        double M[3][4];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) M[a][b] = JTJ[a][b];
            M[a][3] = -JTr[a];
            M[a][a] += 1e-12 * (1.0 + JTJ[a][a]);
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int row = col + 1; row < 3; ++row)
                if (std::fabs(M[row][col]) > std::fabs(M[piv][col])) piv = row;
            std::swap(M[col], M[piv]);
            if (std::fabs(M[col][col]) < 1e-300) break;
            for (int row = 0; row < 3; ++row) {
                if (row == col) continue;
                const double f = M[row][col] / M[col][col];
                for (int cc = col; cc < 4; ++cc) M[row][cc] -= f * M[col][cc];
            }
        }
        const double dx = M[0][3] / M[0][0], dy = M[1][3] / M[1][1], dR = M[2][3] / M[2][2];
        c.x += dx;
        c.y += dy;
        R += dR;
        if (std::fabs(dx) + std::fabs(dy) + std::fabs(dR) < 1e-14 * std::max(1.0, R)) break;
    }

    double worst = 0.0, worst_th = 0.0;
    for (size_t k = 0; k < n; ++k) {
        const double d = std::fabs(predict(c, R, table.theta[k]) - table.v1[k]);
        if (d > worst) {
            worst = d;
            worst_th = table.theta[k];
        }
    }
    v.fit_residual = worst;
    v.witness_theta = worst_th;

    if (worst < 1e-8 * scale) {
        v.is_disk = true;
        v.center = c;
        v.radius = R;
        // rotation-orbit density diagnostic in the inner disk's tangent
        // coordinates; periodic orbits are legitimate, so this only reports
        const double delta0 = dot(D.center - c, dir(0.0)) + D.radius;
        const double half_chord = R > std::fabs(delta0)
                                      ? std::sqrt(R * R - delta0 * delta0)
                                      : 0.0;
        const double r_t = half_chord / D.radius;
        std::vector<double> angles;
        std::pair<Angle, double> state{Angle(0.0), r_t};
        for (int s = 0; s < 512; ++s) {
            angles.push_back(state.first.rad);
            state = phi_disk_rotation(state);
        }
        std::sort(angles.begin(), angles.end());
        double gap = two_pi - angles.back() + angles.front();
        for (size_t s = 0; s + 1 < angles.size(); ++s)
            gap = std::max(gap, angles[s + 1] - angles[s]);
        v.orbit_max_gap = gap;
    } else {
        // not a disk; point the witness at the frame of worst cap deviation
        double dev = 0.0;
        for (size_t k = 0; k < n; ++k) {
            const double d = std::fabs(table.v1[k] - mean);
            if (d > dev) {
                dev = d;
                v.witness_theta = table.theta[k];
            }
        }
    }
    return v;
}

} // namespace sectomo
