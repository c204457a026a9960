#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sectomo/geometry.hpp"
#include "sectomo/probes.hpp"
#include "sectomo/quadrature.hpp"
#include "sectomo/rootfind.hpp"

namespace sectomo {

// A simple (ccw) polygonal region together with the reference line whose axis
// carries the |y|^{i-2} weight.
struct Region2 {
    std::vector<Point2> boundary;
    Line2 l;
    int side = 0; // +1 / -1: which closed half-plane of l holds the region
};

inline double polygon_area(const std::vector<Point2>& v) {
    double a2 = 0.0;
    for (size_t i = 0; i < v.size(); ++i) a2 += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a2;
}

struct NuResult {
    double value = 0.0;
    bool divergent = false;
};

// integral of |y|^{i-2} dx dy over the region, in the frame where the
// reference line is the x-axis. Vertical strips between vertex abscissae; the
// y-integral is analytic per strip, the x-integral adaptive.
inline NuResult nu_measure(const Region2& region, double i) {
    if (!(i > 0.0)) throw InvalidPower("nu_measure: power must be positive");
    const size_t n = region.boundary.size();
    if (n < 3) return {0.0, false};

    const Vec2 t = region.l.tangent();
    std::vector<double> xs(n), ys(n);
    double scale = 0.0;
    for (size_t k = 0; k < n; ++k) {
        xs[k] = dot(region.boundary[k], t);
        ys[k] = region.l.signed_dist(region.boundary[k]);
        scale = std::max({scale, std::fabs(xs[k]), std::fabs(ys[k])});
    }
    const bool ccw = polygon_area(region.boundary) >= 0.0;

    // antiderivative of |y|^{i-2}
    auto A = [i](double y) {
        const double ay = std::fabs(y);
        if (i == 1.0) return y >= 0.0 ? std::log(ay) : -std::log(ay);
        const double v = std::pow(ay, i - 1.0) / (i - 1.0);
        return y >= 0.0 ? v : -v;
    };

    std::vector<double> cuts(xs);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double a, double b) { return std::fabs(a - b) < 1e-13 * std::max(1.0, scale); }),
               cuts.end());

    const double ytol = 1e-12 * std::max(1.0, scale);
    double total = 0.0;
    double divergent_len = 0.0;

    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double x0 = cuts[c], x1 = cuts[c + 1];
        const double xm = 0.5 * (x0 + x1);
        // edges spanning this strip, as y(x) lines
        struct Seg { double y0, slope; double at(double x, double xref) const { return y0 + slope * (x - xref); } };
        std::vector<Seg> segs;
        std::vector<double> ymid;
        for (size_t k = 0; k < n; ++k) {
            const double xa = xs[k], xb = xs[(k + 1) % n];
            const double ya = ys[k], yb = ys[(k + 1) % n];
            if (std::min(xa, xb) < xm && xm < std::max(xa, xb)) {
                const double slope = (yb - ya) / (xb - xa);
                segs.push_back({ya - slope * xa, slope});
                ymid.push_back(ya + slope * (xm - xa));
            }
        }
        if (segs.size() < 2) continue;
        std::vector<size_t> ord(segs.size());
        for (size_t k = 0; k < ord.size(); ++k) ord[k] = k;
        std::sort(ord.begin(), ord.end(), [&](size_t a, size_t b) { return ymid[a] < ymid[b]; });

        auto g = [&](double x) {
            double s = 0.0;
            for (size_t k = 0; k + 1 < ord.size(); k += 2) {
                const double ylo = segs[ord[k]].at(x, 0.0);
                const double yhi = segs[ord[k + 1]].at(x, 0.0);
                s += A(yhi) - A(ylo);
            }
            return s;
        };

        bool strip_divergent = false;
        if (i <= 1.0) {
            for (size_t k = 0; k + 1 < ord.size(); k += 2) {
                const double ylo = ymid[ord[k]], yhi = ymid[ord[k + 1]];
                if (ylo <= ytol && yhi >= -ytol && yhi - ylo > 0.0) {
                    divergent_len += x1 - x0;
                    strip_divergent = true;
                }
            }
        }
        // a slice crossing the axis makes the integrand non-integrable; no
        // point feeding +inf values to the quadrature
        if (strip_divergent) continue;

        // inset the endpoints: integrable endpoint singularities (a slice
        // bound meeting the axis at a vertex) would otherwise evaluate to inf
        const double inset = (x1 - x0) * 1e-13;
        const double rough = std::fabs(g(xm)) * (x1 - x0);
        total += integrate(g, x0 + inset, x1 - inset, std::max(1e-14, 1e-9 * rough), 40);
    }
    if (divergent_len > 1e-9) return {0.0, true};
    return {ccw ? total : -total, false};
}

// ---- the small-angle comparability quantity ---------------------------

// Support of D measured from origin O with the polar axis pointing at the
// contact Q; valid when the perpendicular foot condition h'(0)=0 holds.
struct SupportGapFrame {
    ConvexBody2 D;
    Point2 Q;
    Point2 O;
};

namespace detail {

inline double frame_support(const SupportGapFrame& f, double th) {
    const double a0 = angle_of(f.Q - f.O);
    const Vec2 u = dir(a0 + th);
    return f.D.support_dir(u) - dot(f.O, u);
}

inline double frame_support_derivative(const SupportGapFrame& f, double th) {
    const double a0 = angle_of(f.Q - f.O);
    return f.D.support_derivative(a0 + th) - dot(f.O, perp(dir(a0 + th)));
}

} // namespace detail

// h'(theta) sin(theta) + h(0) - h(theta) cos(theta): the distance from the
// rotated supporting line to the base contact, ~ sin^2(theta) for C^2 bodies.
inline double support_gap_quantity(const SupportGapFrame& frame, double theta) {
    if (std::fabs(detail::frame_support_derivative(frame, 0.0)) > 1e-9)
        throw FrameInvalid("support-gap frame: origin not on the contact perpendicular");
    return detail::frame_support_derivative(frame, theta) * std::sin(theta) +
           detail::frame_support(frame, 0.0) -
           detail::frame_support(frame, theta) * std::cos(theta);
}

// empirical (min, max) of quantity / sin^2 over (0, theta_max]
inline std::pair<double, double> comparability_constants(const SupportGapFrame& frame,
                                                         double theta_max) {
    if (!(theta_max > 0.0) || theta_max >= pi / 2.0)
        throw Error("comparability_constants: need 0 < theta_max < pi/2");
    const int grid = 10000;
    double c1 = 0.0, c2 = 0.0;
    bool first = true;
    for (int k = 1; k <= grid; ++k) {
        const double th = theta_max * k / grid;
        const double s = std::sin(th);
        const double r = support_gap_quantity(frame, th) / (s * s);
        if (r <= 0.0) throw NotComparable("comparability ratio non-positive");
        c1 = first ? r : std::min(c1, r);
        c2 = first ? r : std::max(c2, r);
        first = false;
    }
    return {c1, c2};
}

// ---- symmetric-difference decomposition --------------------------------

namespace detail {

// rotate the clipped convex polygon so that the edge lying on l comes last
inline std::vector<Point2> rotate_chord_last(std::vector<Point2> poly, const Line2& l,
                                             double tol) {
    const size_t n = poly.size();
    for (size_t j = 0; j < n; ++j) {
        if (std::fabs(l.signed_dist(poly[j])) < tol &&
            std::fabs(l.signed_dist(poly[(j + 1) % n])) < tol) {
            std::vector<Point2> out;
            for (size_t k = 0; k < n; ++k) out.push_back(poly[(j + 1 + k) % n]);
            return out;
        }
    }
    return poly;
}

} // namespace detail

// Connected pieces of the symmetric difference K (xor) L, additionally cut by
// the reference line so each piece sits in one closed half-plane of l.
inline std::vector<Region2> symdiff_components(const ConvexBody2& K, const ConvexBody2& L,
                                               const Line2& l, int samples = 4096) {
    std::vector<Region2> out;
    // identical bodies: nothing to decompose
    double hdiff = 0.0;
    for (int k = 0; k < 512; ++k) {
        const double th = two_pi * k / 512.0;
        hdiff = std::max(hdiff, std::fabs(K.support(th) - L.support(th)));
    }
    if (hdiff < 1e-9) return out;

    auto push_sides = [&](const std::vector<Point2>& poly) {
        if (poly.size() < 3) return;
        for (int side : {+1, -1}) {
            const Line2 cut{side > 0 ? l.normal : -l.normal, side > 0 ? l.offset : -l.offset};
            const auto clipped = ConvexBody2::clip_halfplane(poly, cut);
            if (clipped.size() >= 3 && std::fabs(polygon_area(clipped)) > 1e-12)
                out.push_back(Region2{clipped, l, side});
        }
    };

    const Point2 o = 0.5 * (K.ref_point() + L.ref_point());
    const bool star = K.contains(o, -1e-9) && L.contains(o, -1e-9);
    if (star) {
        auto d = [&](double ph) { return K.radial_from(o, dir(ph)) - L.radial_from(o, dir(ph)); };
        // crossing angles of the two boundaries, seen from o
        std::vector<double> cross_at;
        double prev = d(0.0);
        for (int k = 1; k <= samples; ++k) {
            const double b = two_pi * k / samples;
            const double db = d(b);
            if ((prev <= 0.0) != (db <= 0.0))
                cross_at.push_back(bisect(d, two_pi * (k - 1) / samples, b, 1e-12));
            prev = db;
        }
        if (!cross_at.empty()) {
            const size_t m = cross_at.size();
            for (size_t j = 0; j < m; ++j) {
                const double a = cross_at[j];
                const double b = cross_at[(j + 1) % m] + (j + 1 == m ? two_pi : 0.0);
                const double mid = 0.5 * (a + b);
                if (std::fabs(d(mid)) < 1e-11) continue; // grazing, no area
                const bool k_outer = d(mid) > 0.0;
                const int arc = std::max(8, int(samples * (b - a) / two_pi));
                std::vector<Point2> poly;
                for (int s = 0; s <= arc; ++s) {
                    const double ph = a + (b - a) * s / arc;
                    const double r = k_outer ? K.radial_from(o, dir(ph)) : L.radial_from(o, dir(ph));
                    poly.push_back(o + r * dir(ph));
                }
                for (int s = arc; s >= 0; --s) {
                    const double ph = a + (b - a) * s / arc;
                    const double r = k_outer ? L.radial_from(o, dir(ph)) : K.radial_from(o, dir(ph));
                    poly.push_back(o + r * dir(ph));
                }
                push_sides(poly);
            }
            return out;
        }
        // no crossings: one body contains the other (annulus); cut along l
        const bool k_outer = d(0.0) > 0.0;
        const ConvexBody2& outer = k_outer ? K : L;
        const ConvexBody2& inner = k_outer ? L : K;
        const double tol = 1e-7 * std::max(1.0, std::fabs(l.offset));
        for (int side : {+1, -1}) {
            const Line2 cut{side > 0 ? l.normal : -l.normal, side > 0 ? l.offset : -l.offset};
            auto oc = ConvexBody2::clip_halfplane(outer.polygonize(samples), cut);
            auto ic = ConvexBody2::clip_halfplane(inner.polygonize(samples), cut);
            if (oc.size() < 3) continue;
            if (ic.size() < 3 || std::fabs(polygon_area(ic)) < 1e-12) {
                out.push_back(Region2{oc, l, side});
                continue;
            }
            oc = detail::rotate_chord_last(oc, l, tol);
            ic = detail::rotate_chord_last(ic, l, tol);
            std::vector<Point2> poly(oc.begin(), oc.end());
            poly.insert(poly.end(), ic.rbegin(), ic.rend());
            out.push_back(Region2{poly, l, side});
        }
        return out;
    }

    // bodies with disjoint-ish interiors: the pieces are the bodies themselves
    push_sides(K.polygonize(samples));
    push_sides(L.polygonize(samples));
    return out;
}

// ---- tangent-frame change of variables ---------------------------------

// nu_i of the region swept between the boundaries of K and L by the +u chord
// endpoints over tangent frames of D at theta_l + [dth_lo, dth_hi]; the
// reference line of the measure is the frame of D at theta_l.
inline double tangent_frame_integral(const ConvexBody2& K, const ConvexBody2& L,
                                     const ConvexBody2& D, double theta_l, double i,
                                     double dth_lo, double dth_hi) {
    if (!(i > 0.0)) throw InvalidPower("tangent_frame_integral: power must be positive");
    if (dth_hi < dth_lo) std::swap(dth_lo, dth_hi);
    if (dth_hi - dth_lo > pi / 2.0)
        throw ChartOverflow("tangent_frame_integral: range exceeds one chart");
    const Line2 l = tangent_frame(D, theta_l).line;

    auto rho_plus = [&](const ConvexBody2& B, const TangentFrame& f) {
        const auto c = B.chord(f.line);
        if (!c) throw ChartOverflow("tangent_frame_integral: frame line leaves the bodies");
        return std::max(dot(c->first - f.p, f.u), dot(c->second - f.p, f.u));
    };

    auto outer = [&](double dth) {
        const TangentFrame f = tangent_frame(D, theta_l + dth);
        const double rK = rho_plus(K, f), rL = rho_plus(L, f);
        const double lo = std::min(rK, rL), hi = std::max(rK, rL);
        // the moving-contact parametrization X(theta, r) = p(theta) + r u(theta)
        // has area element r dr dtheta
        auto inner_f = [&](double r) {
            const double y = l.signed_dist(f.p + r * f.u);
            return std::pow(std::fabs(y), i - 2.0) * r;
        };
        if (hi - lo < 1e-15) return 0.0;
        return integrate(inner_f, lo, hi, 1e-12 * std::max(1.0, hi - lo), 40);
    };
    return integrate(outer, dth_lo, dth_hi, 1e-10, 40);
}

} // namespace sectomo
