#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sectomo/errors.hpp"
#include "sectomo/vec.hpp"

namespace sectomo {

// Shape-limited cubic Hermite interpolation on a periodic grid over [0, 2pi).
// Node slopes come from the three-point parabolic estimate; inside monotone
// runs they are clamped Fritsch-Carlson style, so monotone data interpolates
// without overshoot while smooth extrema keep full accuracy.
class PeriodicPchip {
public:
    PeriodicPchip() = default;

    PeriodicPchip(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        if (x_.size() != y_.size() || x_.size() < 3)
            throw GridTooCoarse("PeriodicPchip needs >= 3 nodes");
        for (size_t i = 1; i < x_.size(); ++i)
            if (!(x_[i] > x_[i - 1])) throw Error("PeriodicPchip: nodes must be ascending");
        build();
    }

    double operator()(double t) const {
        t = Angle::wrap(t - x_[0]) + x_[0];
        const size_t n = x_.size();
        // find segment i with x_[i] <= t < x_[i+1] (last segment wraps)
        size_t i = std::upper_bound(x_.begin(), x_.end(), t) - x_.begin();
        i = (i == 0) ? n - 1 : i - 1;
        const double h = seg_len(i);
        const double s = t - x_[i];
        const double y0 = y_[i], y1 = y_[(i + 1) % n];
        const double m0 = m_[i], m1 = m_[(i + 1) % n];
        const double u = s / h;
        const double u2 = u * u, u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * m0 +
               (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * m1;
    }

    const std::vector<double>& nodes() const { return x_; }

private:
    double seg_len(size_t i) const {
        const size_t n = x_.size();
        return (i + 1 < n) ? x_[i + 1] - x_[i] : x_[0] + two_pi - x_[n - 1];
    }

    void build() {
        const size_t n = x_.size();
        std::vector<double> d(n); // secant slopes per segment
        for (size_t i = 0; i < n; ++i) d[i] = (y_[(i + 1) % n] - y_[i]) / seg_len(i);
        m_.resize(n);
        for (size_t i = 0; i < n; ++i) {
            const double dl = d[(i + n - 1) % n], dr = d[i];
            const double hl = seg_len((i + n - 1) % n), hr = seg_len(i);
            double m = (hr * dl + hl * dr) / (hl + hr);
            if (dl * dr > 0.0) {
                const double cap = 3.0 * std::min(std::fabs(dl), std::fabs(dr));
                m = std::clamp(m, -cap, cap);
                if (m * dl < 0.0) m = 0.0;
            }
            m_[i] = m;
        }
    }

    std::vector<double> x_, y_, m_;
};

} // namespace sectomo
