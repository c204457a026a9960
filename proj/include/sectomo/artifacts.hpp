#pragma once

#include <ostream>

#include "sectomo/csvio.hpp"
#include "sectomo/phi.hpp"
#include "sectomo/reconstruct.hpp"

namespace sectomo {

// Orbit trace rows: step index, iterate, its angle diagnostics. The bridging
// columns (eta, ratio) are one shorter than the point list and left empty on
// the last row.
inline void write_orbit_csv(std::ostream& os, const OrbitTrace& tr) {
    os << "j,x,y,theta,eta,ratio\n";
    for (size_t j = 0; j < tr.points.size(); ++j) {
        os << j << ',' << fmt_double(tr.points[j].x) << ',' << fmt_double(tr.points[j].y) << ',';
        if (j < tr.theta.size()) os << fmt_double(tr.theta[j]);
        os << ',';
        if (j < tr.eta.size()) os << fmt_double(tr.eta[j]);
        os << ',';
        if (j + 1 < tr.theta.size()) os << fmt_double(tr.ratios[j]);
        os << '\n';
    }
}

inline void write_cloud_csv(std::ostream& os, const BoundaryCloud& cloud) {
    os << "id,parent,step,map,x,y\n";
    for (size_t k = 0; k < cloud.points.size(); ++k) {
        const Provenance& pr = cloud.provenance[k];
        os << pr.id << ',' << pr.parent << ',' << pr.step << ',' << pr.map << ','
           << fmt_double(cloud.points[k].x) << ',' << fmt_double(cloud.points[k].y) << '\n';
    }
}

inline void write_report_csv(std::ostream& os, const DiscrepancyReport& rep) {
    os << "metric,value\n";
    os << "max_discrepancy," << fmt_double(rep.max_discrepancy) << '\n';
    os << "l2_discrepancy," << fmt_double(rep.l2_discrepancy) << '\n';
    os << "max_first," << fmt_double(rep.max_first) << '\n';
    os << "max_second," << fmt_double(rep.max_second) << '\n';
    os << "hausdorff," << fmt_double(rep.hausdorff) << '\n';
    os << "two_inner," << (rep.two_inner ? 1 : 0) << '\n';
    os << "consistent," << (rep.consistent ? 1 : 0) << '\n';
}

} // namespace sectomo
