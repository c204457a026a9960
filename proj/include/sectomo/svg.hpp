#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sectomo/csvio.hpp"
#include "sectomo/geometry.hpp"

namespace sectomo {

// Static SVG figure: fixed viewbox, bodies and overlays drawn in world
// coordinates with the y axis pointing up.
class SvgCanvas {
public:
    SvgCanvas(double min_x, double min_y, double max_x, double max_y, int width = 800)
        : min_x_(min_x), min_y_(min_y), max_x_(max_x), max_y_(max_y), width_(width) {
        const double h = (max_y_ - min_y_) / (max_x_ - min_x_) * width_;
        height_ = static_cast<int>(h + 0.5);
    }

    void add_body(const ConvexBody2& body, const std::string& stroke, int samples = 256) {
        add_closed(body.polygonize(samples), stroke);
    }

    void add_closed(const std::vector<Point2>& pts, const std::string& stroke) {
        std::ostringstream s;
        s << "<path d=\"" << path_of(pts) << " Z\" fill=\"none\" stroke=\"" << stroke
          << "\" stroke-width=\"1.5\"/>";
        elems_.push_back(s.str());
    }

    void add_line(const Line2& l, const std::string& stroke, bool dashed = false) {
        // clip the infinite line to the viewbox diagonal span
        const Point2 f = l.foot();
        const Vec2 t = l.tangent();
        const double span = (max_x_ - min_x_) + (max_y_ - min_y_);
        const Point2 a = f - span * t, b = f + span * t;
        std::ostringstream s;
        s << "<line x1=\"" << px(a.x) << "\" y1=\"" << py(a.y) << "\" x2=\"" << px(b.x)
          << "\" y2=\"" << py(b.y) << "\" stroke=\"" << stroke << "\" stroke-width=\"1\"";
        if (dashed) s << " stroke-dasharray=\"6 4\"";
        s << "/>";
        elems_.push_back(s.str());
    }

    void add_points(const std::vector<Point2>& pts, const std::string& fill, double r = 2.0) {
        for (const Point2& p : pts) {
            std::ostringstream s;
            s << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\"" << r
              << "\" fill=\"" << fill << "\"/>";
            elems_.push_back(s.str());
        }
    }

    void add_polyline(const std::vector<Point2>& pts, const std::string& stroke) {
        std::ostringstream s;
        s << "<path d=\"" << path_of(pts) << "\" fill=\"none\" stroke=\"" << stroke
          << "\" stroke-width=\"1\"/>";
        elems_.push_back(s.str());
    }

    void write(std::ostream& os) const {
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
           << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        for (const std::string& e : elems_) os << e << '\n';
        os << "</svg>\n";
    }

private:
    double min_x_, min_y_, max_x_, max_y_;
    int width_, height_;
    std::vector<std::string> elems_;

    double px(double x) const { return (x - min_x_) / (max_x_ - min_x_) * width_; }
    double py(double y) const { return (max_y_ - y) / (max_y_ - min_y_) * height_; }

    std::string path_of(const std::vector<Point2>& pts) const {
        std::ostringstream s;
        for (size_t k = 0; k < pts.size(); ++k)
            s << (k == 0 ? "M" : " L") << px(pts[k].x) << ' ' << py(pts[k].y);
        return s.str();
    }
};

} // namespace sectomo
