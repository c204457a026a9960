#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sectomo/errors.hpp"
#include "sectomo/geometry.hpp"
#include "sectomo/probes.hpp"

namespace sectomo {

using json = nlohmann::json;

namespace config_detail {

inline const json& field(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError(where + ": missing required field '" + key + "'");
    return *it;
}

inline double num(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

inline int integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
    return j.get<int>();
}

inline std::string str(const json& j, const std::string& where) {
    if (!j.is_string()) throw ConfigError(where + ": expected a string");
    return j.get<std::string>();
}

inline Point2 point(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(where + ": expected a [x, y] pair");
    return {num(j[0], where + "[0]"), num(j[1], where + "[1]")};
}

template <typename T, typename F>
inline T opt(const json& j, const std::string& key, T fallback, F&& read,
             const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    return read(*it, where + "." + key);
}

} // namespace config_detail

// Body literals:
//   {"kind": "disk",    "center": [x, y], "radius": r}
//   {"kind": "ellipse", "center": [x, y], "semi_axes": [a, b], "angle": rot}
//   {"kind": "polygon", "vertices": [[x, y], ...]}
inline ConvexBody2 parse_body(const json& j, const std::string& where) {
    using namespace config_detail;
    const std::string kind = str(field(j, "kind", where), where + ".kind");
    if (kind == "disk") {
        const Point2 c = point(field(j, "center", where), where + ".center");
        const double r = num(field(j, "radius", where), where + ".radius");
        if (!(r > 0.0)) throw ConfigError(where + ".radius: must be positive");
        return ConvexBody2::disk(c, r);
    }
    if (kind == "ellipse") {
        const Point2 c = point(field(j, "center", where), where + ".center");
        const json& ax = field(j, "semi_axes", where);
        if (!ax.is_array() || ax.size() != 2)
            throw ConfigError(where + ".semi_axes: expected an [a, b] pair");
        const double a = num(ax[0], where + ".semi_axes[0]");
        const double b = num(ax[1], where + ".semi_axes[1]");
        if (!(a > 0.0) || !(b > 0.0))
            throw ConfigError(where + ".semi_axes: must be positive");
        const double rot = opt(j, "angle", 0.0, [](const json& v, const std::string& w) {
            return config_detail::num(v, w);
        }, where);
        return ConvexBody2::ellipse(c, a, b, rot);
    }
    if (kind == "polygon") {
        const json& vs = field(j, "vertices", where);
        if (!vs.is_array() || vs.size() < 3)
            throw ConfigError(where + ".vertices: expected at least 3 vertices");
        std::vector<Point2> pts;
        for (size_t k = 0; k < vs.size(); ++k)
            pts.push_back(point(vs[k], where + ".vertices[" + std::to_string(k) + "]"));
        return ConvexBody2::polygon(std::move(pts));
    }
    throw ConfigError(where + ".kind: unknown body kind '" + kind + "'");
}

inline Mode parse_mode(const json& j, const std::string& where) {
    const std::string m = config_detail::str(j, where);
    if (m == "sum") return Mode::Sum;
    if (m == "diff") return Mode::Diff;
    throw ConfigError(where + ": expected \"sum\" or \"diff\"");
}

// {"normal": [nx, ny], "offset": h} -- the line <normal, x> = h
inline Line2 parse_line(const json& j, const std::string& where) {
    using namespace config_detail;
    const Vec2 n = point(field(j, "normal", where), where + ".normal");
    const double len = norm(n);
    if (!(len > 0.0)) throw ConfigError(where + ".normal: must be nonzero");
    const double off = num(field(j, "offset", where), where + ".offset");
    return Line2{n / len, off / len};
}

namespace config_detail {
// placeholder for required body fields; parsing always overwrites it
inline ConvexBody2 unit_disk() { return ConvexBody2::disk({0, 0}, 1.0); }
} // namespace config_detail

struct ProbeConfig {
    std::string kind = "tangent-chord"; // or "cap-area"
    ConvexBody2 body = config_detail::unit_disk();
    ConvexBody2 inner = config_detail::unit_disk();
    int grid = 512;
    std::string body_id = "K";
    std::string inner_id = "D";
};

// Shared source description for orbit / reconstruct: either an oracle body or
// a pair of probe-table CSV paths, over a pair of inner bodies.
struct ScenarioConfig {
    ConvexBody2 inner1 = config_detail::unit_disk();
    ConvexBody2 inner2 = config_detail::unit_disk();
    double power = 1.0;
    Mode mode = Mode::Sum;
    std::optional<ConvexBody2> body;
    std::optional<std::string> table1;
    std::optional<std::string> table2;
};

struct OrbitConfig {
    ScenarioConfig scenario;
    double start_dtheta = pi / 6.0; // frame offset of the starting point
    std::optional<Point2> start;    // explicit starting point overrides it
    double margin = 0.02;
    int max_steps = 10000;
    double theta_min = 1e-10;
};

struct ReconstructConfig {
    ScenarioConfig scenario;
    int budget = 500;
};

struct VerifyConfig {
    ConvexBody2 first = config_detail::unit_disk();
    ConvexBody2 second = config_detail::unit_disk();
    ConvexBody2 inner1 = config_detail::unit_disk();
    std::optional<ConvexBody2> inner2;
    double power = 1.0;
    Mode mode = Mode::Sum;
    int grid = 1024;
    double tol = 1e-6;
};

struct DetectDiskConfig {
    std::optional<std::string> table; // cap-area CSV; else probe `body`
    std::optional<ConvexBody2> body;
    Disk inner{{0, 0}, 1.0};
    int grid = 256;
};

struct NuConfig {
    std::vector<Point2> polygon;
    Line2 line;
    int side = +1;
    double power = 1.0;
};

struct ToolConfig {
    std::optional<uint64_t> seed;
    std::optional<ProbeConfig> probe;
    std::optional<OrbitConfig> orbit;
    std::optional<ReconstructConfig> reconstruct;
    std::optional<VerifyConfig> verify;
    std::optional<DetectDiskConfig> detect_disk;
    std::optional<NuConfig> nu;
};

namespace config_detail {

inline ProbeConfig parse_probe(const json& j, const std::string& where) {
    ProbeConfig c;
    c.kind = str(field(j, "kind", where), where + ".kind");
    if (c.kind != "tangent-chord" && c.kind != "cap-area")
        throw ConfigError(where + ".kind: expected \"tangent-chord\" or \"cap-area\"");
    c.body = parse_body(field(j, "body", where), where + ".body");
    c.inner = parse_body(field(j, "inner", where), where + ".inner");
    c.grid = opt(j, "grid", 512, [](const json& v, const std::string& w) {
        return integer(v, w);
    }, where);
    c.body_id = opt(j, "body_id", std::string("K"), [](const json& v, const std::string& w) {
        return str(v, w);
    }, where);
    c.inner_id = opt(j, "inner_id", std::string("D"), [](const json& v, const std::string& w) {
        return str(v, w);
    }, where);
    return c;
}

inline ScenarioConfig parse_scenario(const json& j, const std::string& where) {
    ScenarioConfig c;
    c.inner1 = parse_body(field(j, "inner1", where), where + ".inner1");
    c.inner2 = parse_body(field(j, "inner2", where), where + ".inner2");
    c.power = opt(j, "power", 1.0, [](const json& v, const std::string& w) {
        return num(v, w);
    }, where);
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode"), where + ".mode");
    if (j.contains("body")) c.body = parse_body(j.at("body"), where + ".body");
    if (j.contains("table1")) c.table1 = str(j.at("table1"), where + ".table1");
    if (j.contains("table2")) c.table2 = str(j.at("table2"), where + ".table2");
    if (!c.body && !(c.table1 && c.table2))
        throw ConfigError(where + ": needs either 'body' or both 'table1' and 'table2'");
    return c;
}

} // namespace config_detail

inline ToolConfig parse_config(const json& j) {
    using namespace config_detail;
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    ToolConfig c;
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_unsigned()) throw ConfigError("config.seed: expected an unsigned integer");
        c.seed = s.get<uint64_t>();
    }
    if (j.contains("probe")) c.probe = parse_probe(j.at("probe"), "config.probe");
    if (j.contains("orbit")) {
        const json& o = j.at("orbit");
        OrbitConfig oc;
        oc.scenario = parse_scenario(o, "config.orbit");
        oc.start_dtheta = opt(o, "start_dtheta", oc.start_dtheta,
                              [](const json& v, const std::string& w) { return num(v, w); },
                              "config.orbit");
        if (o.contains("start")) oc.start = point(o.at("start"), "config.orbit.start");
        oc.margin = opt(o, "margin", oc.margin,
                        [](const json& v, const std::string& w) { return num(v, w); },
                        "config.orbit");
        oc.max_steps = opt(o, "max_steps", oc.max_steps,
                           [](const json& v, const std::string& w) { return integer(v, w); },
                           "config.orbit");
        oc.theta_min = opt(o, "theta_min", oc.theta_min,
                           [](const json& v, const std::string& w) { return num(v, w); },
                           "config.orbit");
        c.orbit = std::move(oc);
    }
    if (j.contains("reconstruct")) {
        const json& o = j.at("reconstruct");
        ReconstructConfig rc;
        rc.scenario = parse_scenario(o, "config.reconstruct");
        rc.budget = opt(o, "budget", rc.budget,
                        [](const json& v, const std::string& w) { return integer(v, w); },
                        "config.reconstruct");
        if (rc.budget < 1) throw ConfigError("config.reconstruct.budget: must be positive");
        c.reconstruct = std::move(rc);
    }
    if (j.contains("verify")) {
        const json& o = j.at("verify");
        VerifyConfig vc;
        vc.first = parse_body(field(o, "first", "config.verify"), "config.verify.first");
        vc.second = parse_body(field(o, "second", "config.verify"), "config.verify.second");
        vc.inner1 = parse_body(field(o, "inner1", "config.verify"), "config.verify.inner1");
        if (o.contains("inner2"))
            vc.inner2 = parse_body(o.at("inner2"), "config.verify.inner2");
        vc.power = opt(o, "power", 1.0,
                       [](const json& v, const std::string& w) { return num(v, w); },
                       "config.verify");
        if (o.contains("mode")) vc.mode = parse_mode(o.at("mode"), "config.verify.mode");
        vc.grid = opt(o, "grid", vc.grid,
                      [](const json& v, const std::string& w) { return integer(v, w); },
                      "config.verify");
        vc.tol = opt(o, "tol", vc.tol,
                     [](const json& v, const std::string& w) { return num(v, w); },
                     "config.verify");
        c.verify = std::move(vc);
    }
    if (j.contains("detect_disk")) {
        const json& o = j.at("detect_disk");
        DetectDiskConfig dc;
        if (o.contains("table")) dc.table = str(o.at("table"), "config.detect_disk.table");
        if (o.contains("body"))
            dc.body = parse_body(o.at("body"), "config.detect_disk.body");
        if (!dc.table && !dc.body)
            throw ConfigError("config.detect_disk: needs either 'table' or 'body'");
        const json& inner = field(o, "inner", "config.detect_disk");
        dc.inner.center = point(field(inner, "center", "config.detect_disk.inner"),
                                "config.detect_disk.inner.center");
        dc.inner.radius = num(field(inner, "radius", "config.detect_disk.inner"),
                              "config.detect_disk.inner.radius");
        if (!(dc.inner.radius > 0.0))
            throw ConfigError("config.detect_disk.inner.radius: must be positive");
        dc.grid = opt(o, "grid", dc.grid,
                      [](const json& v, const std::string& w) { return integer(v, w); },
                      "config.detect_disk");
        c.detect_disk = std::move(dc);
    }
    if (j.contains("nu")) {
        const json& o = j.at("nu");
        NuConfig nc;
        const json& poly = field(o, "polygon", "config.nu");
        if (!poly.is_array() || poly.size() < 3)
            throw ConfigError("config.nu.polygon: expected at least 3 vertices");
        for (size_t k = 0; k < poly.size(); ++k)
            nc.polygon.push_back(
                point(poly[k], "config.nu.polygon[" + std::to_string(k) + "]"));
        nc.line = parse_line(field(o, "line", "config.nu"), "config.nu.line");
        nc.side = opt(o, "side", +1,
                      [](const json& v, const std::string& w) { return integer(v, w); },
                      "config.nu");
        if (nc.side != 1 && nc.side != -1)
            throw ConfigError("config.nu.side: expected 1 or -1");
        nc.power = opt(o, "power", 1.0,
                       [](const json& v, const std::string& w) { return num(v, w); },
                       "config.nu");
        c.nu = std::move(nc);
    }
    return c;
}

inline ToolConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

} // namespace sectomo
