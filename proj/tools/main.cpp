// Command-line front end: probing, orbit traces, boundary reconstruction,
// uniqueness verification, disk detection, weighted measures and the built-in
// acceptance selftest. Exit codes: 0 success, 1 validation error, 2 numerical
// failure.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sectomo/artifacts.hpp"
#include "sectomo/config.hpp"
#include "sectomo/selftest.hpp"
#include "sectomo/svg.hpp"

namespace fs = std::filesystem;
using namespace sectomo;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    uint64_t seed = 20240817;
    std::string filter;
};

ToolConfig require_config(const Options& opt) {
    if (opt.config_path.empty()) throw ConfigError("this subcommand requires --config");
    return load_config(opt.config_path);
}

std::ofstream open_out(const Options& opt, const std::string& name) {
    fs::create_directories(opt.out_dir);
    const fs::path p = fs::path(opt.out_dir) / name;
    std::ofstream os(p, std::ios::binary);
    if (!os) throw Error("cannot open output file " + p.string());
    std::cout << "wrote " << p.string() << "\n";
    return os;
}

struct Box {
    double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
    void add(Point2 p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    void add(const ConvexBody2& b) {
        for (const Point2& p : b.polygonize(128)) add(p);
    }
    SvgCanvas canvas() const {
        const double mx = 0.05 * (max_x - min_x) + 1e-6, my = 0.05 * (max_y - min_y) + 1e-6;
        return SvgCanvas(min_x - mx, min_y - my, max_x + mx, max_y + my);
    }
};

ChordDataSource data_source(const ScenarioConfig& sc, const ConvexBody2& inner,
                            const std::optional<std::string>& table_path) {
    if (table_path) {
        std::ifstream is(*table_path);
        if (!is) throw ConfigError("cannot open table '" + *table_path + "'");
        return ChordDataSource(DataTable::read_csv(is));
    }
    (void)inner;
    return ChordDataSource(*sc.body);
}

Scenario build_scenario(const ScenarioConfig& sc) {
    return make_scenario(sc.inner1, sc.inner2, data_source(sc, sc.inner1, sc.table1),
                         data_source(sc, sc.inner2, sc.table2), sc.power, sc.mode, sc.body);
}

int cmd_probe(const Options& opt) {
    const ToolConfig cfg = require_config(opt);
    if (!cfg.probe) throw ConfigError("config has no 'probe' section");
    const ProbeConfig& p = *cfg.probe;
    const DataTable t =
        p.kind == "cap-area"
            ? cap_area_probe(p.body, p.inner, p.grid, p.body_id, p.inner_id)
            : tangent_chord_probe(p.body, p.inner, p.grid, p.body_id, p.inner_id);
    {
        auto os = open_out(opt, "probe.csv");
        t.write_csv(os);
    }
    Box box;
    box.add(p.body);
    box.add(p.inner);
    SvgCanvas svg = box.canvas();
    svg.add_body(p.body, "steelblue");
    svg.add_body(p.inner, "darkorange");
    auto os = open_out(opt, "probe.svg");
    svg.write(os);
    return 0;
}

int cmd_orbit(const Options& opt) {
    const ToolConfig cfg = require_config(opt);
    if (!cfg.orbit) throw ConfigError("config has no 'orbit' section");
    const OrbitConfig& oc = *cfg.orbit;
    const Scenario sc = build_scenario(oc.scenario);

    const double theta1 = angle_of(sc.l.normal);
    const auto [e1, e2] = detail::envelope_chord(sc.D1, sc.data1, theta1);
    const Point2 X0 = dist(e1, sc.p1) >= dist(e2, sc.p1) ? e1 : e2;
    const Point2 Y0 = dist(e1, sc.p1) >= dist(e2, sc.p1) ? e2 : e1;

    Point2 Q0;
    if (oc.start) {
        Q0 = *oc.start;
    } else {
        const auto [a, b] = detail::envelope_chord(sc.D1, sc.data1, theta1 - oc.start_dtheta);
        Q0 = dist(a, X0) <= dist(b, X0) ? a : b;
    }

    const OrbitSetup setup{sc.cfg1(), sc.cfg2(), sc.data1, sc.data2, sc.l,
                           sc.p1,     sc.p2,     X0,       Y0,       oc.margin};
    const StopRule stop{oc.theta_min, oc.max_steps};
    const OrbitTrace tr = orbit(Q0, setup, stop);
    {
        auto os = open_out(opt, "orbit.csv");
        write_orbit_csv(os, tr);
    }
    Box box;
    box.add(sc.D1);
    box.add(sc.D2);
    for (const Point2& p : tr.points) box.add(p);
    box.add(X0);
    SvgCanvas svg = box.canvas();
    svg.add_body(sc.D1, "steelblue");
    svg.add_body(sc.D2, "steelblue");
    svg.add_line(sc.l, "gray", true);
    svg.add_line(sc.lambda, "lightgray", true);
    svg.add_polyline(tr.points, "tomato");
    svg.add_points(tr.points, "crimson");
    svg.add_points({X0}, "black", 3.0);
    auto os = open_out(opt, "orbit.svg");
    svg.write(os);
    std::cout << "orbit: " << tr.points.size() << " iterates, final theta "
              << fmt_double(tr.theta.back()) << ", contraction constant "
              << fmt_double(tr.bounds.k) << "\n";
    return 0;
}

int cmd_reconstruct(const Options& opt) {
    const ToolConfig cfg = require_config(opt);
    if (!cfg.reconstruct) throw ConfigError("config has no 'reconstruct' section");
    const ReconstructConfig& rc = *cfg.reconstruct;
    const Scenario sc = build_scenario(rc.scenario);
    const SeedSolution sol = solve_seed(sc);
    const BoundaryCloud cloud = propagate_boundary(sc, sol.X0, rc.budget);
    {
        auto os = open_out(opt, "cloud.csv");
        write_cloud_csv(os, cloud);
    }
    Box box;
    box.add(sc.D1);
    box.add(sc.D2);
    for (const Point2& p : cloud.points) box.add(p);
    SvgCanvas svg = box.canvas();
    svg.add_body(sc.D1, "steelblue");
    svg.add_body(sc.D2, "steelblue");
    svg.add_line(sc.l, "gray", true);
    if (!cloud.hull.empty()) svg.add_closed(cloud.hull, "seagreen");
    svg.add_points(cloud.points, "crimson", 1.5);
    svg.add_points({sol.X0, sol.Y0}, "black", 3.0);
    auto os = open_out(opt, "reconstruct.svg");
    svg.write(os);
    std::cout << "seed X0 = (" << fmt_double(sol.X0.x) << ", " << fmt_double(sol.X0.y)
              << "), residual " << fmt_double(sol.residual) << ", " << cloud.points.size()
              << " boundary points\n";
    return 0;
}

int cmd_verify(const Options& opt) {
    const ToolConfig cfg = require_config(opt);
    if (!cfg.verify) throw ConfigError("config has no 'verify' section");
    const VerifyConfig& vc = *cfg.verify;
    const DiscrepancyReport rep =
        vc.inner2 ? verify_uniqueness(vc.first, vc.second, vc.inner1, *vc.inner2, vc.power,
                                      vc.mode, vc.grid, vc.tol)
                  : verify_uniqueness_single(vc.first, vc.second, vc.inner1, vc.power, vc.mode,
                                             vc.grid);
    {
        auto os = open_out(opt, "report.csv");
        write_report_csv(os, rep);
    }
    Box box;
    box.add(vc.first);
    box.add(vc.second);
    SvgCanvas svg = box.canvas();
    svg.add_body(vc.first, "steelblue");
    svg.add_body(vc.second, "tomato");
    svg.add_body(vc.inner1, "gray");
    if (vc.inner2) svg.add_body(*vc.inner2, "gray");
    auto os = open_out(opt, "verify.svg");
    svg.write(os);
    std::cout << "max discrepancy " << fmt_double(rep.max_discrepancy) << ", Hausdorff "
              << fmt_double(rep.hausdorff) << ", "
              << (rep.consistent ? "consistent (bodies agree)"
                                 : rep.two_inner ? "inconsistent (bodies differ)"
                                                 : "single-frame evidence only")
              << "\n";
    return 0;
}

int cmd_detect_disk(const Options& opt) {
    const ToolConfig cfg = require_config(opt);
    if (!cfg.detect_disk) throw ConfigError("config has no 'detect_disk' section");
    const DetectDiskConfig& dc = *cfg.detect_disk;
    DataTable t;
    if (dc.table) {
        std::ifstream is(*dc.table);
        if (!is) throw ConfigError("cannot open table '" + *dc.table + "'");
        t = DataTable::read_csv(is);
    } else {
        t = cap_area_probe(*dc.body, ConvexBody2::disk(dc.inner.center, dc.inner.radius),
                           dc.grid);
    }
    const DiskVerdict v = detect_disk(t, dc.inner);
    auto os = open_out(opt, "disk_verdict.csv");
    os << "metric,value\n";
    os << "is_disk," << (v.is_disk ? 1 : 0) << '\n';
    os << "center_x," << fmt_double(v.center.x) << '\n';
    os << "center_y," << fmt_double(v.center.y) << '\n';
    os << "radius," << fmt_double(v.radius) << '\n';
    os << "cap_deviation," << fmt_double(v.cap_deviation) << '\n';
    os << "max_rho2_diff," << fmt_double(v.max_rho2_diff) << '\n';
    os << "fit_residual," << fmt_double(v.fit_residual) << '\n';
    os << "orbit_max_gap," << fmt_double(v.orbit_max_gap) << '\n';
    os << "witness_theta," << fmt_double(v.witness_theta) << '\n';
    if (v.is_disk)
        std::cout << "disk: center (" << fmt_double(v.center.x) << ", "
                  << fmt_double(v.center.y) << "), radius " << fmt_double(v.radius) << "\n";
    else
        std::cout << "not a disk: witness frame theta = " << fmt_double(v.witness_theta)
                  << "\n";
    return 0;
}

int cmd_nu(const Options& opt) {
    const ToolConfig cfg = require_config(opt);
    if (!cfg.nu) throw ConfigError("config has no 'nu' section");
    const NuConfig& nc = *cfg.nu;
    const NuResult res = nu_measure(Region2{nc.polygon, nc.line, nc.side}, nc.power);
    auto os = open_out(opt, "nu.csv");
    os << "metric,value\n";
    os << "value," << fmt_double(res.value) << '\n';
    os << "divergent," << (res.divergent ? 1 : 0) << '\n';
    std::cout << "nu = " << fmt_double(res.value)
              << (res.divergent ? " (divergent)" : "") << "\n";
    return 0;
}

int cmd_selftest(const Options& opt) {
    uint64_t seed = opt.seed;
    if (!opt.config_path.empty()) {
        const ToolConfig cfg = load_config(opt.config_path);
        if (cfg.seed) seed = *cfg.seed;
    }
    const auto results = run_selftest(opt.out_dir, seed, opt.filter);
    if (results.empty()) throw ConfigError("no criteria match filter '" + opt.filter + "'");
    int failed = 0;
    for (const auto& r : results) {
        std::cout << "[" << (r.pass ? "pass" : "FAIL") << "] " << r.name << "  " << r.detail
                  << "\n";
        if (!r.pass) ++failed;
    }
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    if (failed) throw Divergent("selftest: " + std::to_string(failed) + " criteria failed");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"section-data tomography toolkit for planar convex bodies"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--config", opt.config_path, "JSON configuration file");
    app.add_option("--out", opt.out_dir, "output directory (default: out)");
    app.add_option("--seed", opt.seed, "random seed for seeded subcommands");
    app.add_option("--filter", opt.filter, "restrict selftest criteria by substring");

    auto* probe = app.add_subcommand("probe", "sample a probe table for a configured body");
    auto* orbit_cmd = app.add_subcommand("orbit", "trace the composed-map orbit");
    auto* recon = app.add_subcommand("reconstruct", "solve for the seed and grow a boundary cloud");
    auto* verify = app.add_subcommand("verify", "compare two bodies through their section data");
    auto* detect = app.add_subcommand("detect-disk", "decide whether cap data comes from a disk");
    auto* nu = app.add_subcommand("nu", "evaluate the weighted region measure");
    auto* selftest = app.add_subcommand("selftest", "run the built-in acceptance checks");
    // let `sectomo <cmd> --config ...` reach the top-level options
    for (auto* sub : {probe, orbit_cmd, recon, verify, detect, nu, selftest})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (probe->parsed()) return cmd_probe(opt);
        if (orbit_cmd->parsed()) return cmd_orbit(opt);
        if (recon->parsed()) return cmd_reconstruct(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (detect->parsed()) return cmd_detect_disk(opt);
        if (nu->parsed()) return cmd_nu(opt);
        if (selftest->parsed()) return cmd_selftest(opt);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NotAdmissible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
