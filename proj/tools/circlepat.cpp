// circlepat: check, solve, lay out and deform hyperbolic circle patterns.
//
// Exit codes: 0 success, 1 mathematical or verification failure, 2 input failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "circlepat/deform.hpp"
#include "circlepat/errors.hpp"
#include "circlepat/io.hpp"
#include "circlepat/layout.hpp"
#include "circlepat/solver.hpp"
#include "circlepat/surface.hpp"
#include "circlepat/verify.hpp"

#ifndef CIRCLEPAT_DATA_DIR
#define CIRCLEPAT_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace circlepat;

namespace {

constexpr int kOk = 0;
constexpr int kMathFailure = 1;
constexpr int kInputFailure = 2;

// Raised for bad command-line input that the library would not see.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file_atomic(path, content);
}

struct CheckArgs {
    std::string surface;
    std::string mode = "general";
    int subset_bound = kDefaultSubsetBound;
};

int cmd_check(const CheckArgs& a) {
    const auto file = load_surface(a.surface);
    const auto v = validate(file.surface);
    if (!v.pass()) {
        std::cout << format_report(v);
        return kInputFailure;
    }
    ConditionReport r;
    if (a.mode == "general")
        r = check_origin_in_Y(file.surface, file.weights, a.subset_bound);
    else if (a.mode == "thurston")
        r = check_thurston(file.surface, file.weights);
    else
        r = check_ideal(file.surface, file.weights, a.subset_bound);
    std::cout << format_report(r);
    return r.pass() ? kOk : kMathFailure;
}

struct SolveArgs {
    std::string surface;
    double tol = 1e-10;
    int max_iter = 200;
    std::string init;
    bool ideal = false;
    bool force = false;
    std::string output;
};

int cmd_solve(const SolveArgs& a) {
    const auto file = load_surface(a.surface);
    SolveOptions o;
    o.tol = a.tol;
    o.max_iter = a.max_iter;
    o.check_conditions = !a.force;
    if (!a.init.empty()) o.init_radii = radii_for_surface(load_radii(a.init), file.surface);
    const auto sol = a.ideal ? solve_ideal(file.surface, file.weights, o) : solve(file.surface, file.weights, o);

    RadiiFile out;
    out.surface_name = file.surface.name();
    out.residual = sol.residual;
    for (int v = 0; v < file.surface.num_vertices(); ++v) out.radii.emplace_back(file.surface.vertex_id(v), sol.radii[v]);
    emit(a.output, serialize_radii(out));
    std::ostream& log = a.output.empty() || a.output == "-" ? std::cerr : std::cout;
    log << "mode " << mode_name(sol.mode) << " iterations " << sol.iterations << " flow steps " << sol.flow_steps
        << " residual " << sci(sol.residual) << "\n";
    return kOk;
}

struct LayoutArgs {
    std::string surface;
    std::string radii;
    std::string output;
    bool labels = false;
    bool shade = false;
    bool ideal = false;
};

constexpr double kMaxRadiiResidual = 1e-8;

int cmd_layout(const LayoutArgs& a) {
    const auto file = load_surface(a.surface);
    const auto rf = load_radii(a.radii);
    if (rf.surface_name != file.surface.name())
        throw ParseError("radii are for surface '" + rf.surface_name + "', not '" + file.surface.name() + "'", 1);
    const auto radii = radii_for_surface(rf, file.surface);
    if (!(rf.residual <= kMaxRadiiResidual)) {
        std::cout << "recorded residual " << sci(rf.residual) << " exceeds " << sci(kMaxRadiiResidual) << "\n";
        return kMathFailure;
    }
    const PatternMode mode =
        a.ideal || !file.surface.is_triangulation() ? PatternMode::Ideal : PatternMode::Triangulated;
    const auto layout = develop(file.surface, file.weights, radii, mode);

    bool ok = true;
    std::cout << "mode " << mode_name(mode) << "\n";
    std::cout << "placed faces " << layout.faces.size() << " circles " << layout.circles.size() << "\n";
    std::cout << "holonomy residual " << sci(layout.holonomy_residual) << "\n";
    ok = ok && layout.holonomy_residual <= 1e-7;
    const auto angles = verify_intersection_angles(layout);
    std::cout << "intersection angles checked " << angles.checked << " max deviation " << sci(angles.max_deviation)
              << (angles.pass() ? " ok" : " FAIL") << "\n";
    for (const auto& m : angles.mismatches) std::cout << "  " << m << "\n";
    ok = ok && angles.pass();
    const auto contact = verify_primitive_contact(layout);
    std::cout << "primitive contact lenses " << contact.lenses << " swallowed " << contact.swallowed.size()
              << (contact.pass() ? " ok" : " FAIL") << "\n";
    for (const auto& m : contact.swallowed) std::cout << "  " << m << "\n";
    ok = ok && contact.pass();
    if (mode == PatternMode::Ideal) {
        const auto inc = verify_ideal_incidence(layout);
        std::cout << "ideal incidence faces " << inc.faces << " spread " << sci(inc.max_spread)
                  << (inc.pass() ? " ok" : " FAIL") << "\n";
        ok = ok && inc.pass();
    }
    if (!a.output.empty()) write_file_atomic(a.output, emit_svg(layout, &file.surface, {a.labels, a.shade, false}));
    return ok ? kOk : kMathFailure;
}

struct DeformArgs {
    std::string surface;
    std::string regions;
    int n = 0;
    std::vector<int> refine;
    double tol = 1e-10;
    std::string prefix;
};

std::map<int, PlanarRegion> load_regions(const CellularSurface& s, const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IOError("region directory '" + dir.string() + "' not found");
    std::map<int, PlanarRegion> out;
    for (int f = 0; f < s.num_faces(); ++f) {
        const int id = s.face(f).id;
        const fs::path p = dir / ("face" + std::to_string(id) + ".region");
        if (!fs::exists(p)) {
            if (s.face_size(f) != 3) throw IOError("face " + std::to_string(id) + ": missing region file " + p.string());
            continue;
        }
        const auto rf = load_region(p);
        if (rf.face_id != id)
            throw ParseError(p.string() + " is for face " + std::to_string(rf.face_id) + ", not " + std::to_string(id), 1);
        if (static_cast<int>(rf.corners.size()) != s.face_size(f))
            throw ParseError(p.string() + ": face " + std::to_string(id) + " has " + std::to_string(s.face_size(f)) +
                                 " corners, region has " + std::to_string(rf.corners.size()),
                             0);
        out[id] = PlanarRegion{rf.corners};
    }
    return out;
}

int cmd_deform(const DeformArgs& a) {
    const auto file = load_surface(a.surface);
    const auto regions = load_regions(file.surface, a.regions);
    DeformOptions o;
    o.tol = a.tol;
    if (!a.refine.empty()) {
        const auto rep = refinement_experiment(file.surface, file.weights, regions, a.refine, o);
        const std::string table = rep.format();
        std::cout << table;
        if (!a.prefix.empty()) write_file_atomic(a.prefix + ".report", table);
        return rep.within_slack ? kOk : kMathFailure;
    }
    if (a.n <= 0) throw UsageError("deform needs -n or --refine");
    const auto res = deform_solve(file.surface, file.weights, regions, a.n, o);
    const auto& g = res.glued;
    std::cout << "glued surface V=" << g.surface.num_vertices() << " E=" << g.surface.num_edges()
              << " F=" << g.surface.num_faces() << " genus=" << g.surface.genus() << "\n";
    std::cout << "iterations " << res.full.iterations << " residual " << sci(res.full.residual) << " min radius "
              << sci(res.min_radius) << "\n";
    for (const auto& p : res.proxies) {
        std::cout << "face " << p.face_id << " interstice corners";
        for (const auto& c : p.corners) std::cout << " (" << format_roundtrip(c.real()) << "," << format_roundtrip(c.imag()) << ")";
        if (p.has_cross_ratio)
            std::cout << " cross-ratio (" << format_roundtrip(p.cross_ratio.real()) << ","
                      << format_roundtrip(p.cross_ratio.imag()) << ")";
        std::cout << "\n";
    }
    if (!a.prefix.empty()) {
        write_file_atomic(a.prefix + ".surf", serialize_surface(make_surface_file(g.surface, g.weights)));
        RadiiFile rf;
        rf.surface_name = g.surface.name();
        rf.residual = res.full.residual;
        for (int v = 0; v < g.surface.num_vertices(); ++v) rf.radii.emplace_back(g.surface.vertex_id(v), res.full.radii[v]);
        write_file_atomic(a.prefix + ".radii", serialize_radii(rf));
        const auto layout = develop(g.surface, g.weights, res.full);
        write_file_atomic(a.prefix + ".svg", emit_svg(layout, &g.surface, {false, true, false}));
    }
    return kOk;
}

struct VerifyArgs {
    VerifyOptions opts;
    std::string data = CIRCLEPAT_DATA_DIR;
};

int cmd_verify(const VerifyArgs& a) {
    const fs::path dir = a.data;
    const auto tri = load_surface(dir / "genus2_tri12.surf");
    const auto ideal = load_surface(dir / "genus2_quads8_ideal.surf");
    const VerifyInstances inst{tri.surface, ideal.surface, ideal.weights};
    const auto rep = run_verify(a.opts, inst);
    std::cout << rep.format(a.opts);
    return rep.pass() ? kOk : kMathFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic circle patterns on closed surfaces"};
    app.require_subcommand(1);

    CheckArgs check;
    auto* c = app.add_subcommand("check", "validate a surface and run a solvability checker");
    c->add_option("surface", check.surface, "surface file")->required();
    c->add_option("--mode", check.mode, "checker")->check(CLI::IsMember({"general", "thurston", "ideal"}));
    c->add_option("--subset-bound", check.subset_bound, "largest subset searched exhaustively")
        ->check(CLI::PositiveNumber);

    SolveArgs solve_args;
    auto* s = app.add_subcommand("solve", "find the radii realizing the weights");
    s->add_option("surface", solve_args.surface, "surface file")->required();
    s->add_option("--tol", solve_args.tol, "curvature tolerance")->check(CLI::PositiveNumber);
    s->add_option("--max-iter", solve_args.max_iter, "Newton iteration limit")->check(CLI::PositiveNumber);
    s->add_option("--init", solve_args.init, "radii file to start from");
    s->add_flag("--ideal", solve_args.ideal, "ideal pattern (faces of any size)");
    s->add_flag("--force", solve_args.force, "skip the solvability checker");
    s->add_option("-o,--output", solve_args.output, "radii file to write (default stdout)");

    LayoutArgs layout_args;
    auto* l = app.add_subcommand("layout", "develop solved radii into the Poincare disk");
    l->add_option("surface", layout_args.surface, "surface file")->required();
    l->add_option("--radii", layout_args.radii, "radii file")->required();
    l->add_option("-o,--output", layout_args.output, "SVG file to write");
    l->add_flag("--labels", layout_args.labels, "label circles with vertex ids");
    l->add_flag("--shade", layout_args.shade, "shade faces");
    l->add_flag("--ideal", layout_args.ideal, "treat a triangulation as an ideal pattern");

    DeformArgs deform_args;
    auto* d = app.add_subcommand("deform", "glue cookie-cutter packings into faces and solve");
    d->add_option("surface", deform_args.surface, "surface file")->required();
    d->add_option("--regions", deform_args.regions, "directory of face<id>.region files")->required();
    auto* n_opt = d->add_option("-n", deform_args.n, "lattice refinement")->check(CLI::Range(2, 64));
    auto* r_opt = d->add_option("--refine", deform_args.refine, "comma separated refinements")->delimiter(',');
    n_opt->excludes(r_opt);
    d->add_option("--tol", deform_args.tol, "curvature tolerance")->check(CLI::PositiveNumber);
    d->add_option("-o,--output", deform_args.prefix, "output prefix");

    VerifyArgs verify_args;
    auto* v = app.add_subcommand("verify", "seeded property suites");
    v->add_option("--trials", verify_args.opts.trials, "samples per property")->check(CLI::PositiveNumber);
    v->add_option("--seed", verify_args.opts.seed, "64-bit seed");
    v->add_option("--suite", verify_args.opts.suite, "suite")->check(CLI::IsMember({"config", "solver", "layout", "all"}));
    v->add_option("--property", verify_args.opts.property, "run one property only");
    v->add_option("--start", verify_args.opts.start, "first sample index")->check(CLI::NonNegativeNumber);
    v->add_option("--tol-scale", verify_args.opts.tol_scale, "multiply every tolerance")->check(CLI::PositiveNumber);
    v->add_option("--data", verify_args.data, "directory holding the bundled surfaces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputFailure;
    }

    try {
        if (*c) return cmd_check(check);
        if (*s) return cmd_solve(solve_args);
        if (*l) return cmd_layout(layout_args);
        if (*d) return cmd_deform(deform_args);
        if (*v) return cmd_verify(verify_args);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputFailure;
    } catch (const IOError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputFailure;
    } catch (const InvalidSurface& e) {
        std::cerr << "invalid surface: " << e.what() << "\n";
        return kInputFailure;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kInputFailure;
    } catch (const Error& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return kMathFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMathFailure;
    }
    return kInputFailure;
}
