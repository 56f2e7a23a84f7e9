#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "circlepat/configurations.hpp"
#include "circlepat/deform.hpp"
#include "circlepat/errors.hpp"
#include "circlepat/hypgeo.hpp"
#include "circlepat/io.hpp"
#include "circlepat/layout.hpp"
#include "circlepat/solver.hpp"
#include "circlepat/surface.hpp"
#include "circlepat/verify.hpp"

namespace py = pybind11;
using namespace circlepat;

PYBIND11_MODULE(circlepat, m) {
    m.doc() = "Hyperbolic circle patterns on closed surfaces";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<IOError>(m, "IOError", error.ptr());
    py::register_exception<InvalidSurface>(m, "InvalidSurface", error.ptr());
    py::register_exception<ConditionNotMet>(m, "ConditionNotMet", error.ptr());
    py::register_exception<NonConvergence>(m, "NonConvergence", error.ptr());
    py::register_exception<DegenerationDetected>(m, "DegenerationDetected", error.ptr());
    py::register_exception<RangeError>(m, "RangeError", error.ptr());
    py::register_exception<WeightOutOfRange>(m, "WeightOutOfRange", error.ptr());

    // geometry
    py::class_<DiskAutomorphism>(m, "DiskAutomorphism")
        .def(py::init<std::complex<double>, double>(), py::arg("a"), py::arg("phi"))
        .def_property_readonly("a", &DiskAutomorphism::a)
        .def_property_readonly("phi", &DiskAutomorphism::phi)
        .def("__call__", &DiskAutomorphism::operator())
        .def("compose", &DiskAutomorphism::compose)
        .def("inverse", &DiskAutomorphism::inverse);
    m.def("hyp_distance", &hyp_distance);
    m.def("schwarz_quotient", py::overload_cast<const DiskAutomorphism&, DiskPoint>(&schwarz_quotient));

    m.def(
        "three_circle_angles",
        [](std::array<double, 3> r, std::array<double, 3> theta) {
            return three_circle_angles({r, theta}).angle;
        },
        py::arg("r"), py::arg("theta"));
    m.def(
        "two_circle_angles",
        [](double r_i, double r_j, double theta) {
            const auto a = two_circle_angles({r_i, r_j, theta});
            return std::array<double, 2>{a.at_i, a.at_j};
        },
        py::arg("r_i"), py::arg("r_j"), py::arg("theta"));
    m.def("edge_length", &edge_length);

    // surfaces
    py::class_<CellularSurface>(m, "CellularSurface")
        .def_property_readonly("name", &CellularSurface::name)
        .def_property_readonly("num_vertices", &CellularSurface::num_vertices)
        .def_property_readonly("num_edges", &CellularSurface::num_edges)
        .def_property_readonly("num_faces", &CellularSurface::num_faces)
        .def_property_readonly("vertex_ids", &CellularSurface::vertex_ids)
        .def("euler_characteristic", &CellularSurface::euler_characteristic)
        .def("genus", &CellularSurface::genus)
        .def("is_triangulation", &CellularSurface::is_triangulation);

    py::class_<SurfaceFile>(m, "SurfaceFile")
        .def_readonly("surface", &SurfaceFile::surface)
        .def_readonly("weights", &SurfaceFile::weights);
    m.def("load_surface", &load_surface);
    m.def("parse_surface", &parse_surface_text);
    m.def("serialize_surface", &serialize_surface);
    m.def("parse_angle", &parse_angle);

    py::class_<ConditionReport>(m, "ConditionReport")
        .def_property_readonly("passed", &ConditionReport::pass)
        .def_readonly("partial", &ConditionReport::partial)
        .def_readonly("subsets_checked", &ConditionReport::subsets_checked)
        .def("__str__", [](const ConditionReport& r) { return format_report(r); });
    m.def("validate", &validate, py::arg("surface"), py::arg("require_triangulation") = false);
    m.def("check_origin_in_Y", &check_origin_in_Y, py::arg("surface"), py::arg("weights"),
          py::arg("subset_bound") = kDefaultSubsetBound);
    m.def("check_thurston", &check_thurston);
    m.def("check_ideal", &check_ideal, py::arg("surface"), py::arg("weights"),
          py::arg("subset_bound") = kDefaultSubsetBound);

    // solver
    py::class_<PatternSolution>(m, "PatternSolution")
        .def_readonly("radii", &PatternSolution::radii)
        .def_readonly("curvature", &PatternSolution::curvature)
        .def_readonly("residual", &PatternSolution::residual)
        .def_readonly("corner_angles", &PatternSolution::corner_angles)
        .def_readonly("iterations", &PatternSolution::iterations)
        .def_readonly("history", &PatternSolution::history);
    auto solve_with = [](auto fn) {
        return [fn](const CellularSurface& s, const EdgeWeights& w, double tol, int max_iter,
                    std::vector<double> init, bool check) {
            SolveOptions o;
            o.tol = tol;
            o.max_iter = max_iter;
            o.init_radii = std::move(init);
            o.check_conditions = check;
            return fn(s, w, o);
        };
    };
    m.def("solve", solve_with(&solve), py::arg("surface"), py::arg("weights"), py::arg("tol") = 1e-10,
          py::arg("max_iter") = 200, py::arg("init_radii") = std::vector<double>{}, py::arg("check_conditions") = true);
    m.def("solve_ideal", solve_with(&solve_ideal), py::arg("surface"), py::arg("weights"), py::arg("tol") = 1e-10,
          py::arg("max_iter") = 200, py::arg("init_radii") = std::vector<double>{}, py::arg("check_conditions") = true);
    m.def("curvature", &curvature);

    // layout
    py::class_<DiskLayout>(m, "DiskLayout")
        .def_readonly("holonomy_residual", &DiskLayout::holonomy_residual)
        .def_property_readonly("num_faces", [](const DiskLayout& l) { return l.faces.size(); })
        .def_property_readonly("num_circles", [](const DiskLayout& l) { return l.circles.size(); });
    m.def(
        "develop",
        [](const CellularSurface& s, const EdgeWeights& w, const PatternSolution& sol, int root_face) {
            DevelopOptions o;
            o.root_face = root_face;
            return develop(s, w, sol, o);
        },
        py::arg("surface"), py::arg("weights"), py::arg("solution"), py::arg("root_face") = 0);
    m.def("max_angle_deviation", [](const DiskLayout& l) { return verify_intersection_angles(l).max_deviation; });
    m.def("swallowed_lenses", [](const DiskLayout& l) { return verify_primitive_contact(l).swallowed; });
    m.def("ideal_incidence_spread", [](const DiskLayout& l) { return verify_ideal_incidence(l).max_spread; });
    m.def(
        "emit_svg",
        [](const DiskLayout& l, const CellularSurface& s, bool labels, bool shade) {
            return emit_svg(l, &s, {labels, shade, false});
        },
        py::arg("layout"), py::arg("surface"), py::arg("labels") = false, py::arg("shade") = false);

    // deformation
    py::class_<InterstitialProxy>(m, "InterstitialProxy")
        .def_readonly("face_id", &InterstitialProxy::face_id)
        .def_readonly("corners", &InterstitialProxy::corners)
        .def_readonly("cross_ratio", &InterstitialProxy::cross_ratio);
    py::class_<RefinementRow>(m, "RefinementRow")
        .def_readonly("n", &RefinementRow::n)
        .def_readonly("vertices", &RefinementRow::vertices)
        .def_readonly("radii", &RefinementRow::radii)
        .def_readonly("min_radius", &RefinementRow::min_radius)
        .def_readonly("radius_difference", &RefinementRow::radius_difference)
        .def_readonly("proxies", &RefinementRow::proxies);
    py::class_<RefinementReport>(m, "RefinementReport")
        .def_readonly("rows", &RefinementReport::rows)
        .def_readonly("strictly_decreasing", &RefinementReport::strictly_decreasing)
        .def_readonly("within_slack", &RefinementReport::within_slack)
        .def("__str__", &RefinementReport::format);
    auto to_regions = [](const std::map<int, std::vector<std::complex<double>>>& in) {
        std::map<int, PlanarRegion> out;
        for (const auto& [id, corners] : in) out[id] = PlanarRegion{corners};
        return out;
    };
    m.def(
        "refinement_experiment",
        [to_regions](const CellularSurface& s, const EdgeWeights& w,
                     const std::map<int, std::vector<std::complex<double>>>& regions, const std::vector<int>& ns) {
            return refinement_experiment(s, w, to_regions(regions), ns);
        },
        py::arg("surface"), py::arg("weights"), py::arg("regions"), py::arg("n_list"));

    m.def(
        "run_verify",
        [](const std::string& suite, int trials, std::uint64_t seed, const CellularSurface& tri,
           const CellularSurface& ideal, const EdgeWeights& ideal_weights) {
            VerifyOptions o;
            o.suite = suite;
            o.trials = trials;
            o.seed = seed;
            const auto rep = run_verify(o, {tri, ideal, ideal_weights});
            return py::make_tuple(rep.pass(), rep.format(o));
        },
        py::arg("suite"), py::arg("trials"), py::arg("seed"), py::arg("triangulation"), py::arg("ideal"),
        py::arg("ideal_weights"));
}
