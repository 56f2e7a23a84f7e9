#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "circlepat/configurations.hpp"
#include "circlepat/errors.hpp"
#include "circlepat/io.hpp"
#include "circlepat/layout.hpp"
#include "circlepat/solver.hpp"

using namespace circlepat;
using cd = std::complex<double>;

namespace {

SurfaceFile bundled(const std::string& name) { return load_surface(std::string(CIRCLEPAT_DATA_DIR) + "/" + name + ".surf"); }

std::string golden(const std::string& name) { return read_file(std::string(CIRCLEPAT_GOLDEN_DIR) + "/" + name); }

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("circle intersections and exterior angles") {
    // unit circles at distance sqrt(2) are orthogonal
    const EuclideanCircle a{0.0, 1.0}, b{cd(std::sqrt(2.0), 0.0), 1.0};
    CHECK(euclidean_exterior_angle(a, b) == doctest::Approx(kPi / 2.0).epsilon(1e-14));
    const auto pts = circle_intersections(a, b);
    REQUIRE(pts.size() == 2);
    for (const auto& p : pts) {
        CHECK(std::abs(std::abs(p - a.center) - 1.0) < 1e-14);
        CHECK(std::abs(std::abs(p - b.center) - 1.0) < 1e-14);
    }
    const EuclideanCircle touching{cd(2.0, 0.0), 1.0};
    CHECK(euclidean_exterior_angle(a, touching) == doctest::Approx(0.0).scale(1.0));
    const auto t = circle_intersections(a, touching);
    REQUIRE(t.size() == 2);
    CHECK(std::abs(t[0] - cd(1.0, 0.0)) < 1e-15);
    CHECK(circle_intersections(a, {cd(3.0, 0.0), 0.5}).empty());
}

TEST_CASE("developed triangulation is coherent") {
    const auto f = bundled("genus2_tri12");
    const auto sol = solve(f.surface, f.weights);
    const auto lay = develop(f.surface, f.weights, sol);
    CHECK(lay.holonomy_residual <= 1e-10);
    CHECK(lay.edge_length_defect <= 1e-12);
    int domain = 0;
    for (const auto& pf : lay.faces) domain += !pf.collar;
    CHECK(domain == f.surface.num_faces());
    CHECK(lay.tree.size() == static_cast<std::size_t>(f.surface.num_faces() - 1));
    const auto angles = verify_intersection_angles(lay);
    CHECK(angles.pass());
    CHECK(angles.max_deviation <= 1e-8);
    CHECK(verify_primitive_contact(lay).pass());

    // Root face in its local frame: first corner at the origin, second on the positive axis.
    const auto& root = lay.faces.front();
    CHECK(std::abs(root.centers[0]) < 1e-15);
    CHECK(std::abs(root.centers[1].imag()) < 1e-15);
    CHECK(root.centers[1].real() > 0.0);
    // Every placed face realizes the edge lengths between its centers.
    for (const auto& pf : lay.faces)
        for (int p = 0; p < 3; ++p) {
            const int a = pf.vertices[p], b = pf.vertices[(p + 1) % 3];
            const int e = f.surface.face(pf.face).boundary[p].edge;
            const double l = edge_length(sol.radii[a], sol.radii[b], f.weights[e]);
            CHECK(hyp_distance(pf.centers[p], pf.centers[(p + 1) % 3]) == doctest::Approx(l).epsilon(1e-10));
        }
}

TEST_CASE("ideal layout: circles of a face share a point") {
    const auto f = bundled("genus2_quads8_ideal");
    const auto sol = solve_ideal(f.surface, f.weights);
    const auto lay = develop(f.surface, f.weights, sol);
    CHECK(lay.holonomy_residual <= 1e-7);
    const auto inc = verify_ideal_incidence(lay);
    CHECK(inc.faces == f.surface.num_faces());
    CHECK(inc.pass());
    CHECK(verify_intersection_angles(lay).pass());
    // Each face's ideal point lies on all its circles.
    for (const auto& pf : lay.faces) {
        if (pf.collar) continue;
        for (int c : pf.circles) {
            const auto& hc = lay.circles[c].circle;
            CHECK(hyp_distance(hc.center, pf.ideal_point) == doctest::Approx(hc.radius).epsilon(1e-9));
        }
    }
}

TEST_CASE("a tangency packing has no common points (negative control)") {
    const auto f = bundled("genus2_tri12");
    const auto lay = develop(f.surface, f.weights, solve(f.surface, f.weights));
    CHECK(verify_ideal_incidence(lay).max_spread > 0.1);
}

TEST_CASE("inconsistent radii are refused") {
    const auto f = bundled("genus2_tri12");
    auto radii = solve(f.surface, f.weights).radii;
    radii[0] *= 1.01;
    CHECK_THROWS_AS(develop(f.surface, f.weights, radii, PatternMode::Triangulated), ResidualTooLarge);
    DevelopOptions o;
    o.check_residual = false;
    CHECK(develop(f.surface, f.weights, radii, PatternMode::Triangulated, o).holonomy_residual > 1e-4);
}

TEST_CASE("svg output matches the golden files") {
    const auto f = bundled("genus2_tri12");
    const auto radii = radii_for_surface(load_radii(std::string(CIRCLEPAT_GOLDEN_DIR) + "/genus2_tri12.radii"), f.surface);
    const auto lay = develop(f.surface, f.weights, radii, PatternMode::Triangulated);
    const auto svg = emit_svg(lay, &f.surface, {true, false, false});
    CHECK(svg == golden("genus2_tri12.svg"));
    CHECK(emit_svg(lay, &f.surface, {true, false, false}) == svg);
    std::size_t domain_circles = 0;
    for (const auto& c : lay.circles) domain_circles += !c.collar;
    CHECK(count(svg, "<circle ") == 1 + domain_circles);  // plus the boundary
    CHECK(count(emit_svg(lay, &f.surface, {false, false, true}), "<circle ") == 1 + lay.circles.size());
    CHECK(svg.find("-0 ") == std::string::npos);

    const auto q = bundled("genus2_quads8_ideal");
    const auto rq =
        radii_for_surface(load_radii(std::string(CIRCLEPAT_GOLDEN_DIR) + "/genus2_quads8_ideal.radii"), q.surface);
    const auto lq = develop(q.surface, q.weights, rq, PatternMode::Ideal);
    CHECK(emit_svg(lq, &q.surface, {false, true, false}) == golden("genus2_quads8_ideal.svg"));
}
