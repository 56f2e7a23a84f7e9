#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "circlepat/errors.hpp"
#include "circlepat/hypgeo.hpp"
#include "circlepat/io.hpp"
#include "circlepat/surface.hpp"
#include "brute_force.hpp"

using namespace circlepat;
using namespace circlepat::testing;

namespace {

SurfaceFile bundled(const std::string& name) { return load_surface(std::string(CIRCLEPAT_DATA_DIR) + "/" + name + ".surf"); }

}  // namespace

TEST_CASE("bundled surfaces are valid genus-2 surfaces") {
    for (const char* name : {"genus2_tri12", "genus2_quads8", "genus2_quads8_ideal", "genus2_one_quad"}) {
        const auto f = bundled(name);
        const auto r = validate(f.surface);
        CHECK_MESSAGE(r.pass(), name);
        CHECK(f.surface.euler_characteristic() == -2);
        CHECK(f.surface.genus() == 2);
    }
    const auto tri = bundled("genus2_tri12").surface;
    CHECK(tri.is_triangulation());
    CHECK(tri.num_vertices() == 12);
    CHECK(2 * tri.num_edges() == 3 * tri.num_faces());
    CHECK_FALSE(bundled("genus2_one_quad").surface.is_triangulation());
    CHECK(surface_stats(bundled("genus2_quads8").surface).deformation_dof == 10);
    for (int v = 0; v < tri.num_vertices(); ++v) {
        const auto rot = tri.rotation(v);
        CHECK(rot.size() == tri.vertex_corners(v).size());
        CHECK(rot.size() == tri.vertex_edges(v).size());
    }
}

TEST_CASE("validation reports structural problems") {
    const std::string torus_like =
        "surface t\nvertex 0\nvertex 1\nvertex 2\nedge 0 : 0 1\nedge 1 : 1 2\nedge 2 : 2 0\n"
        "face 0 : +0 +1 +2\nface 1 : -2 -1 -0\n";
    const auto sphere = parse_surface_text(torus_like).surface;
    auto r = validate(sphere);
    REQUIRE_FALSE(r.pass());
    CHECK(r.violations.front().kind == "GenusTooSmall");
    CHECK_THROWS_AS(require_valid(sphere), InvalidSurface);

    const std::string loop = "surface l\nvertex 0\nvertex 1\nedge 0 : 0 0\nedge 1 : 0 1\nface 0 : +0 +1 -1\n";
    const auto ls = parse_surface_text(loop).surface;
    r = validate(ls);
    CHECK(r.violations.front().kind == "LoopEdge");

    const std::string once = "surface o\nvertex 0\nvertex 1\nvertex 2\nedge 0 : 0 1\nedge 1 : 1 2\nedge 2 : 2 0\n"
                             "face 0 : +0 +1 +2\n";
    r = validate(parse_surface_text(once).surface);
    bool two_sided = false;
    for (const auto& v : r.violations) two_sided = two_sided || v.kind == "EdgeNotTwoSided";
    CHECK(two_sided);

    const std::string flipped = "surface f\nvertex 0\nvertex 1\nvertex 2\nedge 0 : 0 1\nedge 1 : 1 2\nedge 2 : 2 0\n"
                                "face 0 : +0 +1 +2\nface 1 : +0 +1 +2\n";
    r = validate(parse_surface_text(flipped).surface);
    bool mismatch = false;
    for (const auto& v : r.violations) mismatch = mismatch || v.kind == "OrientationMismatch";
    CHECK(mismatch);
}

TEST_CASE("star closure and link pairs of a single vertex") {
    const auto s = bundled("genus2_tri12").surface;
    for (int v = 0; v < s.num_vertices(); ++v) {
        const auto cl = star_closure(s, {v});
        const int d = static_cast<int>(s.vertex_edges(v).size());
        CHECK(cl.euler == 1);  // open disk
        CHECK(cl.components == 1);
        CHECK(static_cast<int>(link_pairs(s, {v}).size()) == d);
        CHECK(star_inequality_lhs(s, EdgeWeights(s.num_edges(), 0.0), {v}) == doctest::Approx(2.0 * kPi - d * kPi));
    }
    std::vector<int> all(s.num_vertices());
    std::iota(all.begin(), all.end(), 0);
    CHECK(star_closure(s, all).euler == -2);
    CHECK(link_pairs(s, all).empty());
}

TEST_CASE("origin-in-Y checker matches brute force on every subset") {
    const auto s = bundled("genus2_tri12").surface;
    std::mt19937_64 rng(17);
    int with_violations = 0;
    for (int t = 0; t < 6; ++t) {
        // near pi on the later trials so that star inequalities fail too
        std::uniform_real_distribution<double> u(t < 2 ? 0.0 : 1.0 + 0.2 * t, t < 2 ? 1.0 : 3.1);
        EdgeWeights w(s.num_edges());
        for (auto& x : w) x = u(rng);
        const auto rep = check_origin_in_Y(s, w);
        const auto brute = brute_force(s, w);
        CHECK_FALSE(rep.partial);
        CHECK(rep.subsets_checked == brute.connected);
        CHECK(library_violations(rep, "StarInequality") == brute.violating);
        if (!brute.violating.empty()) ++with_violations;
    }
    CHECK(with_violations > 0);  // the comparison exercised non-empty sets
}

TEST_CASE("pseudo-Jordan checker matches brute force on a quadrilateral surface") {
    const auto f = bundled("genus2_quads8");
    std::mt19937_64 rng(23);
    for (int t = 0; t < 4; ++t) {
        std::uniform_real_distribution<double> u(0.0, 2.0 + 0.3 * t);
        EdgeWeights w(f.surface.num_edges());
        for (auto& x : w) x = u(rng);
        const auto rep = check_pseudo_jordan(f.surface, w);
        CHECK(library_violations(rep, "StarInequality") == brute_force(f.surface, w).violating);
    }
}

TEST_CASE("partial enumeration counts connected subsets up to the bound") {
    const auto s = bundled("genus2_tri12").surface;
    const EdgeWeights w(s.num_edges(), 0.0);
    for (int k : {1, 2, 3, 4}) {
        std::size_t count = 0;
        std::set<std::vector<int>> seen;
        const bool exhaustive = for_each_connected_subset(s, k, [&](const std::vector<int>& sub) {
            ++count;
            auto sorted = sub;
            std::sort(sorted.begin(), sorted.end());
            seen.insert(sorted);
        });
        CHECK_FALSE(exhaustive);
        CHECK(seen.size() == count);  // no duplicates
        CHECK(count == brute_force(s, w, k).connected);
    }
}

TEST_CASE("face admissibility and the Thurston checker") {
    const auto s = bundled("genus2_tri12").surface;
    EdgeWeights w(s.num_edges(), 0.0);
    for (const auto& u : s.face(0).boundary) w[u.edge] = 1.2;
    const auto rep = check_origin_in_Y(s, w);
    REQUIRE_FALSE(rep.pass());
    CHECK(rep.violations.front().kind == "FaceAdmissibility");
    CHECK(check_thurston(s, EdgeWeights(s.num_edges(), kPi / 3.0 - 0.01)).pass());
    CHECK_FALSE(check_thurston(s, EdgeWeights(s.num_edges(), kPi / 3.0)).pass());
    CHECK(check_thurston(s, EdgeWeights(s.num_edges(), kPi / 2.0)).violations.front().kind == "ThreePath");
    CHECK_THROWS_AS(check_thurston(s, EdgeWeights(s.num_edges(), 2.0)), WeightOutOfRange);
    CHECK_THROWS_AS(check_origin_in_Y(bundled("genus2_quads8").surface, EdgeWeights(20, 0.0)), NotATriangulation);
}

TEST_CASE("ideal checker") {
    const auto f = bundled("genus2_quads8_ideal");
    const auto rep = check_ideal(f.surface, f.weights);
    CHECK(rep.pass());
    CHECK(rep.subsets_checked == 251);
    auto w = f.weights;
    w[0] += 0.01;
    const auto broken = check_ideal(f.surface, w);
    REQUIRE_FALSE(broken.pass());
    std::set<std::string> faces;
    for (const auto& v : broken.violations)
        if (v.kind == "H1") faces.insert(v.witness.substr(0, v.witness.find(" edges")));
    const auto& uses = f.surface.edge_uses(0);
    std::set<std::string> expect;
    for (const auto& c : uses) expect.insert("face " + std::to_string(f.surface.face(c.face).id));
    CHECK(faces == expect);
}
