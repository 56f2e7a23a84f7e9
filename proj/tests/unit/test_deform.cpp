#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "circlepat/configurations.hpp"
#include "circlepat/deform.hpp"
#include "circlepat/errors.hpp"
#include "circlepat/hypgeo.hpp"
#include "circlepat/io.hpp"
#include "circlepat/solver.hpp"

using namespace circlepat;
using cd = std::complex<double>;

namespace {

SurfaceFile bundled(const std::string& name) { return load_surface(std::string(CIRCLEPAT_DATA_DIR) + "/" + name + ".surf"); }

const PlanarRegion kSquare{{cd(-1, -1), cd(1, -1), cd(1, 1), cd(-1, 1)}};
const PlanarRegion kTriangle{{cd(-1.5, -1), cd(1.5, -1), cd(0, 1.6)}};

// Winding number test plus distance to the edges: does the closed disk of
// radius rho around p meet the polygon?
bool disk_meets(const std::vector<cd>& poly, cd p, double rho) {
    double winding = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        const cd a = poly[k] - p, b = poly[(k + 1) % poly.size()] - p;
        winding += std::arg(b / a);
        const cd ab = poly[(k + 1) % poly.size()] - poly[k];
        double t = ((p - poly[k]) * std::conj(ab)).real() / std::norm(ab);
        t = std::min(1.0, std::max(0.0, t));
        if (std::abs(p - (poly[k] + t * ab)) <= rho * (1.0 + 1e-12)) return true;
    }
    return std::abs(winding) > kPi;
}

// Lattice coordinates of the disks of the cookie packing, built from scratch.
std::set<std::pair<int, int>> expected_disks(const PlanarRegion& region, int n) {
    const auto& c = region.corners;
    double area = 0.0;
    cd acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const cd a = c[i], b = c[(i + 1) % c.size()];
        const double cr = (std::conj(a) * b).imag();
        area += cr;
        acc += (a + b) * cr;
    }
    const cd origin = acc / (3.0 * area);
    auto center = [&](int i, int j) { return origin + (2.0 / n) * (cd(i, 0) + cd(0.5 * j, std::sqrt(3.0) / 2.0 * j)); };
    std::set<std::pair<int, int>> meets;
    for (int i = -8 * n; i <= 8 * n; ++i)
        for (int j = -8 * n; j <= 8 * n; ++j)
            if (disk_meets(c, center(i, j), 1.0 / n)) meets.insert({i, j});
    std::set<std::pair<int, int>> out;
    for (const auto& [i, j] : meets)
        for (const auto& tri : {std::array<std::pair<int, int>, 3>{{{i, j}, {i + 1, j}, {i, j + 1}}},
                                std::array<std::pair<int, int>, 3>{{{i + 1, j}, {i, j + 1}, {i + 1, j + 1}}}}) {
            bool all = true;
            for (const auto& q : tri) all = all && meets.count(q);
            if (all)
                for (const auto& q : tri) out.insert(q);
        }
    return out;
}

}  // namespace

TEST_CASE("cookie cutter keeps exactly the disks of full lattice triangles") {
    for (const auto* region : {&kSquare, &kTriangle})
        for (int n : {4, 8, 12}) {
            const auto pk = cookie_cutter(*region, n);
            const std::set<std::pair<int, int>> got(pk.lattice.begin(), pk.lattice.end());
            CHECK(got == expected_disks(*region, n));
            CHECK(pk.disk_radius == 1.0 / n);
            // packing: disjoint interiors, edges are tangencies
            for (std::size_t a = 0; a < pk.centers.size(); ++a)
                for (std::size_t b = a + 1; b < pk.centers.size(); ++b)
                    CHECK(std::abs(pk.centers[a] - pk.centers[b]) >= 2.0 / n - 1e-12);
            for (const auto& [a, b] : pk.edges) CHECK(std::abs(pk.centers[a] - pk.centers[b]) == doctest::Approx(2.0 / n));
            // boundary is a closed cycle of adjacent disks
            std::set<std::pair<int, int>> es(pk.edges.begin(), pk.edges.end());
            for (std::size_t k = 0; k < pk.boundary.size(); ++k) {
                int a = pk.boundary[k], b = pk.boundary[(k + 1) % pk.boundary.size()];
                if (a > b) std::swap(a, b);
                CHECK(es.count({a, b}) == 1);
            }
            CHECK(pk.interior_disks == static_cast<int>(pk.centers.size() - pk.boundary.size()));
            // corner disks: the boundary disk nearest each corner
            REQUIRE(pk.corner_disk.size() == region->corners.size());
            for (std::size_t c = 0; c < region->corners.size(); ++c) {
                int best = 0;
                for (std::size_t k = 1; k < pk.boundary.size(); ++k)
                    if (std::abs(pk.centers[pk.boundary[k]] - region->corners[c]) <
                        std::abs(pk.centers[pk.boundary[best]] - region->corners[c]))
                        best = static_cast<int>(k);
                CHECK(pk.corner_disk[c] == best);
            }
        }
    CHECK_THROWS_AS(cookie_cutter(kSquare, 1), RangeError);
    CHECK_THROWS_AS(cookie_cutter(kSquare, 65), RangeError);
}

TEST_CASE("gluing extends weights and keeps the genus") {
    const auto f = bundled("genus2_one_quad");
    const auto pk = cookie_cutter(kSquare, 4);
    const auto g = glue(f.surface, f.weights, {{0, pk}});
    CHECK(validate(g.surface, true).pass());
    CHECK(g.surface.genus() == 2);
    CHECK(g.original_vertices == f.surface.num_vertices());
    CHECK(g.surface.num_vertices() == f.surface.num_vertices() + static_cast<int>(pk.centers.size()));
    CHECK(g.provenance.size() == pk.centers.size());
    for (int e = 0; e < g.surface.num_edges(); ++e) {
        if (e < g.original_edges)
            CHECK(g.weights[e] == f.weights[e]);
        else
            CHECK(g.weights[e] == 0.0);
    }
    CHECK(g.original_faces_kept == f.surface.num_faces() - 1);
    CHECK(g.corner_faces.at(0).size() == 4);
}

TEST_CASE("deformation of the quadrilateral face") {
    const auto f = bundled("genus2_one_quad");
    const std::map<int, PlanarRegion> regions{{0, kSquare}};
    const auto r4 = deform_solve(f.surface, f.weights, regions, 4);
    CHECK(r4.full.residual <= 1e-10);
    CHECK(r4.restricted.radii.size() == static_cast<std::size_t>(f.surface.num_vertices()));
    CHECK(r4.min_radius > u_to_radius(-30.0) * 1e3);
    REQUIRE(r4.proxies.size() == 1);
    const auto& px = r4.proxies[0];
    CHECK(std::abs(px.corners[0]) < 1e-12);
    CHECK(std::abs(px.corners[1].imag()) < 1e-12);
    CHECK(px.corners[1].real() > 0.0);
    CHECK(px.has_cross_ratio);
    // cross-ratio recomputed from the normalized corners
    const auto& z = px.corners;
    const cd cr = (z[0] - z[2]) * (z[1] - z[3]) / ((z[0] - z[3]) * (z[1] - z[2]));
    CHECK(std::abs(cr - px.cross_ratio) < 1e-12);

    const auto r8 = deform_solve(f.surface, f.weights, regions, 8);
    double diff = 0.0;
    for (std::size_t v = 0; v < r4.restricted.radii.size(); ++v)
        diff = std::max(diff, std::abs(r4.restricted.radii[v] - r8.restricted.radii[v]));
    CHECK(diff > 1e-6);  // n-dependent before the limit
}

TEST_CASE("triangular faces have no deformation freedom") {
    const auto f = bundled("genus2_tri12");
    const auto direct = solve(f.surface, f.weights);
    std::map<int, PlanarRegion> regions;
    for (int id : {0, 5, 10}) regions[id] = kTriangle;
    for (int n : {4, 8}) {
        const auto r = deform_solve(f.surface, f.weights, regions, n);
        for (std::size_t v = 0; v < direct.radii.size(); ++v)
            CHECK(std::abs(r.restricted.radii[v] - direct.radii[v]) <= 10 * 1e-10);
    }
}

TEST_CASE("refinement report") {
    const auto f = bundled("genus2_one_quad");
    const auto rep = refinement_experiment(f.surface, f.weights, {{0, kSquare}}, {4, 8, 16});
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].radius_difference < 0.0);
    CHECK(rep.rows[2].radius_difference < rep.rows[1].radius_difference);
    CHECK(rep.strictly_decreasing);
    CHECK(rep.within_slack);
    CHECK(rep.rows[2].proxy_difference < rep.rows[1].proxy_difference);
    const auto again = refinement_experiment(f.surface, f.weights, {{0, kSquare}}, {4, 8, 16});
    CHECK(again.format() == rep.format());
}

TEST_CASE("deformation failures") {
    const auto f = bundled("genus2_one_quad");
    CHECK_THROWS_AS(deform_solve(f.surface, f.weights, {}, 4), RangeError);
    const PlanarRegion tiny{{cd(0, 0), cd(0.3, 0), cd(0.3, 0.3), cd(0, 0.3)}};
    CHECK_THROWS_AS(deform_solve(f.surface, f.weights, {{0, tiny}}, 2), RegionTooSmall);
    // face boundary inequality broken on the input surface
    EdgeWeights bad(f.surface.num_edges(), 0.0);
    for (const auto& u : f.surface.face(0).boundary) bad[u.edge] = 3.0;
    CHECK_THROWS_AS(deform_solve(f.surface, bad, {{0, kSquare}}, 4), ConditionNotMet);
}
