#include "circlepat/deform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <set>
#include <sstream>

#include "circlepat/configurations.hpp"
#include "circlepat/errors.hpp"
#include "circlepat/hypgeo.hpp"
#include "circlepat/io.hpp"
#include "circlepat/layout.hpp"

namespace circlepat {

namespace {

using Point = std::complex<double>;

double segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double t = std::clamp(((p - a) * std::conj(ab)).real() / std::norm(ab), 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

bool inside_polygon(const std::vector<Point>& poly, Point q) {
    bool in = false;
    const std::size_t m = poly.size();
    for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
        const auto a = poly[i];
        const auto b = poly[j];
        if ((a.imag() > q.imag()) != (b.imag() > q.imag())) {
            const double x = (b.real() - a.real()) * (q.imag() - a.imag()) / (b.imag() - a.imag()) + a.real();
            if (q.real() < x) in = !in;
        }
    }
    return in;
}

Point area_centroid(const std::vector<Point>& c) {
    double area = 0.0;
    Point acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto a = c[i];
        const auto b = c[(i + 1) % c.size()];
        const double cr = a.real() * b.imag() - b.real() * a.imag();
        area += cr;
        acc += (a + b) * cr;
    }
    return acc / (3.0 * area);
}

}  // namespace

CookiePacking cookie_cutter(const PlanarRegion& region, int n) {
    if (n < 2 || n > 64) throw RangeError("mesh parameter n must lie in [2, 64]");
    try {
        check_region_polygon(region.corners);
    } catch (const ParseError& e) {
        throw RangeError(e.what());
    }
    const auto& poly = region.corners;
    const int m = static_cast<int>(poly.size());
    CookiePacking pk;
    pk.n = n;
    pk.disk_radius = 1.0 / n;
    const double h = 2.0 / n;
    const double rho = pk.disk_radius;
    const double row = h * std::sqrt(3.0) / 2.0;
    const Point origin = area_centroid(poly);

    double xmin = poly[0].real(), xmax = xmin, ymin = poly[0].imag(), ymax = ymin;
    for (const auto& c : poly) {
        xmin = std::min(xmin, c.real());
        xmax = std::max(xmax, c.real());
        ymin = std::min(ymin, c.imag());
        ymax = std::max(ymax, c.imag());
    }
    auto lattice_point = [&](int i, int j) { return origin + Point(h * (i + 0.5 * j), row * j); };
    auto meets = [&](Point p) {
        if (inside_polygon(poly, p)) return true;
        for (int k = 0; k < m; ++k)
            if (segment_distance(p, poly[k], poly[(k + 1) % m]) <= rho * (1.0 + 1e-12)) return true;
        return false;
    };

    std::map<std::pair<int, int>, int> index;
    std::vector<std::pair<int, int>> cand;
    const int jlo = static_cast<int>(std::floor((ymin - rho - origin.imag()) / row)) - 1;
    const int jhi = static_cast<int>(std::ceil((ymax + rho - origin.imag()) / row)) + 1;
    for (int j = jlo; j <= jhi; ++j) {
        const int ilo = static_cast<int>(std::floor((xmin - rho - origin.real()) / h - 0.5 * j)) - 1;
        const int ihi = static_cast<int>(std::ceil((xmax + rho - origin.real()) / h - 0.5 * j)) + 1;
        for (int i = ilo; i <= ihi; ++i)
            if (meets(lattice_point(i, j))) cand.emplace_back(i, j);
    }
    std::set<std::pair<int, int>> kept(cand.begin(), cand.end());

    // Lattice triangles with all three disks kept; disks outside every
    // triangle are dropped (they would hang off the packing by an edge).
    std::vector<std::array<std::pair<int, int>, 3>> tris;
    for (const auto& [i, j] : cand) {
        const std::array<std::pair<int, int>, 3> up{{{i, j}, {i + 1, j}, {i, j + 1}}};
        const std::array<std::pair<int, int>, 3> down{{{i, j}, {i, j + 1}, {i - 1, j + 1}}};
        for (const auto& t : {up, down})
            if (kept.count(t[1]) && kept.count(t[2])) tris.push_back(t);
    }
    std::set<std::pair<int, int>> used;
    for (const auto& t : tris)
        for (const auto& p : t) used.insert(p);
    for (const auto& p : cand)
        if (used.count(p)) {
            index[p] = static_cast<int>(pk.centers.size());
            pk.centers.push_back(lattice_point(p.first, p.second));
            pk.lattice.push_back(p);
        }
    const int nd = static_cast<int>(pk.centers.size());
    if (nd == 0) throw RegionTooSmall("no lattice triangle meets the region");

    std::set<std::pair<int, int>> directed;
    std::set<std::pair<int, int>> undirected;
    for (const auto& t : tris) {
        std::array<int, 3> tri{index[t[0]], index[t[1]], index[t[2]]};
        pk.triangles.push_back(tri);
        for (int k = 0; k < 3; ++k) {
            const int a = tri[k];
            const int b = tri[(k + 1) % 3];
            directed.insert({a, b});
            undirected.insert({std::min(a, b), std::max(a, b)});
        }
    }
    pk.edges.assign(undirected.begin(), undirected.end());

    std::map<int, int> next;
    for (const auto& [a, b] : directed) {
        if (directed.count({b, a})) continue;
        if (!next.emplace(a, b).second) throw RegionTooSmall("cookie packing boundary is pinched");
    }
    if (next.empty()) throw RegionTooSmall("cookie packing has no boundary");
    int start = next.begin()->first;
    int cur = start;
    do {
        pk.boundary.push_back(cur);
        cur = next.at(cur);
        if (pk.boundary.size() > next.size()) throw RegionTooSmall("cookie packing boundary does not close");
    } while (cur != start);
    if (pk.boundary.size() != next.size()) throw RegionTooSmall("cookie packing boundary has several components");
    pk.interior_disks = nd - static_cast<int>(pk.boundary.size());
    if (pk.interior_disks < m) {
        std::ostringstream os;
        os << "only " << pk.interior_disks << " interior disks for a " << m << "-sided region at n = " << n;
        throw RegionTooSmall(os.str());
    }

    // One corner disk per polygon corner: the boundary disk nearest to it.
    const int nb = static_cast<int>(pk.boundary.size());
    pk.corner_disk.assign(m, -1);
    for (int c = 0; c < m; ++c) {
        double best = 0.0;
        for (int p = 0; p < nb; ++p) {
            const double d = std::abs(pk.centers[pk.boundary[p]] - poly[c]);
            if (pk.corner_disk[c] < 0 || d < best) {
                best = d;
                pk.corner_disk[c] = p;
            }
        }
    }
    int descents = 0;
    for (int c = 0; c < m; ++c) {
        const int a = pk.corner_disk[c];
        const int b = pk.corner_disk[(c + 1) % m];
        if (a == b) throw GluingNotTriangular("corners " + std::to_string(c) + " and " + std::to_string((c + 1) % m) +
                                              " share a corner disk");
        if (b < a) ++descents;
    }
    if (descents != 1) throw GluingNotTriangular("corner disks are not in counterclockwise order");
    pk.side.assign(nb, -1);
    pk.corner_side.assign(nb, -1);
    for (int c = 0; c < m; ++c) {
        const int from = pk.corner_disk[c];
        const int to = pk.corner_disk[(c + 1) % m];
        for (int p = from; p != to; p = (p + 1) % nb) pk.side[p] = c;
        pk.corner_side[from] = (c + m - 1) % m;
    }
    return pk;
}

GluedProblem glue(const CellularSurface& s, const EdgeWeights& w,
                  const std::vector<std::pair<int, CookiePacking>>& packings) {
    GluedProblem out;
    out.original_vertices = s.num_vertices();
    out.original_edges = s.num_edges();

    std::vector<int> vertex_ids = s.vertex_ids();
    std::vector<Edge> edges = s.edges();
    EdgeWeights weights = w;
    int next_vid = vertex_ids.empty() ? 0 : *std::max_element(vertex_ids.begin(), vertex_ids.end()) + 1;
    int next_eid = 0;
    for (const auto& e : edges) next_eid = std::max(next_eid, e.id + 1);
    int next_fid = 0;
    for (const auto& f : s.faces()) next_fid = std::max(next_fid, f.id + 1);

    std::set<int> glued_faces;
    for (const auto& [fid, pk] : packings) {
        const int f = s.face_index(fid);
        if (f < 0) throw GluingNotTriangular("unknown face " + std::to_string(fid));
        if (!glued_faces.insert(f).second) throw GluingNotTriangular("face " + std::to_string(fid) + " glued twice");
        if (static_cast<int>(pk.corner_disk.size()) != s.face_size(f))
            throw GluingNotTriangular("region for face " + std::to_string(fid) + " has " +
                                      std::to_string(pk.corner_disk.size()) + " corners, face has " +
                                      std::to_string(s.face_size(f)));
    }
    std::vector<Face> faces;
    for (int f = 0; f < s.num_faces(); ++f)
        if (!glued_faces.count(f)) faces.push_back(s.face(f));
    out.original_faces_kept = static_cast<int>(faces.size());

    auto add_edge = [&](int a, int b) {
        edges.push_back({next_eid++, a, b});
        weights.push_back(0.0);
        return static_cast<int>(edges.size()) - 1;
    };
    auto use = [&](int e, int from) { return EdgeUse{e, edges[e].v0 == from}; };
    auto add_face = [&](std::vector<EdgeUse> b, int host) {
        faces.push_back({next_fid++, std::move(b)});
        out.face_host.push_back(host);
        return static_cast<int>(faces.size()) - 1;
    };

    for (const auto& [fid, pk] : packings) {
        const int f = s.face_index(fid);
        const auto fv = s.face_vertices(f);
        const int m = static_cast<int>(fv.size());
        const int base = static_cast<int>(vertex_ids.size());
        for (std::size_t d = 0; d < pk.centers.size(); ++d) {
            vertex_ids.push_back(next_vid++);
            out.provenance.push_back({fid, pk.lattice[d].first, pk.lattice[d].second});
        }
        std::map<std::pair<int, int>, int> lattice_edge;
        for (const auto& [a, b] : pk.edges) lattice_edge[{a, b}] = add_edge(base + a, base + b);
        auto packing_use = [&](int a, int b) {
            return use(lattice_edge.at({std::min(a, b), std::max(a, b)}), base + a);
        };
        const int nb = static_cast<int>(pk.boundary.size());
        // attach[p] : side index -> edge joining boundary disk p to that side's vertex
        std::vector<std::map<int, int>> attach(nb);
        for (int p = 0; p < nb; ++p) {
            attach[p][pk.side[p]] = add_edge(fv[pk.side[p]], base + pk.boundary[p]);
            if (pk.corner_side[p] >= 0)
                attach[p][pk.corner_side[p]] = add_edge(fv[pk.corner_side[p]], base + pk.boundary[p]);
        }
        for (const auto& t : pk.triangles)
            add_face({packing_use(t[0], t[1]), packing_use(t[1], t[2]), packing_use(t[2], t[0])}, fid);
        for (int p = 0; p < nb; ++p) {
            const int q = (p + 1) % nb;
            std::vector<int> common;
            for (const auto& [side, e] : attach[p])
                if (attach[q].count(side)) common.push_back(side);
            if (common.size() != 1) {
                std::ostringstream os;
                os << "face " << fid << ": boundary disks at positions " << p << " and " << q << " share "
                   << common.size() << " sides";
                throw GluingNotTriangular(os.str());
            }
            const int side = common[0];
            const int bp = base + pk.boundary[p];
            const int v = fv[side];
            add_face({packing_use(pk.boundary[q], pk.boundary[p]), use(attach[p][side], bp), use(attach[q][side], v)},
                     fid);
        }
        auto& corners = out.corner_faces[fid];
        for (int c = 0; c < m; ++c) {
            const int p = pk.corner_disk[c];
            const int prev = (c + m - 1) % m;
            const int kappa = base + pk.boundary[p];
            const EdgeUse original = s.face(f).boundary[prev];
            corners.push_back(
                add_face({original, use(attach[p][c], fv[c]), use(attach[p][prev], kappa)}, fid));
        }
    }

    out.weights = weights;
    out.surface = CellularSurface(s.name() + "_glued", std::move(vertex_ids), std::move(edges), std::move(faces));
    return out;
}

namespace {

std::string host_faces(const GluedProblem& g, const std::vector<int>& vertices) {
    std::set<int> hosts;
    std::set<int> originals;
    for (int v : vertices) {
        if (v < g.original_vertices)
            originals.insert(g.surface.vertex_id(v));
        else
            hosts.insert(g.provenance[v - g.original_vertices].face_id);
    }
    std::ostringstream os;
    if (!hosts.empty()) {
        os << "auxiliary disks in region of face";
        for (int h : hosts) os << " " << h;
    }
    if (!originals.empty()) {
        if (!hosts.empty()) os << "; ";
        os << "original vertices";
        for (int v : originals) os << " " << v;
    }
    return os.str();
}

std::vector<InterstitialProxy> interstice_proxies(const GluedProblem& g, const PatternSolution& sol) {
    std::vector<InterstitialProxy> out;
    const auto& s = g.surface;
    for (const auto& [fid, corner_faces] : g.corner_faces) {
        DevelopOptions dopts;
        dopts.check_residual = false;
        dopts.collar = false;
        dopts.face_mask.assign(s.num_faces(), 0);
        for (int f = g.original_faces_kept; f < s.num_faces(); ++f)
            if (g.face_host[f - g.original_faces_kept] == fid) dopts.face_mask[f] = 1;
        dopts.root_face = corner_faces.front();
        const auto layout = develop(s, g.weights, sol.radii, PatternMode::Triangulated, dopts);
        std::map<int, int> placed;
        for (int i = 0; i < static_cast<int>(layout.faces.size()); ++i) placed[layout.faces[i].face] = i;

        InterstitialProxy px;
        px.face_id = fid;
        std::vector<Point> corners;
        for (int cf : corner_faces) {
            const auto& pf = layout.faces[placed.at(cf)];
            // Corner triangle (v_{i-1}, v_i, corner disk).
            const auto a = hyp_circle_to_euclidean({pf.centers[0], sol.radii[pf.vertices[0]]});
            const auto b = hyp_circle_to_euclidean({pf.centers[1], sol.radii[pf.vertices[1]]});
            const auto k = hyp_circle_to_euclidean({pf.centers[2], sol.radii[pf.vertices[2]]});
            auto pts = circle_intersections(a, b);
            if (pts.empty()) throw GluingNotTriangular("original circles of face " + std::to_string(fid) + " are apart");
            corners.push_back(std::abs(pts[0] - k.center) <= std::abs(pts[1] - k.center) ? pts[0] : pts[1]);
        }
        const auto to0 = DiskAutomorphism::to_origin(corners[0]);
        const auto norm = DiskAutomorphism::rotation(-std::arg(to0(corners[1]))).compose(to0);
        for (const auto& c : corners) px.corners.push_back(norm(c));
        if (px.corners.size() == 4) {
            const auto& z = px.corners;
            px.has_cross_ratio = true;
            px.cross_ratio = (z[0] - z[2]) * (z[1] - z[3]) / ((z[0] - z[3]) * (z[1] - z[2]));
        }
        out.push_back(std::move(px));
    }
    return out;
}

}  // namespace

DeformResult deform_solve(const CellularSurface& s, const EdgeWeights& w, const std::map<int, PlanarRegion>& regions,
                          int n, const DeformOptions& opts) {
    require_valid(s, false);
    for (int f = 0; f < s.num_faces(); ++f)
        if (s.face_size(f) != 3 && !regions.count(s.face(f).id))
            throw RangeError("face " + std::to_string(s.face(f).id) + " needs a region");
    for (const auto& [fid, r] : regions)
        if (s.face_index(fid) < 0) throw RangeError("region for unknown face " + std::to_string(fid));

    const auto gate = check_pseudo_jordan(s, w, opts.subset_bound);
    if (!gate.pass())
        throw ConditionNotMet("input surface fails the solvability check: " + gate.violations.front().kind + " " +
                              gate.violations.front().witness);

    std::vector<std::pair<int, CookiePacking>> packings;
    for (const auto& [fid, region] : regions) {
        try {
            packings.emplace_back(fid, cookie_cutter(region, n));
        } catch (const RegionTooSmall& e) {
            throw RegionTooSmall("region of face " + std::to_string(fid) + ": " + e.what());
        } catch (const GluingNotTriangular& e) {
            throw GluingNotTriangular("region of face " + std::to_string(fid) + ": " + e.what());
        }
    }
    DeformResult res;
    res.n = n;
    res.glued = glue(s, w, packings);
    const auto& g = res.glued;
    require_valid(g.surface, true);

    const auto glued_gate = check_origin_in_Y(g.surface, g.weights, opts.glued_subset_bound);
    if (!glued_gate.pass())
        throw ConditionNotMet("glued surface fails the solvability check: " + glued_gate.violations.front().kind +
                              " " + glued_gate.violations.front().witness);

    SolveOptions sopts;
    sopts.tol = opts.tol;
    sopts.max_iter = opts.max_iter;
    sopts.check_conditions = false;
    try {
        res.full = solve(g.surface, g.weights, sopts);
    } catch (const DegenerationDetected& e) {
        throw DegenerationDetected(std::string(e.what()) + " (" + host_faces(g, e.vertices()) + ")", e.vertices());
    } catch (const NonConvergence& e) {
        throw NonConvergence(std::string(e.what()) + " at n = " + std::to_string(n), e.iterations(), e.residual());
    }

    auto& r = res.restricted;
    r.mode = PatternMode::Triangulated;
    r.radii.assign(res.full.radii.begin(), res.full.radii.begin() + g.original_vertices);
    r.curvature.assign(res.full.curvature.begin(), res.full.curvature.begin() + g.original_vertices);
    r.residual = max_abs(r.curvature);
    r.iterations = res.full.iterations;
    res.min_radius = *std::min_element(res.full.radii.begin(), res.full.radii.end());
    const double floor_radius = u_to_radius(sopts.u_floor);
    if (!(res.min_radius > floor_radius)) throw DegenerationDetected("a disk reached the radius floor", {});
    res.proxies = interstice_proxies(g, res.full);
    return res;
}

RefinementReport refinement_experiment(const CellularSurface& s, const EdgeWeights& w,
                                       const std::map<int, PlanarRegion>& regions, const std::vector<int>& n_list,
                                       const DeformOptions& opts) {
    std::vector<std::future<DeformResult>> runs;
    for (int n : n_list)
        runs.push_back(std::async(std::launch::async, [&, n] { return deform_solve(s, w, regions, n, opts); }));
    RefinementReport rep;
    for (auto& fut : runs) {
        const auto res = fut.get();
        RefinementRow row;
        row.n = res.n;
        row.vertices = res.glued.surface.num_vertices();
        row.iterations = res.full.iterations;
        row.residual = res.full.residual;
        row.min_radius = res.min_radius;
        row.radii = res.restricted.radii;
        row.proxies = res.proxies;
        if (!rep.rows.empty()) {
            const auto& prev = rep.rows.back();
            row.radius_difference = 0.0;
            for (std::size_t v = 0; v < row.radii.size(); ++v)
                row.radius_difference = std::max(row.radius_difference, std::abs(row.radii[v] - prev.radii[v]));
            row.proxy_difference = 0.0;
            for (std::size_t f = 0; f < row.proxies.size(); ++f) {
                const auto& a = row.proxies[f];
                const auto& b = prev.proxies[f];
                if (a.has_cross_ratio) {
                    row.proxy_difference = std::max(row.proxy_difference, std::abs(a.cross_ratio - b.cross_ratio));
                } else {
                    for (std::size_t c = 0; c < a.corners.size(); ++c)
                        row.proxy_difference = std::max(row.proxy_difference, std::abs(a.corners[c] - b.corners[c]));
                }
            }
            if (prev.radius_difference >= 0.0) {
                if (!(row.radius_difference < prev.radius_difference)) rep.strictly_decreasing = false;
                if (!(row.radius_difference <= kRefinementSlack * prev.radius_difference)) rep.within_slack = false;
            }
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

namespace {

double tidy(double x) { return std::abs(x) < 5e-11 ? 0.0 : x; }

}  // namespace

std::string RefinementReport::format() const {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%6s %9s %6s %12s %12s %12s %12s\n", "n", "vertices", "iters", "residual",
                  "min radius", "max |dr|", "proxy diff");
    os << buf;
    for (const auto& r : rows) {
        char dr[32] = "-";
        char dp[32] = "-";
        if (r.radius_difference >= 0.0) std::snprintf(dr, sizeof dr, "%.6e", r.radius_difference);
        if (r.proxy_difference >= 0.0) std::snprintf(dp, sizeof dp, "%.6e", r.proxy_difference);
        std::snprintf(buf, sizeof buf, "%6d %9d %6d %12.4e %12.6e %12s %12s\n", r.n, r.vertices, r.iterations,
                      r.residual, r.min_radius, dr, dp);
        os << buf;
    }
    for (const auto& r : rows)
        for (const auto& p : r.proxies) {
            os << "n=" << r.n << " face " << p.face_id << " corners";
            for (const auto& c : p.corners) {
                std::snprintf(buf, sizeof buf, " (%.10f,%.10f)", tidy(c.real()), tidy(c.imag()));
                os << buf;
            }
            if (p.has_cross_ratio) {
                std::snprintf(buf, sizeof buf, " cross-ratio (%.10f,%.10f)", tidy(p.cross_ratio.real()), tidy(p.cross_ratio.imag()));
                os << buf;
            }
            os << "\n";
        }
    os << "successive radius differences: " << (strictly_decreasing ? "strictly decreasing" : "not strictly decreasing")
       << ", " << (within_slack ? "within" : "outside") << " slack factor 1.5\n";
    return os.str();
}

}  // namespace circlepat
