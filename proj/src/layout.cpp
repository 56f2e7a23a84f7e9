#include "circlepat/layout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "circlepat/configurations.hpp"
#include "circlepat/errors.hpp"

namespace circlepat {

namespace {

// Centers of one face in its own frame. Triangulated faces put corner 0 at
// the origin and corner 1 on the positive x-axis; ideal faces put the ideal
// point at the origin and corner 0 on the positive x-axis.
std::vector<DiskPoint> local_centers(const CellularSurface& s, const EdgeWeights& w, const std::vector<double>& radii,
                                     PatternMode mode, int f) {
    const auto& b = s.face(f).boundary;
    const int m = static_cast<int>(b.size());
    std::vector<DiskPoint> c(m);
    if (mode == PatternMode::Triangulated) {
        std::array<double, 3> r{};
        std::array<double, 3> th{};
        for (int k = 0; k < 3; ++k) {
            r[k] = radii[s.tail(b[k])];
            th[k] = w[b[(k + 1) % 3].edge];
        }
        const auto ang = three_circle_angles({r, th});
        const double l0 = edge_length(r[0], r[1], w[b[0].edge]);
        const double l2 = edge_length(r[2], r[0], w[b[2].edge]);
        c[0] = 0.0;
        c[1] = std::tanh(l0 / 2.0);
        c[2] = std::polar(std::tanh(l2 / 2.0), ang.angle[0]);
        return c;
    }
    double heading = 0.0;
    for (int p = 0; p < m; ++p) {
        c[p] = std::polar(std::tanh(radii[s.tail(b[p])] / 2.0), heading);
        heading += kPi - w[b[p].edge];
    }
    return c;
}

// Isometry from the frame of face g to the frame of face f across the edge
// used at (f, p) and (g, q).
DiskAutomorphism transition(const std::vector<DiskPoint>& lf, int p, const std::vector<DiskPoint>& lg, int q) {
    const int mf = static_cast<int>(lf.size());
    const int mg = static_cast<int>(lg.size());
    return segment_matching(lg[q], lg[(q + 1) % mg], lf[(p + 1) % mf], lf[p]);
}

}  // namespace

DiskLayout develop(const CellularSurface& s, const EdgeWeights& w, const PatternSolution& sol,
                   const DevelopOptions& opts) {
    return develop(s, w, sol.radii, sol.mode, opts);
}

DiskLayout develop(const CellularSurface& s, const EdgeWeights& w, const std::vector<double>& radii, PatternMode mode,
                   const DevelopOptions& opts) {
    if (static_cast<int>(radii.size()) != s.num_vertices())
        throw RangeError("radius count does not match vertex count");
    if (static_cast<int>(w.size()) != s.num_edges()) throw WeightOutOfRange("weight count does not match edge count");
    DiskLayout L;
    L.mode = mode;
    const auto k = mode == PatternMode::Ideal ? ideal_curvature(s, w, radii) : curvature(s, w, radii);
    L.pattern_residual = max_abs(k);
    if (opts.check_residual && L.pattern_residual > opts.max_residual) {
        std::ostringstream os;
        os << "pattern residual " << L.pattern_residual << " exceeds " << opts.max_residual;
        throw ResidualTooLarge(os.str());
    }

    const int nf = s.num_faces();
    auto in_mask = [&](int f) { return opts.face_mask.empty() || opts.face_mask[f]; };
    if (opts.root_face < 0 || opts.root_face >= nf || !in_mask(opts.root_face))
        throw RangeError("root face not available for layout");

    std::vector<std::vector<DiskPoint>> local(nf);
    for (int f = 0; f < nf; ++f)
        if (in_mask(f)) local[f] = local_centers(s, w, radii, mode, f);

    // Breadth-first development over the dual graph.
    std::vector<int> placed_index(nf, -1);
    std::vector<std::vector<char>> tree_pos(nf);
    auto place = [&](int f, const DiskAutomorphism& frame, int parent, int parent_pos, bool collar) {
        PlacedFace pf;
        pf.face = f;
        pf.vertices = s.face_vertices(f);
        pf.frame = frame;
        pf.parent = parent;
        pf.parent_pos = parent_pos;
        pf.collar = collar;
        for (const auto& x : local[f]) pf.centers.push_back(frame(x));
        if (mode == PatternMode::Ideal) pf.ideal_point = frame(DiskPoint{0.0, 0.0});
        L.faces.push_back(std::move(pf));
        return static_cast<int>(L.faces.size()) - 1;
    };

    const int root = opts.root_face;
    DiskAutomorphism root_frame;
    if (mode == PatternMode::Ideal) {
        const auto& lc = local[root];
        const double l0 = hyp_distance(lc[0], lc[1]);
        root_frame = segment_matching(lc[0], lc[1], 0.0, std::tanh(l0 / 2.0));
    }
    placed_index[root] = place(root, root_frame, -1, -1, false);
    for (int f = 0; f < nf; ++f) tree_pos[f].assign(s.face_size(f), 0);
    std::deque<int> queue{root};
    while (!queue.empty()) {
        const int f = queue.front();
        queue.pop_front();
        for (int p = 0; p < s.face_size(f); ++p) {
            const Corner c = s.partner(f, p);
            const int g = c.face;
            if (!in_mask(g) || placed_index[g] >= 0) continue;
            const auto frame = L.faces[placed_index[f]].frame.compose(transition(local[f], p, local[g], c.pos));
            placed_index[g] = place(g, frame, placed_index[f], c.pos, false);
            tree_pos[f][p] = 1;
            tree_pos[g][c.pos] = 1;
            L.tree.emplace_back(s.face(f).id, s.face(g).id);
            queue.push_back(g);
        }
    }
    const int domain_faces = static_cast<int>(L.faces.size());
    if (opts.collar) {
        for (int i = 0; i < domain_faces; ++i) {
            const int f = L.faces[i].face;
            for (int p = 0; p < s.face_size(f); ++p) {
                if (tree_pos[f][p]) continue;
                const Corner c = s.partner(f, p);
                if (!in_mask(c.face)) continue;
                const auto frame = L.faces[i].frame.compose(transition(local[f], p, local[c.face], c.pos));
                place(c.face, frame, i, c.pos, true);
            }
        }
    }

    // Circles, merged per vertex when centers coincide.
    std::map<int, std::vector<int>> copies;
    for (auto& pf : L.faces) {
        pf.circles.assign(pf.vertices.size(), -1);
        for (std::size_t p = 0; p < pf.vertices.size(); ++p) {
            const int v = pf.vertices[p];
            auto& list = copies[v];
            int found = -1;
            for (int ci : list)
                if (hyp_distance(L.circles[ci].circle.center, pf.centers[p]) < opts.merge_tolerance) {
                    found = ci;
                    break;
                }
            if (found < 0) {
                found = static_cast<int>(L.circles.size());
                L.circles.push_back({v, static_cast<int>(list.size()), {pf.centers[p], radii[v]}, pf.collar});
                list.push_back(found);
            }
            pf.circles[p] = found;
        }
    }

    std::set<std::tuple<int, int, int>> seen;
    for (const auto& pf : L.faces) {
        const auto& b = s.face(pf.face).boundary;
        const int m = static_cast<int>(b.size());
        for (int p = 0; p < m; ++p) {
            const int c0 = pf.circles[p];
            const int c1 = pf.circles[(p + 1) % m];
            const double expect = edge_length(radii[pf.vertices[p]], radii[pf.vertices[(p + 1) % m]], w[b[p].edge]);
            L.edge_length_defect =
                std::max(L.edge_length_defect, std::abs(hyp_distance(pf.centers[p], pf.centers[(p + 1) % m]) - expect));
            if (!seen.insert({b[p].edge, std::min(c0, c1), std::max(c0, c1)}).second) continue;
            L.edges.push_back({b[p].edge, c0, c1, w[b[p].edge], pf.collar});
        }
    }

    // Holonomy: compose face transitions once around every vertex.
    L.vertex_holonomy.assign(s.num_vertices(), -1.0);
    for (int v = 0; v < s.num_vertices(); ++v) {
        const auto rot = s.rotation(v);
        if (rot.empty()) continue;
        bool inside = true;
        for (const auto& c : rot) inside = inside && in_mask(c.face);
        if (!inside) continue;
        DiskAutomorphism h;
        for (std::size_t i = 0; i < rot.size(); ++i) {
            const auto& c = rot[i];
            const Corner nb = s.partner(c.face, c.pos);
            h = h.compose(transition(local[c.face], c.pos, local[nb.face], nb.pos));
        }
        double disp = 0.0;
        for (const auto& x : local[rot[0].face]) disp = std::max(disp, hyp_distance(h(x), x));
        L.vertex_holonomy[v] = disp;
        L.holonomy_residual = std::max(L.holonomy_residual, disp);
    }
    return L;
}

double euclidean_exterior_angle(const EuclideanCircle& a, const EuclideanCircle& b) {
    // D^2 = R1^2 + R2^2 + 2 R1 R2 cos(theta), evaluated through the half angle:
    // sin^2(theta/2) = ((R1 + R2)^2 - D^2) / (4 R1 R2).
    const double d = std::abs(a.center - b.center);
    const double sum = a.radius + b.radius;
    const double s2 = (sum - d) * (sum + d) / (4.0 * a.radius * b.radius);
    return 2.0 * std::asin(std::sqrt(std::clamp(s2, 0.0, 1.0)));
}

AngleReport verify_intersection_angles(const DiskLayout& layout, double tol) {
    AngleReport rep;
    for (const auto& e : layout.edges) {
        const auto A = hyp_circle_to_euclidean(layout.circles[e.c0].circle);
        const auto B = hyp_circle_to_euclidean(layout.circles[e.c1].circle);
        double dev;
        if (e.theta == 0.0)
            dev = std::abs(std::abs(A.center - B.center) - (A.radius + B.radius));
        else
            dev = std::abs(euclidean_exterior_angle(A, B) - e.theta);
        ++rep.checked;
        rep.max_deviation = std::max(rep.max_deviation, dev);
        if (!(dev <= tol)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "edge index %d circles %d/%d deviation %.3g", e.edge, e.c0, e.c1, dev);
            rep.mismatches.emplace_back(buf);
        }
    }
    return rep;
}

std::vector<std::complex<double>> circle_intersections(const EuclideanCircle& a, const EuclideanCircle& b) {
    const auto delta = b.center - a.center;
    const double d = std::abs(delta);
    const double sum = a.radius + b.radius;
    if (d == 0.0 || d < std::abs(a.radius - b.radius) || d > sum * (1.0 + 1e-12)) return {};
    // Near tangency the half chord is sqrt of a cancellation; snap to the contact point.
    if (d >= sum * (1.0 - 1e-10)) {
        const auto t = a.center + (a.radius / sum) * delta;
        return {t, t};
    }
    const double x = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    const double h = std::sqrt(std::max(0.0, a.radius * a.radius - x * x));
    const auto u = delta / d;
    const auto base = a.center + x * u;
    const auto perp = std::complex<double>(-u.imag(), u.real());
    return {base + h * perp, base - h * perp};
}

namespace {

constexpr int kLensSamples = 64;

std::vector<std::complex<double>> lens_points(const EuclideanCircle& A, const EuclideanCircle& B) {
    std::vector<std::complex<double>> pts;
    const auto delta = B.center - A.center;
    const double d = std::abs(delta);
    const auto corners = circle_intersections(A, B);
    if (corners.empty() || corners[0] == corners[1]) {
        if (d >= A.radius + B.radius || d == 0.0) {
            // Tangent (or barely apart): the lens is the contact point.
            pts.push_back(A.center + A.radius * delta / std::max(d, 1e-300));
            return pts;
        }
        const auto& small = A.radius < B.radius ? A : B;
        for (int i = 0; i < kLensSamples; ++i) pts.push_back(small.center + std::polar(small.radius, 2.0 * kPi * i / kLensSamples));
        return pts;
    }
    pts = corners;
    auto arc = [&](const EuclideanCircle& C, std::complex<double> toward) {
        const double heading = std::arg(toward);
        const double half = std::abs(std::arg((corners[0] - C.center) / toward));
        const int n = kLensSamples / 2;
        for (int i = 1; i <= n; ++i) {
            const double t = -half + 2.0 * half * i / (n + 1);
            pts.push_back(C.center + std::polar(C.radius, heading + t));
        }
    };
    arc(A, delta);
    arc(B, -delta);
    return pts;
}

bool contains(const EuclideanCircle& c, std::complex<double> p) { return std::abs(p - c.center) <= c.radius + 1e-12; }

}  // namespace

ContactReport verify_primitive_contact(const DiskLayout& layout) {
    ContactReport rep;
    std::vector<EuclideanCircle> euc;
    for (const auto& c : layout.circles) euc.push_back(hyp_circle_to_euclidean(c.circle));
    std::set<std::pair<int, int>> adjacent;
    for (const auto& e : layout.edges) adjacent.insert({std::min(e.c0, e.c1), std::max(e.c0, e.c1)});
    for (const auto& e : layout.edges) {
        if (e.collar) continue;
        ++rep.lenses;
        const auto pts = lens_points(euc[e.c0], euc[e.c1]);
        for (int t = 0; t < static_cast<int>(euc.size()); ++t) {
            if (t == e.c0 || t == e.c1) continue;
            bool all = true;
            for (const auto& p : pts)
                if (!contains(euc[t], p)) {
                    all = false;
                    break;
                }
            if (all) {
                std::ostringstream os;
                os << "lens of circles " << e.c0 << "/" << e.c1 << " (edge index " << e.edge << ") inside circle " << t
                   << " (vertex index " << layout.circles[t].vertex << ")";
                rep.swallowed.push_back(os.str());
            }
        }
    }
    for (std::size_t i = 0; i < euc.size(); ++i) {
        if (layout.circles[i].collar) continue;
        for (std::size_t j = i + 1; j < euc.size(); ++j) {
            if (layout.circles[j].collar || adjacent.count({static_cast<int>(i), static_cast<int>(j)})) continue;
            if (std::abs(euc[i].center - euc[j].center) < euc[i].radius + euc[j].radius - 1e-9) ++rep.unexpected_overlaps;
        }
    }
    return rep;
}

namespace {

bool inside_klein_polygon(const std::vector<std::complex<double>>& poly, std::complex<double> q) {
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

}  // namespace

IncidenceReport verify_ideal_incidence(const DiskLayout& layout) {
    IncidenceReport rep;
    for (const auto& pf : layout.faces) {
        if (pf.collar) continue;
        ++rep.faces;
        std::vector<std::complex<double>> klein;
        std::complex<double> centroid = 0.0;
        for (const auto& c : pf.centers) {
            klein.push_back(to_klein(c));
            centroid += klein.back();
        }
        centroid /= static_cast<double>(klein.size());
        const int m = static_cast<int>(pf.centers.size());
        std::vector<std::complex<double>> cand;
        double spread = 0.0;
        for (int p = 0; p < m; ++p) {
            const auto A = hyp_circle_to_euclidean(layout.circles[pf.circles[p]].circle);
            const auto B = hyp_circle_to_euclidean(layout.circles[pf.circles[(p + 1) % m]].circle);
            auto pts = circle_intersections(A, B);
            if (pts.empty()) {
                spread = std::numeric_limits<double>::infinity();
                continue;
            }
            const bool in0 = inside_klein_polygon(klein, to_klein(pts[0]));
            const bool in1 = inside_klein_polygon(klein, to_klein(pts[1]));
            std::complex<double> pick;
            if (in0 != in1)
                pick = in0 ? pts[0] : pts[1];
            else
                pick = std::abs(to_klein(pts[0]) - centroid) <= std::abs(to_klein(pts[1]) - centroid) ? pts[0] : pts[1];
            cand.push_back(pick);
        }
        std::complex<double> mean = 0.0;
        for (const auto& c : cand) mean += c;
        if (!cand.empty()) mean /= static_cast<double>(cand.size());
        for (std::size_t i = 0; i < cand.size(); ++i)
            for (std::size_t j = i + 1; j < cand.size(); ++j) spread = std::max(spread, std::abs(cand[i] - cand[j]));
        rep.spread.push_back(spread);
        rep.ideal_points.push_back(mean);
        rep.max_spread = std::max(rep.max_spread, spread);
    }
    return rep;
}

namespace {

std::string num(double x) {
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// SVG y points down; flip so that the picture keeps the math orientation.
std::string pt(std::complex<double> p) { return num(p.real()) + " " + num(-p.imag()); }

// Path command continuing from p to q along the geodesic.
std::string geodesic_to(std::complex<double> p, std::complex<double> q) {
    const double cross = p.real() * q.imag() - p.imag() * q.real();
    if (std::abs(cross) < 1e-12) return "L " + pt(q);
    // Circle orthogonal to the unit circle through p and q:
    // 2 Re(c conj p) = 1 + |p|^2, 2 Re(c conj q) = 1 + |q|^2.
    const double a1 = 2.0 * p.real(), b1 = 2.0 * p.imag(), r1 = 1.0 + std::norm(p);
    const double a2 = 2.0 * q.real(), b2 = 2.0 * q.imag(), r2 = 1.0 + std::norm(q);
    const double det = a1 * b2 - a2 * b1;
    const std::complex<double> c((r1 * b2 - r2 * b1) / det, (a1 * r2 - a2 * r1) / det);
    const double R = std::abs(p - c);
    const double turn = (p - c).real() * (q - c).imag() - (p - c).imag() * (q - c).real();
    return "A " + num(R) + " " + num(R) + " 0 0 " + (turn > 0 ? "1 " : "0 ") + pt(q);
}

}  // namespace

std::string emit_svg(const DiskLayout& layout, const CellularSurface* s, const SvgOptions& opts) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" "
          "viewBox=\"-1.05 -1.05 2.1 2.1\">\n";
    os << "<circle id=\"boundary\" cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.004\"/>\n";

    auto visible = [&](bool collar) { return !collar || opts.collar; };
    if (opts.shade) {
        bool open = false;
        for (const auto& pf : layout.faces) {
            if (!visible(pf.collar)) continue;
            if (!open) os << "<g id=\"faces\" stroke=\"none\">\n";
            open = true;
            os << "<path fill=\"" << (pf.collar ? "#f2f2f2" : "#dce6f2") << "\" d=\"M " << pt(pf.centers[0]);
            for (std::size_t p = 1; p <= pf.centers.size(); ++p)
                os << " " << geodesic_to(pf.centers[p - 1], pf.centers[p % pf.centers.size()]);
            os << " Z\"/>\n";
        }
        if (open) os << "</g>\n";
    }
    bool open = false;
    for (const auto& e : layout.edges) {
        if (!visible(e.collar)) continue;
        if (!open) os << "<g id=\"edges\" fill=\"none\" stroke=\"#404040\" stroke-width=\"0.003\">\n";
        open = true;
        const auto a = layout.circles[e.c0].circle.center;
        const auto b = layout.circles[e.c1].circle.center;
        os << "<path d=\"M " << pt(a) << " " << geodesic_to(a, b) << "\"/>\n";
    }
    if (open) os << "</g>\n";
    open = false;
    for (const auto& c : layout.circles) {
        if (!visible(c.collar)) continue;
        if (!open) os << "<g id=\"circles\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"0.003\">\n";
        open = true;
        const auto e = hyp_circle_to_euclidean(c.circle);
        os << "<circle cx=\"" << num(e.center.real()) << "\" cy=\"" << num(-e.center.imag()) << "\" r=\""
           << num(e.radius) << "\"/>\n";
    }
    if (open) os << "</g>\n";
    if (opts.labels) {
        open = false;
        for (const auto& c : layout.circles) {
            if (!visible(c.collar)) continue;
            if (!open) os << "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"0.04\" text-anchor=\"middle\">\n";
            open = true;
            const int label = s ? s->vertex_id(c.vertex) : c.vertex;
            os << "<text x=\"" << num(c.circle.center.real()) << "\" y=\"" << num(-c.circle.center.imag()) << "\">"
               << label << "</text>\n";
        }
        if (open) os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace circlepat
