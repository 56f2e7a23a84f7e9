#include "circlepat/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "circlepat/errors.hpp"
#include "circlepat/hypgeo.hpp"

namespace circlepat {

namespace {

int find_index(const std::vector<int>& ids, int id) {
    const auto it = std::find(ids.begin(), ids.end(), id);
    return it == ids.end() ? -1 : static_cast<int>(it - ids.begin());
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

CellularSurface::CellularSurface(std::string name, std::vector<int> vertex_ids, std::vector<Edge> edges,
                                 std::vector<Face> faces)
    : name_(std::move(name)), vertex_ids_(std::move(vertex_ids)), edges_(std::move(edges)), faces_(std::move(faces)) {
    const int nv = num_vertices();
    const int ne = num_edges();
    edge_uses_.assign(ne, {});
    vertex_corners_.assign(nv, {});
    vertex_edges_.assign(nv, {});
    cell_neighbors_.assign(nv, {});
    for (int e = 0; e < ne; ++e) {
        const auto& ed = edges_[e];
        if (ed.v0 < 0 || ed.v0 >= nv || ed.v1 < 0 || ed.v1 >= nv)
            throw InvalidSurface("edge " + std::to_string(ed.id) + " references an unknown vertex");
        vertex_edges_[ed.v0].push_back(e);
        if (ed.v1 != ed.v0) vertex_edges_[ed.v1].push_back(e);
    }
    for (int f = 0; f < num_faces(); ++f) {
        const auto& b = faces_[f].boundary;
        for (int p = 0; p < static_cast<int>(b.size()); ++p) {
            if (b[p].edge < 0 || b[p].edge >= ne)
                throw InvalidSurface("face " + std::to_string(faces_[f].id) + " references an unknown edge");
            edge_uses_[b[p].edge].push_back({f, p});
            vertex_corners_[tail(b[p])].push_back({f, p});
        }
    }
    for (int v = 0; v < nv; ++v) {
        auto& nb = cell_neighbors_[v];
        for (int e : vertex_edges_[v]) {
            nb.push_back(edges_[e].v0);
            nb.push_back(edges_[e].v1);
        }
        for (const auto& c : vertex_corners_[v])
            for (const auto& u : faces_[c.face].boundary) nb.push_back(tail(u));
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        nb.erase(std::remove(nb.begin(), nb.end(), v), nb.end());
    }
}

int CellularSurface::vertex_index(int id) const { return find_index(vertex_ids_, id); }

int CellularSurface::edge_index(int id) const {
    for (int e = 0; e < num_edges(); ++e)
        if (edges_[e].id == id) return e;
    return -1;
}

int CellularSurface::face_index(int id) const {
    for (int f = 0; f < num_faces(); ++f)
        if (faces_[f].id == id) return f;
    return -1;
}

std::vector<int> CellularSurface::face_vertices(int f) const {
    std::vector<int> out;
    out.reserve(faces_[f].boundary.size());
    for (const auto& u : faces_[f].boundary) out.push_back(tail(u));
    return out;
}

bool CellularSurface::is_triangulation() const {
    if (faces_.empty()) return false;
    for (const auto& f : faces_)
        if (f.boundary.size() != 3) return false;
    return 2 * num_edges() == 3 * num_faces();
}

Corner CellularSurface::partner(int f, int pos) const {
    const int e = faces_[f].boundary[pos].edge;
    for (const auto& c : edge_uses_[e])
        if (c.face != f || c.pos != pos) return c;
    throw InvalidSurface("edge " + std::to_string(edges_[e].id) + " is used only once");
}

std::vector<Corner> CellularSurface::rotation(int v) const {
    std::vector<Corner> out;
    const auto& cs = vertex_corners_[v];
    if (cs.empty()) return out;
    Corner c = cs.front();
    do {
        out.push_back(c);
        const Corner p = partner(c.face, c.pos);
        c = {p.face, (p.pos + 1) % face_size(p.face)};
        if (out.size() > cs.size()) throw InvalidSurface("rotation at vertex does not close");
    } while (c.face != cs.front().face || c.pos != cs.front().pos);
    return out;
}

SurfaceStats surface_stats(const CellularSurface& s) {
    SurfaceStats st;
    st.vertices = s.num_vertices();
    st.edges = s.num_edges();
    st.faces = s.num_faces();
    st.euler = s.euler_characteristic();
    st.genus = s.genus();
    st.deformation_dof = 2 * st.edges - 3 * st.faces;
    st.triangulation = s.is_triangulation();
    return st;
}

ConditionReport validate(const CellularSurface& s, bool require_triangulation) {
    ConditionReport rep;
    rep.check = "validate";
    rep.stats = surface_stats(s);
    auto add = [&](std::string kind, std::string witness, double lhs = 0.0, double rhs = 0.0) {
        rep.violations.push_back({std::move(kind), std::move(witness), lhs, rhs});
    };

    for (const auto& e : s.edges())
        if (e.v0 == e.v1) add("LoopEdge", "edge " + std::to_string(e.id));

    for (int f = 0; f < s.num_faces(); ++f) {
        const auto& b = s.face(f).boundary;
        const std::string fid = "face " + std::to_string(s.face(f).id);
        if (b.size() < 3) add("FaceTooSmall", fid, static_cast<double>(b.size()), 3.0);
        for (std::size_t p = 0; p < b.size(); ++p)
            if (s.head(b[p]) != s.tail(b[(p + 1) % b.size()])) {
                add("BrokenFaceCycle", fid + " position " + std::to_string(p));
                break;
            }
    }

    bool uses_ok = true;
    for (int e = 0; e < s.num_edges(); ++e) {
        const auto& uses = s.edge_uses(e);
        const std::string eid = "edge " + std::to_string(s.edge(e).id);
        if (uses.size() != 2) {
            add("EdgeNotTwoSided", eid, static_cast<double>(uses.size()), 2.0);
            uses_ok = false;
            continue;
        }
        const bool d0 = s.face(uses[0].face).boundary[uses[0].pos].forward;
        const bool d1 = s.face(uses[1].face).boundary[uses[1].pos].forward;
        if (d0 == d1) {
            add("OrientationMismatch", eid);
            uses_ok = false;
        }
    }

    for (int v = 0; v < s.num_vertices(); ++v) {
        const std::string vid = "vertex " + std::to_string(s.vertex_id(v));
        if (s.vertex_corners(v).empty()) {
            add("IsolatedVertex", vid);
            continue;
        }
        if (!uses_ok || !rep.violations.empty()) continue;
        try {
            const auto rot = s.rotation(v);
            if (rot.size() != s.vertex_corners(v).size())
                add("VertexLinkNotDisk", vid, static_cast<double>(rot.size()),
                    static_cast<double>(s.vertex_corners(v).size()));
        } catch (const InvalidSurface&) {
            add("VertexLinkNotDisk", vid);
        }
    }

    const int chi = s.euler_characteristic();
    if (chi % 2 != 0 || chi > -2) add("GenusTooSmall", "chi " + std::to_string(chi), chi, -2.0);

    if (require_triangulation) {
        for (int f = 0; f < s.num_faces(); ++f)
            if (s.face_size(f) != 3)
                add("NotATriangle", "face " + std::to_string(s.face(f).id), s.face_size(f), 3.0);
        if (2 * s.num_edges() != 3 * s.num_faces())
            add("TriangleCount", "2|E| vs 3|F|", 2.0 * s.num_edges(), 3.0 * s.num_faces());
    }
    return rep;
}

void require_valid(const CellularSurface& s, bool require_triangulation) {
    const auto rep = validate(s, require_triangulation);
    if (!rep.pass()) {
        const auto& v = rep.violations.front();
        if (v.kind == "NotATriangle" || v.kind == "TriangleCount")
            throw NotATriangulation(v.kind + " " + v.witness);
        throw InvalidSurface("invalid surface: " + v.kind + " " + v.witness);
    }
}

StarClosure star_closure(const CellularSurface& s, const std::vector<int>& subset) {
    std::vector<char> in(s.num_vertices(), 0);
    for (int v : subset) in[v] = 1;
    StarClosure out;
    for (int v = 0; v < s.num_vertices(); ++v)
        if (in[v]) out.vertices.push_back(v);
    for (int e = 0; e < s.num_edges(); ++e)
        if (in[s.edge(e).v0] || in[s.edge(e).v1]) out.edges.push_back(e);
    for (int f = 0; f < s.num_faces(); ++f) {
        const auto vs = s.face_vertices(f);
        if (std::any_of(vs.begin(), vs.end(), [&](int v) { return in[v]; })) out.faces.push_back(f);
    }
    out.euler = static_cast<int>(out.vertices.size()) - static_cast<int>(out.edges.size()) +
                static_cast<int>(out.faces.size());

    // Every open cell of the closure is attached to its vertices in the subset,
    // so components are those of the subset under "shares an edge or a face".
    std::vector<int> parent(s.num_vertices());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (int e : out.edges)
        if (in[s.edge(e).v0] && in[s.edge(e).v1]) unite(s.edge(e).v0, s.edge(e).v1);
    for (int f : out.faces) {
        int first = -1;
        for (int v : s.face_vertices(f)) {
            if (!in[v]) continue;
            if (first < 0)
                first = v;
            else
                unite(first, v);
        }
    }
    for (int v : out.vertices)
        if (find(v) == v) ++out.components;
    return out;
}

std::vector<LinkPair> link_pairs(const CellularSurface& s, const std::vector<int>& subset) {
    if (!s.is_triangulation()) throw NotATriangulation("link pairs need a triangulation");
    std::vector<char> in(s.num_vertices(), 0);
    for (int v : subset) in[v] = 1;
    std::vector<LinkPair> out;
    for (int f = 0; f < s.num_faces(); ++f)
        for (int p = 0; p < 3; ++p) {
            const int v = s.corner_vertex(f, p);
            const auto& opposite = s.face(f).boundary[(p + 1) % 3];
            if (in[v] && !in[s.tail(opposite)] && !in[s.head(opposite)]) out.push_back({opposite.edge, v, f});
        }
    return out;
}

std::vector<Corner> boundary_walk(const CellularSurface& s, const std::vector<int>& subset) {
    std::vector<char> in(s.num_vertices(), 0);
    for (int v : subset) in[v] = 1;
    std::vector<Corner> out;
    for (int f = 0; f < s.num_faces(); ++f) {
        const auto vs = s.face_vertices(f);
        if (std::none_of(vs.begin(), vs.end(), [&](int v) { return in[v]; })) continue;
        for (int p = 0; p < s.face_size(f); ++p) {
            const auto& u = s.face(f).boundary[p];
            if (!in[s.tail(u)] && !in[s.head(u)]) out.push_back({f, p});
        }
    }
    return out;
}

namespace {

// Incremental evaluator for the star-closure inequality; reuses stamp arrays
// so that subset enumeration does not allocate per subset.
class StarEvaluator {
public:
    StarEvaluator(const CellularSurface& s, const EdgeWeights& w)
        : s_(s), w_(w), in_(s.num_vertices(), 0), edge_stamp_(s.num_edges(), 0), face_stamp_(s.num_faces(), 0) {}

    struct Result {
        double lhs = 0.0;
        int euler = 0;
        int walk_length = 0;
        double walk_theta = 0.0;
        std::vector<Corner> walk;
    };

    Result evaluate(const std::vector<int>& subset, bool keep_walk) {
        ++stamp_;
        for (int v : subset) in_[v] = stamp_;
        Result r;
        int ne = 0;
        int nf = 0;
        for (int v : subset) {
            for (int e : s_.vertex_edges(v))
                if (edge_stamp_[e] != stamp_) {
                    edge_stamp_[e] = stamp_;
                    ++ne;
                }
            for (const auto& c : s_.vertex_corners(v)) {
                if (face_stamp_[c.face] == stamp_) continue;
                face_stamp_[c.face] = stamp_;
                ++nf;
                const auto& b = s_.face(c.face).boundary;
                for (int p = 0; p < static_cast<int>(b.size()); ++p)
                    if (in_[s_.tail(b[p])] != stamp_ && in_[s_.head(b[p])] != stamp_) {
                        ++r.walk_length;
                        r.walk_theta += w_[b[p].edge];
                        if (keep_walk) r.walk.push_back({c.face, p});
                    }
            }
        }
        r.euler = static_cast<int>(subset.size()) - ne + nf;
        r.lhs = r.walk_theta - kPi * r.walk_length + 2.0 * kPi * r.euler;
        return r;
    }

private:
    const CellularSurface& s_;
    const EdgeWeights& w_;
    std::vector<int> in_;
    std::vector<int> edge_stamp_;
    std::vector<int> face_stamp_;
    int stamp_ = 0;
};

std::string subset_witness(const CellularSurface& s, const std::vector<int>& subset) {
    std::vector<int> ids;
    for (int v : subset) ids.push_back(s.vertex_id(v));
    std::sort(ids.begin(), ids.end());
    std::string out = "V0={";
    for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + std::to_string(ids[i]);
    return out + "}";
}

std::string face_witness(const CellularSurface& s, int f) {
    std::string out = "face " + std::to_string(s.face(f).id) + " edges";
    for (const auto& u : s.face(f).boundary) out += " " + std::to_string(s.edge(u.edge).id);
    return out;
}

// ESU-style enumeration of connected vertex sets of size <= k: each set is
// generated exactly once, rooted at its smallest vertex.
void enumerate_connected(const CellularSurface& s, int k, const std::function<void(const std::vector<int>&)>& visit) {
    const int n = s.num_vertices();
    std::vector<int> current;
    std::vector<char> in_current(n, 0);
    std::vector<int> exclusive_mark(n, 0);

    std::function<void(int, std::vector<int>)> extend = [&](int root, std::vector<int> ext) {
        visit(current);
        if (static_cast<int>(current.size()) == k) return;
        while (!ext.empty()) {
            const int w = ext.back();
            ext.pop_back();
            // New extension: old candidates plus exclusive neighbours of w.
            std::vector<int> next = ext;
            for (int x : s.cell_neighbors(w)) {
                if (x <= root || in_current[x]) continue;
                bool adjacent_to_current = false;
                for (int c : current)
                    if (std::binary_search(s.cell_neighbors(c).begin(), s.cell_neighbors(c).end(), x)) {
                        adjacent_to_current = true;
                        break;
                    }
                if (adjacent_to_current) continue;
                if (std::find(next.begin(), next.end(), x) == next.end()) next.push_back(x);
            }
            current.push_back(w);
            in_current[w] = 1;
            extend(root, std::move(next));
            in_current[w] = 0;
            current.pop_back();
        }
    };

    for (int root = 0; root < n; ++root) {
        current = {root};
        in_current[root] = 1;
        std::vector<int> ext;
        for (int x : s.cell_neighbors(root))
            if (x > root) ext.push_back(x);
        extend(root, ext);
        in_current[root] = 0;
    }
}

constexpr int kMaxExhaustiveVertices = 26;

}  // namespace

double star_inequality_lhs(const CellularSurface& s, const EdgeWeights& w, const std::vector<int>& subset) {
    StarEvaluator ev(s, w);
    return ev.evaluate(subset, false).lhs;
}

bool for_each_connected_subset(const CellularSurface& s, int bound,
                               const std::function<void(const std::vector<int>&)>& visit) {
    const int n = s.num_vertices();
    if (n <= bound && n <= kMaxExhaustiveVertices) {
        std::vector<std::uint32_t> adj(n, 0);
        for (int v = 0; v < n; ++v)
            for (int x : s.cell_neighbors(v)) adj[v] |= std::uint32_t{1} << x;
        std::vector<int> subset;
        const std::uint32_t total = n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
        for (std::uint32_t mask = 1; mask != 0 && mask <= total; ++mask) {
            // Flood fill from the lowest member.
            std::uint32_t seen = mask & (~mask + 1);
            std::uint32_t frontier = seen;
            while (frontier) {
                std::uint32_t grow = 0;
                for (std::uint32_t f = frontier; f; f &= f - 1) grow |= adj[__builtin_ctz(f)];
                grow &= mask & ~seen;
                seen |= grow;
                frontier = grow;
            }
            if (seen != mask) continue;
            subset.clear();
            for (std::uint32_t m = mask; m; m &= m - 1) subset.push_back(__builtin_ctz(m));
            visit(subset);
        }
        return true;
    }
    enumerate_connected(s, std::max(1, bound), visit);
    return false;
}

namespace {

ConditionReport subset_check(const CellularSurface& s, const EdgeWeights& w, int subset_bound, const char* kind,
                             bool skip_face_walks, ConditionReport rep) {
    StarEvaluator ev(s, w);
    // Face boundaries as sorted edge-use lists, for the H2 exclusion.
    std::vector<std::vector<int>> face_edges;
    if (skip_face_walks)
        for (int f = 0; f < s.num_faces(); ++f) {
            std::vector<int> es;
            for (const auto& u : s.face(f).boundary) es.push_back(u.edge);
            std::sort(es.begin(), es.end());
            face_edges.push_back(std::move(es));
        }
    std::size_t count = 0;
    const bool exhaustive = for_each_connected_subset(s, subset_bound, [&](const std::vector<int>& subset) {
        ++count;
        auto r = ev.evaluate(subset, skip_face_walks);
        if (r.lhs < 0.0) return;
        if (skip_face_walks) {
            std::vector<int> es;
            for (const auto& c : r.walk) es.push_back(s.face(c.face).boundary[c.pos].edge);
            std::sort(es.begin(), es.end());
            if (std::find(face_edges.begin(), face_edges.end(), es) != face_edges.end()) return;
        }
        std::string witness = subset_witness(s, subset) + " chi=" + std::to_string(r.euler) +
                              " walk=" + std::to_string(r.walk_length);
        rep.violations.push_back({kind, std::move(witness), r.lhs, 0.0});
    });
    rep.subsets_checked = count;
    rep.partial = !exhaustive;
    if (rep.partial)
        rep.notes.push_back("partial verification: connected subsets of size <= " + std::to_string(subset_bound));
    return rep;
}

void check_weight_count(const CellularSurface& s, const EdgeWeights& w) {
    if (static_cast<int>(w.size()) != s.num_edges()) throw WeightOutOfRange("weight count does not match edge count");
}

}  // namespace

ConditionReport check_origin_in_Y(const CellularSurface& s, const EdgeWeights& w, int subset_bound) {
    if (!s.is_triangulation()) throw NotATriangulation("origin-in-Y check needs a triangulation");
    check_weight_count(s, w);
    ConditionReport rep;
    rep.check = "origin_in_Y";
    rep.stats = surface_stats(s);
    for (int f = 0; f < s.num_faces(); ++f) {
        double sum = 0.0;
        for (const auto& u : s.face(f).boundary) sum += w[u.edge];
        if (!(sum < kPi)) rep.violations.push_back({"FaceAdmissibility", face_witness(s, f), sum, kPi});
    }
    rep = subset_check(s, w, subset_bound, "StarInequality", false, std::move(rep));
    rep.notes.push_back("k(v) < 2pi holds for the zero target at every vertex");
    return rep;
}

ConditionReport check_thurston(const CellularSurface& s, const EdgeWeights& w) {
    if (!s.is_triangulation()) throw NotATriangulation("Thurston check needs a triangulation");
    check_weight_count(s, w);
    for (int e = 0; e < s.num_edges(); ++e)
        if (!(w[e] >= 0.0 && w[e] <= kPi / 2.0))
            throw WeightOutOfRange("edge " + std::to_string(s.edge(e).id) + " weight " + format_double(w[e]) +
                                   " outside [0, pi/2]");
    ConditionReport rep;
    rep.check = "thurston";
    rep.stats = surface_stats(s);
    for (int f = 0; f < s.num_faces(); ++f) {
        double sum = 0.0;
        for (const auto& u : s.face(f).boundary) sum += w[u.edge];
        if (!(sum < kPi)) rep.violations.push_back({"ThreePath", face_witness(s, f), sum, kPi});
    }
    for (int e = 0; e < s.num_edges(); ++e) {
        const auto& uses = s.edge_uses(e);
        if (uses.size() != 2 || uses[0].face == uses[1].face) continue;
        double sum = 0.0;
        std::string witness = "edges";
        for (const auto& c : uses)
            for (int p = 1; p < 3; ++p) {
                const auto& u = s.face(c.face).boundary[(c.pos + p) % 3];
                sum += w[u.edge];
                witness += " " + std::to_string(s.edge(u.edge).id);
            }
        if (!(sum < 2.0 * kPi)) rep.violations.push_back({"FourPath", witness, sum, 2.0 * kPi});
    }
    rep.notes.push_back("closed paths restricted to face boundaries and adjacent face pairs");
    return rep;
}

ConditionReport check_pseudo_jordan(const CellularSurface& s, const EdgeWeights& w, int subset_bound) {
    check_weight_count(s, w);
    ConditionReport rep;
    rep.check = "pseudo_jordan";
    rep.stats = surface_stats(s);
    for (int f = 0; f < s.num_faces(); ++f) {
        double sum = 0.0;
        for (const auto& u : s.face(f).boundary) sum += w[u.edge];
        const double rhs = (s.face_size(f) - 2) * kPi;
        if (!(sum < rhs)) rep.violations.push_back({"FaceBoundary", face_witness(s, f), sum, rhs});
    }
    return subset_check(s, w, subset_bound, "StarInequality", false, std::move(rep));
}

ConditionReport check_ideal(const CellularSurface& s, const EdgeWeights& w, int subset_bound) {
    check_weight_count(s, w);
    for (int e = 0; e < s.num_edges(); ++e)
        if (!(w[e] > 0.0 && w[e] < kPi))
            throw WeightOutOfRange("edge " + std::to_string(s.edge(e).id) + " weight " + format_double(w[e]) +
                                   " outside (0, pi)");
    ConditionReport rep;
    rep.check = "ideal";
    rep.stats = surface_stats(s);
    for (int f = 0; f < s.num_faces(); ++f) {
        double sum = 0.0;
        for (const auto& u : s.face(f).boundary) sum += w[u.edge];
        const double rhs = (s.face_size(f) - 2) * kPi;
        if (std::abs(sum - rhs) > kIdealEqualityTolerance) rep.violations.push_back({"H1", face_witness(s, f), sum, rhs});
    }
    return subset_check(s, w, subset_bound, "H2", true, std::move(rep));
}

std::string format_report(const ConditionReport& r) {
    std::ostringstream os;
    os << "check: " << r.check << "\n";
    os << "verdict: " << (r.pass() ? "pass" : "fail") << "\n";
    const auto& st = r.stats;
    os << "surface: V=" << st.vertices << " E=" << st.edges << " F=" << st.faces << " chi=" << st.euler
       << " genus=" << st.genus << " triangulation=" << (st.triangulation ? "yes" : "no") << "\n";
    os << "deformation dof (2|E|-3|F|): " << st.deformation_dof << "\n";
    if (r.subsets_checked > 0)
        os << "subsets checked: " << r.subsets_checked << (r.partial ? " (partial)" : " (exhaustive)") << "\n";
    for (const auto& v : r.violations)
        os << "violation " << v.kind << " " << v.witness << " lhs=" << format_double(v.lhs)
           << " rhs=" << format_double(v.rhs) << "\n";
    for (const auto& n : r.notes) os << "note: " << n << "\n";
    return os.str();
}

}  // namespace circlepat
