#pragma once

// Cellular decompositions of closed oriented surfaces, given as faces whose
// boundaries are cyclic sequences of oriented edge uses (a rotation system),
// together with the solvability checkers that act on them.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace circlepat {

struct Edge {
    int id = 0;
    int v0 = 0;  // vertex index
    int v1 = 0;
};

// One traversal of an edge inside a face boundary.
struct EdgeUse {
    int edge = 0;
    bool forward = true;  // true: v0 -> v1
};

struct Face {
    int id = 0;
    std::vector<EdgeUse> boundary;  // counterclockwise, face on the left
};

// Face corner: the vertex at the start of boundary[pos].
struct Corner {
    int face = 0;
    int pos = 0;
};

// Exterior intersection angle per edge index.
using EdgeWeights = std::vector<double>;

class CellularSurface {
public:
    CellularSurface() = default;
    // Vertices, edges and faces are addressed by dense indices internally;
    // the ids are the labels used in files and reports.
    CellularSurface(std::string name, std::vector<int> vertex_ids, std::vector<Edge> edges, std::vector<Face> faces);

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    int num_vertices() const { return static_cast<int>(vertex_ids_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_faces() const { return static_cast<int>(faces_.size()); }

    int vertex_id(int v) const { return vertex_ids_[v]; }
    const std::vector<int>& vertex_ids() const { return vertex_ids_; }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Face& face(int f) const { return faces_[f]; }
    const std::vector<Face>& faces() const { return faces_; }

    // Index lookup by id; -1 when absent.
    int vertex_index(int id) const;
    int edge_index(int id) const;
    int face_index(int id) const;

    int tail(const EdgeUse& u) const { return u.forward ? edges_[u.edge].v0 : edges_[u.edge].v1; }
    int head(const EdgeUse& u) const { return u.forward ? edges_[u.edge].v1 : edges_[u.edge].v0; }

    int face_size(int f) const { return static_cast<int>(faces_[f].boundary.size()); }
    int corner_vertex(int f, int pos) const { return tail(faces_[f].boundary[pos]); }
    std::vector<int> face_vertices(int f) const;

    int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }
    // (2 - chi) / 2; meaningful only for valid closed surfaces.
    int genus() const { return (2 - euler_characteristic()) / 2; }
    bool is_triangulation() const;

    // All uses of edge e as (face, position).
    const std::vector<Corner>& edge_uses(int e) const { return edge_uses_[e]; }
    // Corners whose vertex is v, in face order (not rotation order).
    const std::vector<Corner>& vertex_corners(int v) const { return vertex_corners_[v]; }
    // Edge indices incident to v (each multi-edge listed once).
    const std::vector<int>& vertex_edges(int v) const { return vertex_edges_[v]; }
    // The use of the same edge in the other face; requires a valid surface.
    Corner partner(int f, int pos) const;
    // Corners around v in rotation order; requires a valid surface.
    std::vector<Corner> rotation(int v) const;

    // Vertices sharing an edge or a face with v (excluding v).
    const std::vector<int>& cell_neighbors(int v) const { return cell_neighbors_[v]; }

private:
    std::string name_;
    std::vector<int> vertex_ids_;
    std::vector<Edge> edges_;
    std::vector<Face> faces_;
    std::vector<std::vector<Corner>> edge_uses_;
    std::vector<std::vector<Corner>> vertex_corners_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<std::vector<int>> cell_neighbors_;
};

struct Violation {
    std::string kind;
    std::string witness;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct SurfaceStats {
    int vertices = 0;
    int edges = 0;
    int faces = 0;
    int euler = 0;
    int genus = 0;
    // 2|E| - 3|F| = sum over faces of (size - 3)
    int deformation_dof = 0;
    bool triangulation = false;
};

struct ConditionReport {
    std::string check;
    std::vector<Violation> violations;
    SurfaceStats stats;
    bool partial = false;
    std::size_t subsets_checked = 0;
    std::vector<std::string> notes;

    bool pass() const { return violations.empty(); }
};

SurfaceStats surface_stats(const CellularSurface& s);

// Structural validation. Never throws; every problem becomes a violation.
ConditionReport validate(const CellularSurface& s, bool require_triangulation = false);
// Throws InvalidSurface carrying the first violation when validate fails.
void require_valid(const CellularSurface& s, bool require_triangulation = false);

struct StarClosure {
    std::vector<int> vertices;
    std::vector<int> edges;
    std::vector<int> faces;
    int euler = 0;
    int components = 0;
};

// Open cells with at least one vertex in `subset` (vertex indices).
StarClosure star_closure(const CellularSurface& s, const std::vector<int>& subset);

struct LinkPair {
    int edge = 0;
    int vertex = 0;
    int face = 0;
};

// Pairs (e, v) with v in the subset, e's endpoints outside it, and e, v
// spanning a triangle. Throws NotATriangulation.
std::vector<LinkPair> link_pairs(const CellularSurface& s, const std::vector<int>& subset);

// Edge uses bounding the star closure: edges of faces touching the subset
// whose endpoints both lie outside it, once per face use. For a triangulation
// these are exactly the link pairs.
std::vector<Corner> boundary_walk(const CellularSurface& s, const std::vector<int>& subset);

// sum over the boundary walk of (theta - pi) + 2 pi chi(CK(subset)).
double star_inequality_lhs(const CellularSurface& s, const EdgeWeights& w, const std::vector<int>& subset);

inline constexpr int kDefaultSubsetBound = 12;

// Visits every non-empty vertex subset whose star closure is connected:
// all of them when |V| <= bound, else those of size <= bound (partial).
// Returns true when the enumeration was exhaustive.
bool for_each_connected_subset(const CellularSurface& s, int bound,
                               const std::function<void(const std::vector<int>&)>& visit);

// Zero curvature target lies in the image of the curvature map: per-face
// admissibility plus sum (theta - pi) + 2 pi chi(CK(V0)) < 0 on connected V0.
ConditionReport check_origin_in_Y(const CellularSurface& s, const EdgeWeights& w,
                                  int subset_bound = kDefaultSubsetBound);

// Non-obtuse conditions on closed 3- and 4-edge paths, restricted to face
// boundaries and boundaries of two adjacent faces.
ConditionReport check_thurston(const CellularSurface& s, const EdgeWeights& w);

// Strict pseudo-Jordan inequality for general cellular surfaces: every face
// boundary and every simply connected star-closure boundary.
ConditionReport check_pseudo_jordan(const CellularSurface& s, const EdgeWeights& w,
                                    int subset_bound = kDefaultSubsetBound);

// Ideal pattern hypotheses: equality on face boundaries, strict inequality
// on other boundary walks.
ConditionReport check_ideal(const CellularSurface& s, const EdgeWeights& w,
                            int subset_bound = kDefaultSubsetBound);

inline constexpr double kIdealEqualityTolerance = 1e-12;

std::string format_report(const ConditionReport& r);

}  // namespace circlepat
