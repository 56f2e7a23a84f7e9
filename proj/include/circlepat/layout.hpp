#pragma once

// Developing a solved pattern into the Poincare disk, geometric checks on the
// developed picture, and SVG output.

#include <string>
#include <vector>

#include "circlepat/hypgeo.hpp"
#include "circlepat/solver.hpp"
#include "circlepat/surface.hpp"

namespace circlepat {

struct PlacedFace {
    int face = -1;
    std::vector<int> vertices;       // corner vertex indices
    std::vector<DiskPoint> centers;  // per corner
    std::vector<int> circles;        // index into DiskLayout::circles, per corner
    DiskAutomorphism frame;          // local face frame -> disk
    int parent = -1;                 // placed-face index it was attached to, -1 for the root
    int parent_pos = -1;             // position in this face of the shared edge
    bool collar = false;             // copy outside the fundamental domain
    DiskPoint ideal_point{0.0, 0.0};  // ideal mode only
};

struct PlacedCircle {
    int vertex = -1;
    int copy = 0;
    HypCircle circle;
    bool collar = false;
};

// Adjacent circle pair realizing one edge use of a placed face.
struct PlacedEdge {
    int edge = -1;
    int c0 = -1;
    int c1 = -1;
    double theta = 0.0;
    bool collar = false;
};

struct DiskLayout {
    PatternMode mode = PatternMode::Triangulated;
    std::vector<PlacedFace> faces;
    std::vector<PlacedCircle> circles;
    std::vector<PlacedEdge> edges;
    std::vector<std::pair<int, int>> tree;  // (parent face id, child face id)
    std::vector<double> vertex_holonomy;    // per vertex index, -1 when not measured
    double holonomy_residual = 0.0;
    double edge_length_defect = 0.0;
    double pattern_residual = 0.0;
};

struct DevelopOptions {
    double max_residual = 1e-8;
    bool check_residual = true;
    int root_face = 0;           // face index
    std::vector<char> face_mask;  // empty: all faces
    bool collar = true;
    double merge_tolerance = 1e-9;
};

DiskLayout develop(const CellularSurface& s, const EdgeWeights& w, const std::vector<double>& radii, PatternMode mode,
                   const DevelopOptions& opts = {});
DiskLayout develop(const CellularSurface& s, const EdgeWeights& w, const PatternSolution& sol,
                   const DevelopOptions& opts = {});

struct AngleReport {
    int checked = 0;
    double max_deviation = 0.0;
    std::vector<std::string> mismatches;
    bool pass() const { return mismatches.empty(); }
};

// Exterior angle of two Euclidean circles from their centers and radii.
double euclidean_exterior_angle(const EuclideanCircle& a, const EuclideanCircle& b);

AngleReport verify_intersection_angles(const DiskLayout& layout, double tol = 1e-8);

struct ContactReport {
    int lenses = 0;
    std::vector<std::string> swallowed;  // edge lenses inside a third disk
    int unexpected_overlaps = 0;         // informational
    bool pass() const { return swallowed.empty(); }
};

ContactReport verify_primitive_contact(const DiskLayout& layout);

struct IncidenceReport {
    int faces = 0;
    double max_spread = 0.0;
    std::vector<double> spread;            // per placed domain face
    std::vector<DiskPoint> ideal_points;   // mean candidate per placed domain face
    bool pass(double tol = 1e-6) const { return max_spread <= tol; }
};

IncidenceReport verify_ideal_incidence(const DiskLayout& layout);

// Intersection points of two Euclidean circles; empty when disjoint.
std::vector<std::complex<double>> circle_intersections(const EuclideanCircle& a, const EuclideanCircle& b);

struct SvgOptions {
    bool labels = false;
    bool shade = false;
    bool collar = false;
};

std::string emit_svg(const DiskLayout& layout, const CellularSurface* s = nullptr, const SvgOptions& opts = {});

}  // namespace circlepat
