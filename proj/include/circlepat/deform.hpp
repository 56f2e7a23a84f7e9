#pragma once

// Hexagonal cookie-cutter packings glued into faces, and refinement runs.
//
// A region for a face with corners v_0 .. v_{m-1} is a counterclockwise
// polygon with m corners. Side i (corner i to corner i+1) stands for the
// circle of v_i; corner i stands for the edge [v_{i-1}, v_i].

#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "circlepat/solver.hpp"
#include "circlepat/surface.hpp"

namespace circlepat {

struct PlanarRegion {
    std::vector<std::complex<double>> corners;  // counterclockwise
};

struct CookiePacking {
    int n = 0;
    double disk_radius = 0.0;  // 1/n
    std::vector<std::complex<double>> centers;
    std::vector<std::pair<int, int>> lattice;  // (i, j) lattice coordinates per disk
    std::vector<std::pair<int, int>> edges;    // tangencies, i < j
    std::vector<std::array<int, 3>> triangles;  // counterclockwise
    std::vector<int> boundary;                 // counterclockwise cycle of disk indices
    // Per boundary position: side index, and for corner disks the second
    // (preceding) side; -1 otherwise.
    std::vector<int> side;
    std::vector<int> corner_side;
    std::vector<int> corner_disk;  // per polygon corner, position in `boundary`
    int interior_disks = 0;
};

// Disks of radius 1/n centered on the hexagonal lattice (spacing 2/n, one
// lattice point at the region centroid) whose closed disk meets the region.
CookiePacking cookie_cutter(const PlanarRegion& region, int n);

struct GluedProblem {
    CellularSurface surface;
    EdgeWeights weights;
    int original_vertices = 0;  // vertex indices below this are original
    int original_edges = 0;     // edge indices below this are original
    // Per new vertex (index - original_vertices): hosting face id and lattice coordinates.
    struct Origin {
        int face_id = 0;
        int i = 0;
        int j = 0;
    };
    std::vector<Origin> provenance;
    // Per new face: hosting face id.
    std::vector<int> face_host;
    int original_faces_kept = 0;  // leading faces copied from the input
    // Per glued face id: new face indices of its corner triangles (per polygon corner).
    std::map<int, std::vector<int>> corner_faces;
};

GluedProblem glue(const CellularSurface& s, const EdgeWeights& w,
                  const std::vector<std::pair<int, CookiePacking>>& packings);

struct DeformOptions {
    double tol = 1e-10;
    int max_iter = 200;
    int subset_bound = kDefaultSubsetBound;   // gate on the input surface
    int glued_subset_bound = 2;               // partial gate on the glued surface
};

struct InterstitialProxy {
    int face_id = 0;
    std::vector<std::complex<double>> corners;  // normalized: corner 0 at 0, corner 1 on the positive axis
    bool has_cross_ratio = false;
    std::complex<double> cross_ratio{0.0, 0.0};
};

struct DeformResult {
    int n = 0;
    GluedProblem glued;
    PatternSolution full;
    PatternSolution restricted;
    double min_radius = 0.0;
    std::vector<InterstitialProxy> proxies;
};

// regions: face id -> region. Every non-triangular face needs a region;
// triangular faces may have one.
DeformResult deform_solve(const CellularSurface& s, const EdgeWeights& w, const std::map<int, PlanarRegion>& regions,
                          int n, const DeformOptions& opts = {});

struct RefinementRow {
    int n = 0;
    int vertices = 0;
    int iterations = 0;
    double residual = 0.0;
    double min_radius = 0.0;
    std::vector<double> radii;  // restricted
    std::vector<InterstitialProxy> proxies;
    double radius_difference = -1.0;  // max |r_n - r_prev|, -1 for the first row
    double proxy_difference = -1.0;
};

struct RefinementReport {
    std::vector<RefinementRow> rows;
    bool strictly_decreasing = true;  // successive radius differences
    bool within_slack = true;         // d_{k+1} <= 1.5 d_k
    std::string format() const;
};

inline constexpr double kRefinementSlack = 1.5;

RefinementReport refinement_experiment(const CellularSurface& s, const EdgeWeights& w,
                                       const std::map<int, PlanarRegion>& regions, const std::vector<int>& n_list,
                                       const DeformOptions& opts = {});

}  // namespace circlepat
