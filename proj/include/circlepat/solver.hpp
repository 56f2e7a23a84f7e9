#pragma once

// Curvature map and the Newton solver driving it to zero, for triangulated
// patterns (three-circle faces) and ideal patterns (every face split into
// two-circle triangles around its ideal point).

#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "circlepat/surface.hpp"

namespace circlepat {

enum class PatternMode { Triangulated, Ideal };

const char* mode_name(PatternMode m);

struct PatternSolution {
    std::vector<double> radii;      // per vertex index
    std::vector<double> curvature;  // per vertex index
    double residual = 0.0;          // max |k(v)|
    // corner_angles[f][p]: angle of face f at corner p.
    std::vector<std::vector<double>> corner_angles;
    int iterations = 0;
    int flow_steps = 0;
    std::vector<double> history;  // residual after every step, starting with the initial one
    PatternMode mode = PatternMode::Triangulated;
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 200;
    std::vector<double> init_radii;  // empty: all radii 1
    double u_floor = -30.0;
    double flow_step = 0.1;
    // Run the solvability checker first and refuse on failure.
    bool check_conditions = true;
    int subset_bound = kDefaultSubsetBound;
};

// k(v) = 2 pi - sum of the inner angles at v.
std::vector<double> curvature(const CellularSurface& s, const EdgeWeights& w, const std::vector<double>& radii);
std::vector<std::vector<double>> corner_angles(const CellularSurface& s, const EdgeWeights& w,
                                               const std::vector<double>& radii);
// J(v, w) = d k(v) / d u(w)
Eigen::SparseMatrix<double> curvature_jacobian_u(const CellularSurface& s, const EdgeWeights& w,
                                                 const std::vector<double>& u);

// Ideal mode: each face corner of v contributes the angles at v of the two
// triangles (c_v, c_x, P_f) over the face edges at v.
std::vector<double> ideal_curvature(const CellularSurface& s, const EdgeWeights& w, const std::vector<double>& radii);
std::vector<std::vector<double>> ideal_corner_angles(const CellularSurface& s, const EdgeWeights& w,
                                                     const std::vector<double>& radii);
Eigen::SparseMatrix<double> ideal_curvature_jacobian_u(const CellularSurface& s, const EdgeWeights& w,
                                                       const std::vector<double>& u);

PatternSolution solve(const CellularSurface& s, const EdgeWeights& w, const SolveOptions& opts = {});
PatternSolution solve_ideal(const CellularSurface& s, const EdgeWeights& w, const SolveOptions& opts = {});

std::vector<double> radii_to_u(const std::vector<double>& radii);
std::vector<double> u_to_radii(const std::vector<double>& u);

double max_abs(const std::vector<double>& v);

}  // namespace circlepat
