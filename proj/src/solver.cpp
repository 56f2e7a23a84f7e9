#include "circlepat/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "circlepat/configurations.hpp"
#include "circlepat/errors.hpp"
#include "circlepat/hypgeo.hpp"

namespace circlepat {

const char* mode_name(PatternMode m) { return m == PatternMode::Ideal ? "ideal" : "triangulated"; }

std::vector<double> radii_to_u(const std::vector<double>& radii) {
    std::vector<double> u(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) u[i] = radius_to_u(radii[i]);
    return u;
}

std::vector<double> u_to_radii(const std::vector<double>& u) {
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = u_to_radius(u[i]);
    return r;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

namespace {

void check_sizes(const CellularSurface& s, const EdgeWeights& w, std::size_t nv) {
    if (static_cast<int>(w.size()) != s.num_edges()) throw WeightOutOfRange("weight count does not match edge count");
    if (static_cast<int>(nv) != s.num_vertices()) throw RangeError("radius count does not match vertex count");
}

ThreeCircleInput face_input(const CellularSurface& s, const EdgeWeights& w, const std::vector<double>& radii, int f,
                            std::array<int, 3>& verts) {
    ThreeCircleInput in;
    const auto& b = s.face(f).boundary;
    for (int k = 0; k < 3; ++k) {
        verts[k] = s.tail(b[k]);
        in.r[k] = radii[verts[k]];
        in.theta[k] = w[b[(k + 1) % 3].edge];
    }
    return in;
}

template <class Fn>
void for_each_triangle(const CellularSurface& s, const EdgeWeights& w, const std::vector<double>& radii, Fn fn) {
    if (!s.is_triangulation()) throw NotATriangulation("surface " + s.name() + " is not a triangulation");
    check_sizes(s, w, radii.size());
    for (int f = 0; f < s.num_faces(); ++f) {
        std::array<int, 3> verts{};
        const auto in = face_input(s, w, radii, f, verts);
        try {
            fn(f, verts, in);
        } catch (const TriangleInequalityViolation& e) {
            throw TriangleInequalityViolation("face " + std::to_string(s.face(f).id) + ": " + e.what());
        }
    }
}

// Calls fn(f, p, a, b, input) for every edge use of every face.
template <class Fn>
void for_each_kite(const CellularSurface& s, const EdgeWeights& w, const std::vector<double>& radii, Fn fn) {
    check_sizes(s, w, radii.size());
    for (int f = 0; f < s.num_faces(); ++f) {
        const auto& b = s.face(f).boundary;
        for (int p = 0; p < static_cast<int>(b.size()); ++p) {
            const int a = s.tail(b[p]);
            const int c = s.head(b[p]);
            fn(f, p, a, c, TwoCircleInput{radii[a], radii[c], w[b[p].edge]});
        }
    }
}

}  // namespace

std::vector<std::vector<double>> corner_angles(const CellularSurface& s, const EdgeWeights& w,
                                               const std::vector<double>& radii) {
    std::vector<std::vector<double>> out(s.num_faces());
    for_each_triangle(s, w, radii, [&](int f, const std::array<int, 3>&, const ThreeCircleInput& in) {
        const auto a = three_circle_angles(in);
        out[f].assign(a.angle.begin(), a.angle.end());
    });
    return out;
}

std::vector<double> curvature(const CellularSurface& s, const EdgeWeights& w, const std::vector<double>& radii) {
    std::vector<double> k(s.num_vertices(), 2.0 * kPi);
    for_each_triangle(s, w, radii, [&](int, const std::array<int, 3>& v, const ThreeCircleInput& in) {
        const auto a = three_circle_angles(in);
        for (int c = 0; c < 3; ++c) k[v[c]] -= a.angle[c];
    });
    return k;
}

Eigen::SparseMatrix<double> curvature_jacobian_u(const CellularSurface& s, const EdgeWeights& w,
                                                 const std::vector<double>& u) {
    const auto radii = u_to_radii(u);
    std::vector<Eigen::Triplet<double>> trip;
    for_each_triangle(s, w, radii, [&](int, const std::array<int, 3>& v, const ThreeCircleInput& in) {
        const Eigen::Matrix3d g = angle_gradient_u(in);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) trip.emplace_back(v[a], v[b], -g(a, b));
    });
    Eigen::SparseMatrix<double> J(s.num_vertices(), s.num_vertices());
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

std::vector<std::vector<double>> ideal_corner_angles(const CellularSurface& s, const EdgeWeights& w,
                                                     const std::vector<double>& radii) {
    std::vector<std::vector<double>> out(s.num_faces());
    for (int f = 0; f < s.num_faces(); ++f) out[f].assign(s.face_size(f), 0.0);
    for_each_kite(s, w, radii, [&](int f, int p, int, int, const TwoCircleInput& in) {
        const auto a = two_circle_angles(in);
        const int m = s.face_size(f);
        out[f][p] += a.at_i;
        out[f][(p + 1) % m] += a.at_j;
    });
    return out;
}

std::vector<double> ideal_curvature(const CellularSurface& s, const EdgeWeights& w, const std::vector<double>& radii) {
    std::vector<double> k(s.num_vertices(), 2.0 * kPi);
    for_each_kite(s, w, radii, [&](int, int, int a, int c, const TwoCircleInput& in) {
        const auto ang = two_circle_angles(in);
        k[a] -= ang.at_i;
        k[c] -= ang.at_j;
    });
    return k;
}

Eigen::SparseMatrix<double> ideal_curvature_jacobian_u(const CellularSurface& s, const EdgeWeights& w,
                                                       const std::vector<double>& u) {
    const auto radii = u_to_radii(u);
    std::vector<Eigen::Triplet<double>> trip;
    for_each_kite(s, w, radii, [&](int, int, int a, int c, const TwoCircleInput& in) {
        const Eigen::Matrix2d g = two_circle_gradient_u(in);
        const int v[2] = {a, c};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) trip.emplace_back(v[i], v[j], -g(i, j));
    });
    Eigen::SparseMatrix<double> J(s.num_vertices(), s.num_vertices());
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

namespace {

// u of the radius cap; larger u means a larger radius.
double u_cap() {
    static const double cap = radius_to_u(kMaxRadius);
    return cap;
}

double sum_squares(const std::vector<double>& k) {
    double s = 0.0;
    for (double x : k) s += x * x;
    return s;
}

template <class CurvFn, class JacFn>
PatternSolution newton(const CellularSurface& s, const SolveOptions& opts, PatternMode mode, CurvFn curv, JacFn jac) {
    const int n = s.num_vertices();
    std::vector<double> u(n, radius_to_u(1.0));
    if (!opts.init_radii.empty()) {
        if (static_cast<int>(opts.init_radii.size()) != n) throw RangeError("initial radius count does not match");
        u = radii_to_u(opts.init_radii);
    }
    auto valid = [&](const std::vector<double>& x) {
        for (double v : x)
            if (!(v >= opts.u_floor) || !(v < u_cap())) return false;
        return true;
    };
    auto degenerate = [&](const std::vector<double>& x, int iter) {
        std::vector<int> bad;
        for (int v = 0; v < n; ++v)
            if (!(x[v] >= opts.u_floor) || !(x[v] < u_cap())) bad.push_back(v);
        std::ostringstream os;
        os << "radii degenerate after " << iter << " steps at vertices";
        for (int v : bad) os << " " << s.vertex_id(v);
        return DegenerationDetected(os.str(), bad);
    };

    PatternSolution sol;
    sol.mode = mode;
    std::vector<double> k = curv(u_to_radii(u));
    double res = max_abs(k);
    sol.history.push_back(res);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    bool pattern_known = false;

    int iter = 0;
    while (res > opts.tol) {
        if (iter >= opts.max_iter) {
            std::ostringstream os;
            os << "no convergence after " << iter << " steps, residual " << res;
            throw NonConvergence(os.str(), iter, res);
        }
        ++iter;
        const double f0 = sum_squares(k);
        bool accepted = false;

        Eigen::SparseMatrix<double> J = jac(u);
        if (!pattern_known) {
            ldlt.analyzePattern(J);
            pattern_known = true;
        }
        ldlt.factorize(J);
        if (ldlt.info() == Eigen::Success) {
            const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(k.data(), n);
            const Eigen::VectorXd step = ldlt.solve(rhs);
            if (step.allFinite()) {
                double t = 1.0;
                for (int ls = 0; ls < 30 && !accepted; ++ls, t *= 0.5) {
                    std::vector<double> trial(n);
                    for (int v = 0; v < n; ++v) trial[v] = u[v] + t * step[v];
                    if (!valid(trial)) continue;
                    std::vector<double> kt;
                    try {
                        kt = curv(u_to_radii(trial));
                    } catch (const Error&) {
                        continue;
                    }
                    const double f1 = sum_squares(kt);
                    if (f1 < (1.0 - 1e-4 * t) * f0 || max_abs(kt) <= opts.tol) {
                        u = std::move(trial);
                        k = std::move(kt);
                        accepted = true;
                    }
                }
            }
        }
        if (!accepted) {
            // Flow step u' = -k.
            for (int v = 0; v < n; ++v) u[v] -= opts.flow_step * k[v];
            ++sol.flow_steps;
            if (!valid(u)) throw degenerate(u, iter);
            k = curv(u_to_radii(u));
        }
        res = max_abs(k);
        sol.history.push_back(res);
    }
    sol.radii = u_to_radii(u);
    sol.curvature = std::move(k);
    sol.residual = res;
    sol.iterations = iter;
    return sol;
}

}  // namespace

PatternSolution solve(const CellularSurface& s, const EdgeWeights& w, const SolveOptions& opts) {
    require_valid(s, true);
    if (static_cast<int>(w.size()) != s.num_edges()) throw WeightOutOfRange("weight count does not match edge count");
    if (opts.check_conditions) {
        const auto rep = check_origin_in_Y(s, w, opts.subset_bound);
        if (!rep.pass())
            throw ConditionNotMet("solvability condition fails: " + rep.violations.front().kind + " " +
                                  rep.violations.front().witness);
    }
    auto sol = newton(
        s, opts, PatternMode::Triangulated, [&](const std::vector<double>& r) { return curvature(s, w, r); },
        [&](const std::vector<double>& u) { return curvature_jacobian_u(s, w, u); });
    sol.corner_angles = corner_angles(s, w, sol.radii);
    return sol;
}

PatternSolution solve_ideal(const CellularSurface& s, const EdgeWeights& w, const SolveOptions& opts) {
    require_valid(s, false);
    if (static_cast<int>(w.size()) != s.num_edges()) throw WeightOutOfRange("weight count does not match edge count");
    for (int e = 0; e < s.num_edges(); ++e)
        if (!(w[e] > 0.0 && w[e] < kPi))
            throw WeightOutOfRange("edge " + std::to_string(s.edge(e).id) + " weight outside (0, pi)");
    if (opts.check_conditions) {
        const auto rep = check_ideal(s, w, opts.subset_bound);
        if (!rep.pass())
            throw ConditionNotMet("ideal hypotheses fail: " + rep.violations.front().kind + " " +
                                  rep.violations.front().witness);
    }
    auto sol = newton(
        s, opts, PatternMode::Ideal, [&](const std::vector<double>& r) { return ideal_curvature(s, w, r); },
        [&](const std::vector<double>& u) { return ideal_curvature_jacobian_u(s, w, u); });
    sol.corner_angles = ideal_corner_angles(s, w, sol.radii);
    return sol;
}

}  // namespace circlepat
