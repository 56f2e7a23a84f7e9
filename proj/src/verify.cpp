#include "circlepat/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "circlepat/configurations.hpp"
#include "circlepat/errors.hpp"
#include "circlepat/hypgeo.hpp"
#include "circlepat/io.hpp"
#include "circlepat/layout.hpp"
#include "circlepat/solver.hpp"

namespace circlepat {

std::uint64_t sample_seed(std::uint64_t seed, const std::string& property, int index) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : property) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::uint64_t z = seed ^ h ^ (static_cast<std::uint64_t>(index) * 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

using Rng = std::mt19937_64;
using Outcome = std::optional<std::string>;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
double log_uniform(Rng& rng, double a, double b) { return std::exp(uniform(rng, std::log(a), std::log(b))); }

std::string fmt(double x) { return format_roundtrip(x); }

ThreeCircleInput random_three(Rng& rng) {
    ThreeCircleInput in;
    for (auto& r : in.r) r = log_uniform(rng, 0.05, 5.0);
    do {
        for (auto& t : in.theta) t = uniform(rng, 0.0, kPi);
    } while (!admissible_three(in.theta[0], in.theta[1], in.theta[2]));
    return in;
}

std::string describe(const ThreeCircleInput& in) {
    return "r=(" + fmt(in.r[0]) + "," + fmt(in.r[1]) + "," + fmt(in.r[2]) + ") theta=(" + fmt(in.theta[0]) + "," +
           fmt(in.theta[1]) + "," + fmt(in.theta[2]) + ")";
}

TwoCircleInput random_two(Rng& rng) {
    return {log_uniform(rng, 0.05, 5.0), log_uniform(rng, 0.05, 5.0), uniform(rng, 0.05, kPi - 0.05)};
}

std::string describe(const TwoCircleInput& in) {
    return "r=(" + fmt(in.r_i) + "," + fmt(in.r_j) + ") theta=" + fmt(in.theta_k);
}

// Five-point differences in u of the three angles.
Eigen::Matrix3d fd_three(const ThreeCircleInput& in, double h) {
    Eigen::Matrix3d out;
    for (int b = 0; b < 3; ++b) {
        const double u = radius_to_u(in.r[b]);
        auto at = [&](double step) {
            auto x = in;
            x.r[b] = u_to_radius(u + step);
            return three_circle_angles(x).angle;
        };
        const auto p1 = at(h), m1 = at(-h), p2 = at(2.0 * h), m2 = at(-2.0 * h);
        for (int a = 0; a < 3; ++a) out(a, b) = (8.0 * (p1[a] - m1[a]) - (p2[a] - m2[a])) / (12.0 * h);
    }
    return out;
}

Eigen::Matrix2d fd_two(const TwoCircleInput& in, double h) {
    Eigen::Matrix2d out;
    for (int b = 0; b < 2; ++b) {
        const double u = radius_to_u(b == 0 ? in.r_i : in.r_j);
        auto at = [&](double step) {
            auto x = in;
            (b == 0 ? x.r_i : x.r_j) = u_to_radius(u + step);
            const auto t = two_circle_angles(x);
            return std::array<double, 2>{t.at_i, t.at_j};
        };
        const auto p1 = at(h), m1 = at(-h), p2 = at(2.0 * h), m2 = at(-2.0 * h);
        for (int a = 0; a < 2; ++a) out(a, b) = (8.0 * (p1[a] - m1[a]) - (p2[a] - m2[a])) / (12.0 * h);
    }
    return out;
}

// Entrywise difference relative to the largest entry of the analytic matrix.
double matrix_relative_error(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& numeric) {
    const double scale = std::max(analytic.cwiseAbs().maxCoeff(), 1e-300);
    return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

struct Context {
    const VerifyInstances& inst;
    double tol_scale;
};

using Property = std::function<Outcome(Rng&, const Context&)>;

struct PropertyDef {
    std::string suite;
    std::string name;
    Property run;
};

EdgeWeights random_admissible_weights(Rng& rng, const CellularSurface& s) {
    for (;;) {
        EdgeWeights w(s.num_edges());
        for (auto& x : w) x = uniform(rng, 0.0, 1.0);
        if (check_origin_in_Y(s, w).pass()) return w;
    }
}

std::vector<double> random_radii(Rng& rng, int n, double lo, double hi) {
    std::vector<double> r(n);
    for (auto& x : r) x = log_uniform(rng, lo, hi);
    return r;
}

std::string describe_weights(const EdgeWeights& w) {
    std::string out = "theta=[";
    for (std::size_t i = 0; i < w.size(); ++i) out += (i ? "," : "") + fmt(w[i]);
    return out + "]";
}

std::string describe_radii(const std::vector<double>& r) {
    std::string out = "radii=[";
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + fmt(r[i]);
    return out + "]";
}

double max_u_difference(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(radius_to_u(a[i]) - radius_to_u(b[i])));
    return m;
}

DiskAutomorphism random_automorphism(Rng& rng) {
    return {std::polar(std::sqrt(uniform(rng, 0.0, 0.81)), uniform(rng, -kPi, kPi)), uniform(rng, -kPi, kPi)};
}

DiskPoint random_point(Rng& rng, double max_abs = 0.95) {
    return std::polar(max_abs * std::sqrt(uniform(rng, 0.0, 1.0)), uniform(rng, -kPi, kPi));
}

std::vector<PropertyDef> all_properties() {
    std::vector<PropertyDef> p;

    // configurations
    p.push_back({"config", "three_gradient_symmetry", [](Rng& rng, const Context& c) -> Outcome {
                     const auto in = random_three(rng);
                     const auto g = angle_gradient_u(in);
                     const double defect = (g - g.transpose()).cwiseAbs().maxCoeff();
                     if (defect <= 1e-6 * c.tol_scale) return std::nullopt;
                     return describe(in) + " symmetry defect " + fmt(defect);
                 }});
    p.push_back({"config", "three_gradient_fd", [](Rng& rng, const Context& c) -> Outcome {
                     const auto in = random_three(rng);
                     const double err = matrix_relative_error(angle_gradient_u(in), fd_three(in, 1e-4));
                     if (err <= 1e-5 * c.tol_scale) return std::nullopt;
                     return describe(in) + " relative error " + fmt(err);
                 }});
    p.push_back({"config", "three_sign_pattern", [](Rng& rng, const Context&) -> Outcome {
                     const auto in = random_three(rng);
                     const auto g = angle_gradient_u(in);
                     for (int a = 0; a < 3; ++a) {
                         if (!(g(a, a) < 0.0)) return describe(in) + " diagonal not negative";
                         for (int b = 0; b < 3; ++b)
                             if (a != b && !(g(a, b) > 0.0)) return describe(in) + " off-diagonal not positive";
                     }
                     for (int b = 0; b < 3; ++b)
                         if (!(g.col(b).sum() < 0.0)) return describe(in) + " angle sum not decreasing";
                     return std::nullopt;
                 }});
    p.push_back({"config", "two_gradient_fd", [](Rng& rng, const Context& c) -> Outcome {
                     const auto in = random_two(rng);
                     const auto g = two_circle_gradient_u(in);
                     const double err = matrix_relative_error(g, fd_two(in, 1e-4));
                     const double sym = std::abs(g(0, 1) - g(1, 0));
                     if (err <= 1e-5 * c.tol_scale && sym <= 1e-6 * c.tol_scale) return std::nullopt;
                     return describe(in) + " relative error " + fmt(err) + " symmetry defect " + fmt(sym);
                 }});
    p.push_back({"config", "two_sign_pattern", [](Rng& rng, const Context&) -> Outcome {
                     const auto in = random_two(rng);
                     const auto g = two_circle_gradient_u(in);
                     if (!(g(0, 0) < 0.0 && g(1, 1) < 0.0)) return describe(in) + " diagonal not negative";
                     if (!(g(0, 1) > 0.0 && g(1, 0) > 0.0)) return describe(in) + " off-diagonal not positive";
                     if (!(g.col(0).sum() < 0.0 && g.col(1).sum() < 0.0)) return describe(in) + " angle sum not decreasing";
                     return std::nullopt;
                 }});
    p.push_back({"config", "three_maximum_principle", [](Rng& rng, const Context&) -> Outcome {
                     auto a = random_three(rng);
                     auto b = a;
                     for (auto& r : b.r) r = log_uniform(rng, 0.05, 5.0);
                     int i = 0;
                     double best = 0.0;
                     for (int t = 0; t < 3; ++t) {
                         const double q = std::tanh(a.r[t] / 2.0) / std::tanh(b.r[t] / 2.0);
                         if (q > best) {
                             best = q;
                             i = t;
                         }
                     }
                     if (best <= 1.0) std::swap(a, b);
                     best = 0.0;
                     for (int t = 0; t < 3; ++t) {
                         const double q = std::tanh(a.r[t] / 2.0) / std::tanh(b.r[t] / 2.0);
                         if (q > best) {
                             best = q;
                             i = t;
                         }
                     }
                     if (best <= 1.0) return std::nullopt;  // identical radii
                     if (three_circle_angles(a).angle[i] < three_circle_angles(b).angle[i]) return std::nullopt;
                     return describe(a) + " vs " + describe(b) + " index " + std::to_string(i);
                 }});
    p.push_back({"config", "two_maximum_principle", [](Rng& rng, const Context&) -> Outcome {
                     auto a = random_two(rng);
                     auto b = a;
                     b.r_i = log_uniform(rng, 0.05, 5.0);
                     b.r_j = log_uniform(rng, 0.05, 5.0);
                     auto ratio = [](const TwoCircleInput& x, const TwoCircleInput& y, int t) {
                         return t == 0 ? std::tanh(x.r_i / 2.0) / std::tanh(y.r_i / 2.0)
                                       : std::tanh(x.r_j / 2.0) / std::tanh(y.r_j / 2.0);
                     };
                     if (std::max(ratio(a, b, 0), ratio(a, b, 1)) <= 1.0) std::swap(a, b);
                     const int i = ratio(a, b, 0) >= ratio(a, b, 1) ? 0 : 1;
                     if (ratio(a, b, i) <= 1.0) return std::nullopt;
                     const auto ta = two_circle_angles(a);
                     const auto tb = two_circle_angles(b);
                     if ((i == 0 ? ta.at_i < tb.at_i : ta.at_j < tb.at_j)) return std::nullopt;
                     return describe(a) + " vs " + describe(b) + " index " + std::to_string(i);
                 }});
    p.push_back({"config", "limits", [](Rng& rng, const Context& c) -> Outcome {
                     // The limits hold with the remaining radii fixed; keep them away from zero.
                     auto in = random_three(rng);
                     for (auto& r : in.r) r = log_uniform(rng, 0.5, 5.0);
                     const double tol = 1e-3 * c.tol_scale;
                     auto big = in;
                     big.r[0] = 20.0;
                     const double big_angle = three_circle_angles(big).angle[0];
                     if (!(big_angle <= 1e-6 * c.tol_scale)) return describe(big) + " angle " + fmt(big_angle);
                     auto small = in;
                     // Convergence is like sqrt(r) when the opposite edge is nearly tangent.
                     small.r[0] = small.theta[0] < 0.1 ? 1e-10 : 1e-5;
                     const double lim = kPi - small.theta[0];
                     const double got = three_circle_angles(small).angle[0];
                     if (!(std::abs(got - lim) <= tol)) return describe(small) + " angle " + fmt(got);
                     auto two_small = in;
                     two_small.r[0] = two_small.r[1] = 1e-5;
                     const auto ts = three_circle_angles(two_small);
                     if (!(std::abs(ts.angle[0] + ts.angle[1] - kPi) <= tol))
                         return describe(two_small) + " pair sum " + fmt(ts.angle[0] + ts.angle[1]);
                     auto all_small = in;
                     all_small.r = {1e-5, 1e-5, 1e-5};
                     const double sum = three_circle_angles(all_small).sum();
                     if (!(std::abs(sum - kPi) <= tol)) return describe(all_small) + " sum " + fmt(sum);
                     auto two = random_two(rng);
                     two.r_j = log_uniform(rng, 0.5, 5.0);
                     two.r_i = 1e-6;
                     const double at_i = two_circle_angles(two).at_i;
                     if (!(std::abs(at_i - two.theta_k) <= 1e-4 * c.tol_scale)) return describe(two) + " angle " + fmt(at_i);
                     two.r_j = 1e-6;
                     const auto tt = two_circle_angles(two);
                     if (!(std::abs(tt.at_i + tt.at_j - two.theta_k) <= tol)) return describe(two) + " sum " + fmt(tt.at_i + tt.at_j);
                     two = random_two(rng);
                     two.r_i = 20.0;
                     if (!(two_circle_angles(two).at_i <= 1e-6 * c.tol_scale)) return describe(two) + " large radius";
                     return std::nullopt;
                 }});
    p.push_back({"config", "degeneration_consistency", [](Rng& rng, const Context& c) -> Outcome {
                     auto in = random_three(rng);
                     if (in.theta[2] < 0.05) in.theta[2] = 0.05;
                     while (!admissible_three(in.theta[0], in.theta[1], in.theta[2])) {
                         in.theta[0] *= 0.5;
                         in.theta[1] *= 0.5;
                     }
                     in.r[2] = 1e-8;
                     const auto three = three_circle_angles(in);
                     const auto two = two_circle_angles({in.r[0], in.r[1], in.theta[2]});
                     const double d = std::max(std::abs(three.angle[0] - two.at_i), std::abs(three.angle[1] - two.at_j));
                     if (d <= 1e-4 * c.tol_scale) return std::nullopt;
                     return describe(in) + " difference " + fmt(d);
                 }});
    p.push_back({"config", "automorphism_identity", [](Rng& rng, const Context& c) -> Outcome {
                     const auto m = random_automorphism(rng);
                     const auto z = random_point(rng, 0.99);
                     const double q = schwarz_quotient(m, z);
                     if (std::abs(q - 1.0) <= 1e-10 * c.tol_scale) return std::nullopt;
                     return "a=" + fmt(m.a().real()) + "," + fmt(m.a().imag()) + " phi=" + fmt(m.phi()) + " z=" +
                            fmt(z.real()) + "," + fmt(z.imag()) + " quotient " + fmt(q);
                 }});
    p.push_back({"config", "distance_invariance", [](Rng& rng, const Context& c) -> Outcome {
                     const auto m = random_automorphism(rng);
                     const auto p1 = random_point(rng);
                     const auto p2 = random_point(rng);
                     const double d = std::abs(hyp_distance(m(p1), m(p2)) - hyp_distance(p1, p2));
                     const auto back = m.compose(m.inverse())(p1);
                     if (d <= 1e-12 * c.tol_scale * std::max(1.0, hyp_distance(p1, p2)) &&
                         std::abs(back - p1) <= 1e-12 * c.tol_scale)
                         return std::nullopt;
                     return "a=" + fmt(m.a().real()) + "," + fmt(m.a().imag()) + " phi=" + fmt(m.phi()) + " defect " + fmt(d);
                 }});

    // solver
    p.push_back({"solver", "converge_unique", [](Rng& rng, const Context& c) -> Outcome {
                     const auto& s = c.inst.triangulation;
                     const auto w = random_admissible_weights(rng, s);
                     const auto sol = solve(s, w);
                     SolveOptions o;
                     o.init_radii = random_radii(rng, s.num_vertices(), 0.2, 3.0);
                     o.check_conditions = false;
                     const auto other = solve(s, w, o);
                     const double du = max_u_difference(sol.radii, other.radii);
                     if (sol.residual <= 1e-10 && sol.iterations <= 50 && du <= 1e-8 * c.tol_scale) return std::nullopt;
                     return describe_weights(w) + " " + describe_radii(o.init_radii) + " iterations " +
                            std::to_string(sol.iterations) + " u difference " + fmt(du);
                 }});
    p.push_back({"solver", "jacobian", [](Rng& rng, const Context& c) -> Outcome {
                     const auto& s = c.inst.triangulation;
                     const auto w = random_admissible_weights(rng, s);
                     const auto r = random_radii(rng, s.num_vertices(), 0.2, 3.0);
                     const auto u = radii_to_u(r);
                     const Eigen::MatrixXd J = Eigen::MatrixXd(curvature_jacobian_u(s, w, u));
                     const int n = s.num_vertices();
                     Eigen::MatrixXd fd(n, n);
                     const double h = 1e-6;
                     for (int b = 0; b < n; ++b) {
                         auto up = u;
                         auto um = u;
                         up[b] += h;
                         um[b] -= h;
                         const auto kp = curvature(s, w, u_to_radii(up));
                         const auto km = curvature(s, w, u_to_radii(um));
                         for (int a = 0; a < n; ++a) fd(a, b) = (kp[a] - km[a]) / (2.0 * h);
                     }
                     const double err = matrix_relative_error(J, fd);
                     const double sym = (J - J.transpose()).cwiseAbs().maxCoeff();
                     bool signs = true;
                     for (int a = 0; a < n; ++a) {
                         signs = signs && J(a, a) > 0.0 && J.row(a).sum() > 0.0;
                         for (int b = 0; b < n; ++b)
                             if (a != b) signs = signs && J(a, b) <= 0.0;
                     }
                     const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(J).eigenvalues().minCoeff();
                     if (err <= 1e-5 * c.tol_scale && sym <= 1e-6 * c.tol_scale && signs && min_eig > 0.0)
                         return std::nullopt;
                     return describe_weights(w) + " " + describe_radii(r) + " fd error " + fmt(err) + " symmetry " +
                            fmt(sym) + " min eigenvalue " + fmt(min_eig);
                 }});
    p.push_back({"solver", "monotone_response", [](Rng& rng, const Context& c) -> Outcome {
                     const auto& s = c.inst.triangulation;
                     const auto w = random_admissible_weights(rng, s);
                     const auto r = random_radii(rng, s.num_vertices(), 0.2, 3.0);
                     const int v = std::uniform_int_distribution<int>(0, s.num_vertices() - 1)(rng);
                     auto u = radii_to_u(r);
                     const auto k0 = curvature(s, w, r);
                     u[v] += 1e-4 * std::abs(u[v]);
                     const auto k1 = curvature(s, w, u_to_radii(u));
                     if (!(k1[v] > k0[v])) return describe_radii(r) + " vertex " + std::to_string(v) + " own curvature";
                     for (int e : s.vertex_edges(v)) {
                         const int x = s.edge(e).v0 == v ? s.edge(e).v1 : s.edge(e).v0;
                         if (!(k1[x] < k0[x]))
                             return describe_radii(r) + " vertex " + std::to_string(v) + " neighbour " + std::to_string(x);
                     }
                     return std::nullopt;
                 }});
    p.push_back({"solver", "gauss_bonnet", [](Rng& rng, const Context& c) -> Outcome {
                     const auto& s = c.inst.triangulation;
                     const auto w = random_admissible_weights(rng, s);
                     const auto sol = solve(s, w);
                     double total = 0.0;
                     for (const auto& face : sol.corner_angles) total += kPi - (face[0] + face[1] + face[2]);
                     const double expect = 2.0 * kPi * (2 * s.genus() - 2);
                     if (std::abs(total - expect) <= 1e-8 * c.tol_scale) return std::nullopt;
                     return describe_weights(w) + " total " + fmt(total);
                 }});
    p.push_back({"solver", "ideal_unique", [](Rng& rng, const Context& c) -> Outcome {
                     const auto& s = c.inst.ideal;
                     const auto& w = c.inst.ideal_weights;
                     const auto base = solve_ideal(s, w);
                     SolveOptions o;
                     o.init_radii = random_radii(rng, s.num_vertices(), 0.2, 3.0);
                     o.check_conditions = false;
                     const auto other = solve_ideal(s, w, o);
                     const double du = max_u_difference(base.radii, other.radii);
                     if (base.residual <= 1e-10 && other.residual <= 1e-10 && du <= 1e-8 * c.tol_scale)
                         return std::nullopt;
                     return describe_radii(o.init_radii) + " u difference " + fmt(du);
                 }});
    p.push_back({"solver", "relabel_invariance", [](Rng& rng, const Context& c) -> Outcome {
                     const auto& s = c.inst.triangulation;
                     const auto w = random_admissible_weights(rng, s);
                     const int n = s.num_vertices();
                     std::vector<int> perm(n);
                     for (int i = 0; i < n; ++i) perm[i] = i;
                     std::shuffle(perm.begin(), perm.end(), rng);
                     std::vector<int> ids(n);
                     for (int v = 0; v < n; ++v) ids[perm[v]] = s.vertex_id(v);
                     std::vector<Edge> edges = s.edges();
                     for (auto& e : edges) {
                         e.v0 = perm[e.v0];
                         e.v1 = perm[e.v1];
                     }
                     const CellularSurface t(s.name(), ids, edges, s.faces());
                     const auto a = solve(s, w);
                     SolveOptions o;
                     o.check_conditions = false;
                     const auto b = solve(t, w, o);
                     double d = 0.0;
                     for (int v = 0; v < n; ++v) d = std::max(d, std::abs(radius_to_u(a.radii[v]) - radius_to_u(b.radii[perm[v]])));
                     if (d <= 1e-8 * c.tol_scale) return std::nullopt;
                     std::string sp = "perm=[";
                     for (int i = 0; i < n; ++i) sp += (i ? "," : "") + std::to_string(perm[i]);
                     return describe_weights(w) + " " + sp + "] u difference " + fmt(d);
                 }});

    // layout
    p.push_back({"layout", "holonomy", [](Rng& rng, const Context& c) -> Outcome {
                     const auto& s = c.inst.triangulation;
                     const auto w = random_admissible_weights(rng, s);
                     const auto sol = solve(s, w);
                     DevelopOptions o;
                     o.root_face = std::uniform_int_distribution<int>(0, s.num_faces() - 1)(rng);
                     const auto lay = develop(s, w, sol, o);
                     if (lay.holonomy_residual <= 1e-7 * c.tol_scale) return std::nullopt;
                     return describe_weights(w) + " root " + std::to_string(o.root_face) + " holonomy " +
                            fmt(lay.holonomy_residual);
                 }});
    p.push_back({"layout", "intersection_angles", [](Rng& rng, const Context& c) -> Outcome {
                     const auto& s = c.inst.triangulation;
                     const auto w = random_admissible_weights(rng, s);
                     const auto lay = develop(s, w, solve(s, w));
                     const auto rep = verify_intersection_angles(lay, 1e-8 * c.tol_scale);
                     if (rep.pass()) return std::nullopt;
                     return describe_weights(w) + " " + rep.mismatches.front();
                 }});
    p.push_back({"layout", "primitive_contact", [](Rng& rng, const Context& c) -> Outcome {
                     const auto& s = c.inst.triangulation;
                     const auto w = random_admissible_weights(rng, s);
                     const auto rep = verify_primitive_contact(develop(s, w, solve(s, w)));
                     if (rep.pass()) return std::nullopt;
                     return describe_weights(w) + " " + rep.swallowed.front();
                 }});
    p.push_back({"layout", "ideal_incidence", [](Rng& rng, const Context& c) -> Outcome {
                     const auto& s = c.inst.ideal;
                     const auto sol = solve_ideal(s, c.inst.ideal_weights);
                     DevelopOptions o;
                     o.root_face = std::uniform_int_distribution<int>(0, s.num_faces() - 1)(rng);
                     const auto rep = verify_ideal_incidence(develop(s, c.inst.ideal_weights, sol, o));
                     if (rep.pass(1e-6 * c.tol_scale)) return std::nullopt;
                     return "root " + std::to_string(o.root_face) + " spread " + fmt(rep.max_spread);
                 }});
    // Moving a layout by a disk automorphism keeps radii and intersection angles.
    p.push_back({"layout", "equivariance", [](Rng& rng, const Context& c) -> Outcome {
                     const auto& s = c.inst.triangulation;
                     const auto w = random_admissible_weights(rng, s);
                     auto lay = develop(s, w, solve(s, w));
                     const auto m = random_automorphism(rng);
                     double drift = 0.0;
                     for (auto& pc : lay.circles) {
                         const auto e = hyp_circle_to_euclidean(pc.circle);
                         std::array<std::complex<double>, 3> q;
                         for (int k = 0; k < 3; ++k) q[k] = m(e.center + std::polar(e.radius, 2.0 * kPi * k / 3.0));
                         // circumcircle of the images
                         const auto b = q[1] - q[0];
                         const auto d = q[2] - q[0];
                         const double den = 2.0 * (b.real() * d.imag() - b.imag() * d.real());
                         const std::complex<double> o((d.imag() * std::norm(b) - b.imag() * std::norm(d)) / den,
                                                      (b.real() * std::norm(d) - d.real() * std::norm(b)) / den);
                         const auto moved = euclidean_to_hyp_circle({q[0] + o, std::abs(o)});
                         drift = std::max(drift, std::abs(moved.radius - pc.circle.radius) / std::max(1.0, pc.circle.radius));
                         drift = std::max(drift, std::abs(hyp_distance(moved.center, m(pc.circle.center))));
                         pc.circle = moved;
                     }
                     for (auto& f : lay.faces)
                         for (auto& z : f.centers) z = m(z);
                     const auto rep = verify_intersection_angles(lay, 1e-8 * c.tol_scale);
                     if (drift <= 1e-8 * c.tol_scale && rep.pass()) return std::nullopt;
                     return describe_weights(w) + " a=" + fmt(m.a().real()) + "," + fmt(m.a().imag()) +
                            " phi=" + fmt(m.phi()) + " drift " + fmt(drift) +
                            (rep.pass() ? std::string() : " " + rep.mismatches.front());
                 }});
    return p;
}

const std::vector<PropertyDef>& registry() {
    static const std::vector<PropertyDef> props = all_properties();
    return props;
}

bool suite_known(const std::string& suite) {
    return suite == "all" || suite == "config" || suite == "solver" || suite == "layout";
}

}  // namespace

std::vector<std::string> verify_property_names(const std::string& suite) {
    if (!suite_known(suite)) throw RangeError("unknown suite '" + suite + "'");
    std::vector<std::string> out;
    for (const auto& p : registry())
        if (suite == "all" || p.suite == suite) out.push_back(p.name);
    return out;
}

VerifyReport run_verify(const VerifyOptions& opts, const VerifyInstances& inst) {
    if (!suite_known(opts.suite)) throw RangeError("unknown suite '" + opts.suite + "'");
    if (opts.trials < 1) throw RangeError("trials must be positive");
    if (opts.start < 0) throw RangeError("start must be non-negative");
    if (!opts.property.empty()) {
        const auto names = verify_property_names(opts.suite);
        if (std::find(names.begin(), names.end(), opts.property) == names.end())
            throw RangeError("unknown property '" + opts.property + "' in suite " + opts.suite);
    }
    const Context ctx{inst, opts.tol_scale};
    VerifyReport report;
    for (const auto& p : registry()) {
        if (opts.suite != "all" && p.suite != opts.suite) continue;
        if (!opts.property.empty() && p.name != opts.property) continue;
        PropertyResult r;
        r.suite = p.suite;
        r.name = p.name;
        for (int i = opts.start; i < opts.start + opts.trials; ++i) {
            Rng rng(sample_seed(opts.seed, p.name, i));
            Outcome out;
            try {
                out = p.run(rng, ctx);
            } catch (const std::exception& e) {
                out = std::string("exception: ") + e.what();
            }
            ++r.total;
            if (!out) {
                ++r.passed;
            } else if (r.first_failure < 0) {
                r.first_failure = i;
                r.failure = *out;
            }
        }
        report.results.push_back(std::move(r));
    }
    return report;
}

bool VerifyReport::pass() const {
    return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.passed == r.total; });
}

std::string VerifyReport::format(const VerifyOptions& opts) const {
    std::ostringstream os;
    os << "verify seed " << opts.seed << " trials " << opts.trials << " suite " << opts.suite << "\n";
    for (const auto& r : results) {
        char line[160];
        std::snprintf(line, sizeof line, "%-8s %-28s %d/%d %s\n", r.suite.c_str(), r.name.c_str(), r.passed, r.total,
                      r.passed == r.total ? "ok" : "FAIL");
        os << line;
    }
    for (const auto& r : results) {
        if (r.first_failure < 0) continue;
        os << "first failure " << r.suite << "/" << r.name << " sample " << r.first_failure << ": " << r.failure << "\n";
        os << "replay: circlepat verify --suite " << r.suite << " --property " << r.name << " --seed " << opts.seed
           << " --start " << r.first_failure << " --trials 1";
        if (opts.tol_scale != 1.0) os << " --tol-scale " << format_roundtrip(opts.tol_scale);
        os << "\n";
    }
    os << (pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

}  // namespace circlepat
