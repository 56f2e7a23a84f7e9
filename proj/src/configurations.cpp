#include "circlepat/configurations.hpp"

#include <cmath>
#include <sstream>

#include "circlepat/errors.hpp"
#include "circlepat/hypgeo.hpp"

namespace circlepat {

double radius_to_u(double r) {
    check_radius(r);
    if (r < 1.0) return std::log(std::tanh(r / 2.0));
    // tanh(r/2) = 1 - 2 / (e^r + 1); keeps precision when tanh rounds to 1.
    return std::log1p(-2.0 / (std::exp(r) + 1.0));
}

double u_to_radius(double u) {
    if (!(u < 0.0)) throw RangeError("u coordinate must be negative");
    if (u < -1.0) return 2.0 * std::atanh(std::exp(u));
    return std::log1p(std::exp(u)) - std::log(-std::expm1(u));
}

double dr_du(double r) { return std::sinh(r); }

void check_radius(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        std::ostringstream os;
        os << "radius must be positive and finite, got " << r;
        throw RangeError(os.str());
    }
    if (r > kMaxRadius) {
        std::ostringstream os;
        os << "radius " << r << " exceeds cap " << kMaxRadius;
        throw RangeError(os.str());
    }
}

bool admissible_three(double theta_i, double theta_j, double theta_k) {
    return theta_i + theta_j + theta_k < kPi;
}

double edge_length(double r1, double r2, double theta) {
    check_radius(r1);
    check_radius(r2);
    // cosh l - 1 = 2 sinh^2((r1-r2)/2) + (1 + cos theta) sinh r1 sinh r2, so
    // sinh^2(l/2) = sinh^2((r1-r2)/2) + cos^2(theta/2) sinh r1 sinh r2.
    const double a = std::sinh((r1 - r2) / 2.0);
    const double c = std::cos(theta / 2.0);
    return 2.0 * std::asinh(std::sqrt(a * a + c * c * std::sinh(r1) * std::sinh(r2)));
}

std::array<double, 2> edge_length_gradient(double r1, double r2, double theta) {
    const double l = edge_length(r1, r2, theta);
    const double ct = std::cos(theta);
    const double sl = std::sinh(l);
    return {(std::sinh(r1) * std::cosh(r2) + ct * std::cosh(r1) * std::sinh(r2)) / sl,
            (std::sinh(r2) * std::cosh(r1) + ct * std::cosh(r2) * std::sinh(r1)) / sl};
}

TriangleAngleJet triangle_angle_jet(const std::array<double, 3>& l) {
    TriangleAngleJet jet;
    for (int a = 0; a < 3; ++a) jet.angle[a] = triangle_angle(l[a], l[(a + 1) % 3], l[(a + 2) % 3]);

    // d angle_a / d l_a = sinh l_a / (sinh l_b sinh l_c sin angle_a), and the
    // denominator equals 2 sqrt(sinh s prod sinh(s - l)) for every a.
    const double s = 0.5 * (l[0] + l[1] + l[2]);
    double prod = std::sinh(s);
    for (int a = 0; a < 3; ++a) prod *= std::sinh(std::max(0.0, s - l[a]));
    const double area_term = 2.0 * std::sqrt(prod);
    for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3;
        const int c = (a + 2) % 3;
        const double diag = std::sinh(l[a]) / area_term;
        jet.dangle(a, a) = diag;
        jet.dangle(a, b) = -diag * std::cos(jet.angle[c]);
        jet.dangle(a, c) = -diag * std::cos(jet.angle[b]);
    }
    return jet;
}

namespace {

void check_weight(double theta, bool open_at_zero) {
    const bool ok = open_at_zero ? (theta > 0.0 && theta < kPi) : (theta >= 0.0 && theta < kPi);
    if (!ok) {
        std::ostringstream os;
        os << "exterior intersection angle " << theta << " outside " << (open_at_zero ? "(0, pi)" : "[0, pi)");
        throw WeightOutOfRange(os.str());
    }
}

std::array<double, 3> three_circle_sides(const ThreeCircleInput& in) {
    for (double r : in.r) check_radius(r);
    for (double t : in.theta) check_weight(t, false);
    if (!admissible_three(in.theta[0], in.theta[1], in.theta[2])) {
        std::ostringstream os;
        os << "inadmissible weights (" << in.theta[0] << ", " << in.theta[1] << ", " << in.theta[2]
           << "): sum must be below pi";
        throw TriangleInequalityViolation(os.str());
    }
    std::array<double, 3> l{};
    for (int a = 0; a < 3; ++a) l[a] = edge_length(in.r[(a + 1) % 3], in.r[(a + 2) % 3], in.theta[a]);
    return l;
}

}  // namespace

ThreeCircleAngles three_circle_angles(const ThreeCircleInput& in) {
    const auto l = three_circle_sides(in);
    ThreeCircleAngles out;
    for (int a = 0; a < 3; ++a) out.angle[a] = triangle_angle(l[a], l[(a + 1) % 3], l[(a + 2) % 3]);
    return out;
}

Eigen::Matrix3d angle_gradient_u(const ThreeCircleInput& in) {
    const auto l = three_circle_sides(in);
    const auto jet = triangle_angle_jet(l);
    // dl(s, b) = d l_s / d u_b
    Eigen::Matrix3d dl = Eigen::Matrix3d::Zero();
    for (int s = 0; s < 3; ++s) {
        const int p = (s + 1) % 3;
        const int q = (s + 2) % 3;
        const auto g = edge_length_gradient(in.r[p], in.r[q], in.theta[s]);
        dl(s, p) = g[0] * dr_du(in.r[p]);
        dl(s, q) = g[1] * dr_du(in.r[q]);
    }
    return jet.dangle * dl;
}

namespace {

// Triangle (center_i, center_j, P) with P an intersection point of the two
// circles: sides opposite (center_i, center_j, P) are (r_j, r_i, d).
std::array<double, 3> two_circle_sides(const TwoCircleInput& in) {
    check_radius(in.r_i);
    check_radius(in.r_j);
    check_weight(in.theta_k, true);
    return {in.r_j, in.r_i, edge_length(in.r_i, in.r_j, in.theta_k)};
}

}  // namespace

TwoCircleAngles two_circle_angles(const TwoCircleInput& in) {
    const auto l = two_circle_sides(in);
    return {triangle_angle(l[0], l[1], l[2]), triangle_angle(l[1], l[2], l[0])};
}

Eigen::Matrix2d two_circle_gradient_u(const TwoCircleInput& in) {
    const auto l = two_circle_sides(in);
    const auto jet = triangle_angle_jet(l);
    const auto g = edge_length_gradient(in.r_i, in.r_j, in.theta_k);
    const double si = dr_du(in.r_i);
    const double sj = dr_du(in.r_j);
    // Columns: derivative of the three sides with respect to (u_i, u_j).
    Eigen::Matrix<double, 3, 2> dl;
    dl << 0.0, sj,
          si, 0.0,
          g[0] * si, g[1] * sj;
    const Eigen::Matrix<double, 2, 3> top = jet.dangle.topRows<2>();
    return top * dl;
}

}  // namespace circlepat
