#pragma once

// Two- and three-circle configurations in the hyperbolic plane.
//
// Labelling convention (used everywhere in the library): in a three-circle
// configuration with circles i, j, k the angle theta[k] is the exterior
// intersection angle between circles i and j, i.e. the weight of the edge
// [i, j] opposite circle k. Likewise in a two-circle configuration the
// single weight is called theta_k.

#include <Eigen/Core>
#include <array>

namespace circlepat {

// Radii above this are rejected (cosh overflow guard).
inline constexpr double kMaxRadius = 40.0;

struct ThreeCircleInput {
    std::array<double, 3> r{};      // hyperbolic radii
    std::array<double, 3> theta{};  // theta[k] lives on the edge opposite circle k
};

struct ThreeCircleAngles {
    // Inner angles of the triangle of centers, angle[a] at the center of circle a.
    std::array<double, 3> angle{};
    double sum() const { return angle[0] + angle[1] + angle[2]; }
};

struct TwoCircleInput {
    double r_i = 0.0;
    double r_j = 0.0;
    double theta_k = 0.0;  // in (0, pi)
};

struct TwoCircleAngles {
    double at_i = 0.0;
    double at_j = 0.0;
};

// u = log tanh(r / 2) and back.
double radius_to_u(double r);
double u_to_radius(double u);
// dr/du = sinh r
double dr_du(double r);

void check_radius(double r);

bool admissible_three(double theta_i, double theta_j, double theta_k);

// Distance between the centers of two circles of radii r1, r2 meeting at
// exterior angle theta: cosh l = cosh r1 cosh r2 + cos theta sinh r1 sinh r2.
double edge_length(double r1, double r2, double theta);

// (d l / d r1, d l / d r2)
std::array<double, 2> edge_length_gradient(double r1, double r2, double theta);

ThreeCircleAngles three_circle_angles(const ThreeCircleInput& in);
TwoCircleAngles two_circle_angles(const TwoCircleInput& in);

// J(a, b) = d angle[a] / d u[b]
Eigen::Matrix3d angle_gradient_u(const ThreeCircleInput& in);
// Rows/cols ordered (i, j).
Eigen::Matrix2d two_circle_gradient_u(const TwoCircleInput& in);

// All three angles of a hyperbolic triangle and their side derivatives;
// side l[a] is opposite vertex a. dangle(a, s) = d angle[a] / d l[s].
struct TriangleAngleJet {
    std::array<double, 3> angle{};
    Eigen::Matrix3d dangle = Eigen::Matrix3d::Zero();
};
TriangleAngleJet triangle_angle_jet(const std::array<double, 3>& l);

}  // namespace circlepat
