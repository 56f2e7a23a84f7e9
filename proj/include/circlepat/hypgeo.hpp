#pragma once

// Primitives of the hyperbolic plane in the Poincare disk model.

#include <complex>
#include <functional>
#include <numbers>
#include <utility>

namespace circlepat {

// A point of the open unit disk, stored as a complex number.
using DiskPoint = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// Roundoff allowance for arccos-style arguments and triangle slack.
inline constexpr double kClampTolerance = 1e-12;

bool in_open_disk(DiskPoint p);

// z -> e^{i phi} (z - a) / (1 - conj(a) z), with |a| < 1.
class DiskAutomorphism {
public:
    DiskAutomorphism() = default;
    DiskAutomorphism(std::complex<double> a, double phi);

    static DiskAutomorphism identity() { return {}; }
    // Sends p to the origin without rotation.
    static DiskAutomorphism to_origin(DiskPoint p) { return {p, 0.0}; }
    static DiskAutomorphism rotation(double phi) { return {0.0, phi}; }

    std::complex<double> a() const { return a_; }
    double phi() const { return phi_; }

    DiskPoint operator()(DiskPoint z) const;
    std::complex<double> derivative(DiskPoint z) const;

    // (*this) o other, i.e. other is applied first.
    DiskAutomorphism compose(const DiskAutomorphism& other) const;
    DiskAutomorphism inverse() const;

private:
    std::complex<double> a_{0.0, 0.0};
    double phi_ = 0.0;
};

struct HypCircle {
    DiskPoint center;
    double radius = 0.0;  // hyperbolic
};

struct EuclideanCircle {
    std::complex<double> center;
    double radius = 0.0;
};

double hyp_distance(DiskPoint p, DiskPoint q);

DiskPoint automorphism_apply(const DiskAutomorphism& m, DiskPoint p);
DiskAutomorphism automorphism_compose(const DiskAutomorphism& m1, const DiskAutomorphism& m2);
DiskAutomorphism automorphism_invert(const DiskAutomorphism& m);

// Angle opposite l_opposite in the hyperbolic triangle with the given side
// lengths. Throws TriangleInequalityViolation when the sides do not close up
// beyond roundoff.
double triangle_angle(double l_opposite, double l_adj1, double l_adj2);

EuclideanCircle hyp_circle_to_euclidean(const HypCircle& c);
HypCircle euclidean_to_hyp_circle(const EuclideanCircle& c);

// |f'(z)| (1 - |z|^2) / (1 - |f(z)|^2). Identically 1 on automorphisms.
double schwarz_quotient(const DiskAutomorphism& m, DiskPoint z);
double schwarz_quotient(const std::function<std::complex<double>(std::complex<double>)>& f,
                        const std::function<std::complex<double>(std::complex<double>)>& df,
                        DiskPoint z);

// The point at hyperbolic distance `dist` from `from`, making the signed
// angle `angle` (counterclockwise positive) with the geodesic ray from
// `from` towards `toward`.
DiskPoint place_by_angle(DiskPoint from, DiskPoint toward, double dist, double angle);

// Orientation-preserving isometry carrying x0 -> y0 and the geodesic ray
// x0->x1 onto the ray y0->y1. Exact on x1 when d(x0,x1) == d(y0,y1).
DiskAutomorphism segment_matching(DiskPoint x0, DiskPoint x1, DiskPoint y0, DiskPoint y1);

// Klein model image of a disk point; geodesics become straight chords.
std::complex<double> to_klein(DiskPoint p);

// arccos with the library roundoff policy: arguments within
// kClampTolerance outside [-1, 1] are clamped, larger excursions throw.
double clamped_acos(double x);

}  // namespace circlepat
