#include "circlepat/hypgeo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "circlepat/errors.hpp"

namespace circlepat {

namespace {

// 1 - |p|^2 without cancellation near the origin.
double one_minus_norm(DiskPoint p) {
    const double m = std::abs(p);
    return (1.0 - m) * (1.0 + m);
}

double nonnegative_slack(double slack, double scale, const char* what) {
    if (slack >= 0.0) return slack;
    if (slack > -kClampTolerance * std::max(1.0, scale)) return 0.0;
    std::ostringstream os;
    os << what << ": triangle inequality violated by " << -slack;
    throw TriangleInequalityViolation(os.str());
}

}  // namespace

bool in_open_disk(DiskPoint p) { return std::isfinite(p.real()) && std::isfinite(p.imag()) && std::norm(p) < 1.0; }

DiskAutomorphism::DiskAutomorphism(std::complex<double> a, double phi) : a_(a), phi_(phi) {
    if (!(std::abs(a_) < 1.0)) throw RangeError("disk automorphism needs |a| < 1");
    phi_ = std::remainder(phi_, 2.0 * kPi);
}

DiskPoint DiskAutomorphism::operator()(DiskPoint z) const {
    return std::polar(1.0, phi_) * (z - a_) / (1.0 - std::conj(a_) * z);
}

std::complex<double> DiskAutomorphism::derivative(DiskPoint z) const {
    const auto den = 1.0 - std::conj(a_) * z;
    return std::polar(1.0, phi_) * one_minus_norm(a_) / (den * den);
}

DiskAutomorphism DiskAutomorphism::compose(const DiskAutomorphism& other) const {
    // Matrix form [[alpha, beta], [conj beta, conj alpha]] with
    // alpha = e^{i phi/2}, beta = -a e^{i phi/2}.
    auto matrix = [](const DiskAutomorphism& m) {
        const auto alpha = std::polar(1.0, m.phi_ / 2.0);
        return std::pair{alpha, -m.a_ * alpha};
    };
    const auto [a1, b1] = matrix(*this);
    const auto [a2, b2] = matrix(other);
    const auto alpha = a1 * a2 + b1 * std::conj(b2);
    const auto beta = a1 * b2 + b1 * std::conj(a2);
    auto a = -beta / alpha;
    // Renormalize: keep the translation part strictly inside the disk.
    if (std::abs(a) >= 1.0) a *= (1.0 - 1e-16) / std::abs(a);
    return {a, std::arg(alpha / std::conj(alpha))};
}

DiskAutomorphism DiskAutomorphism::inverse() const { return {-a_ * std::polar(1.0, phi_), -phi_}; }

double hyp_distance(DiskPoint p, DiskPoint q) {
    // sinh(d/2) = |p - q| / sqrt((1 - |p|^2)(1 - |q|^2))
    const double s = std::abs(p - q) / std::sqrt(one_minus_norm(p) * one_minus_norm(q));
    return 2.0 * std::asinh(s);
}

DiskPoint automorphism_apply(const DiskAutomorphism& m, DiskPoint p) { return m(p); }

DiskAutomorphism automorphism_compose(const DiskAutomorphism& m1, const DiskAutomorphism& m2) {
    return m1.compose(m2);
}

DiskAutomorphism automorphism_invert(const DiskAutomorphism& m) { return m.inverse(); }

double clamped_acos(double x) {
    if (x > 1.0) {
        if (x - 1.0 > kClampTolerance) throw TriangleInequalityViolation("arccos argument above 1");
        return 0.0;
    }
    if (x < -1.0) {
        if (-1.0 - x > kClampTolerance) throw TriangleInequalityViolation("arccos argument below -1");
        return kPi;
    }
    return std::acos(x);
}

double triangle_angle(double l_opposite, double l_adj1, double l_adj2) {
    if (!(l_opposite > 0.0 && l_adj1 > 0.0 && l_adj2 > 0.0))
        throw TriangleInequalityViolation("triangle sides must be positive");
    const double scale = l_opposite + l_adj1 + l_adj2;
    const double s = 0.5 * scale;
    // Half-angle form of the hyperbolic law of cosines:
    //   sin^2(A/2) = sinh(s-b) sinh(s-c) / (sinh b sinh c)
    //   cos^2(A/2) = sinh(s) sinh(s-a)   / (sinh b sinh c)
    const double sa = nonnegative_slack(0.5 * (l_adj1 + l_adj2 - l_opposite), scale, "triangle_angle");
    const double sb = nonnegative_slack(0.5 * (l_opposite + l_adj2 - l_adj1), scale, "triangle_angle");
    const double sc = nonnegative_slack(0.5 * (l_opposite + l_adj1 - l_adj2), scale, "triangle_angle");
    const double num = std::sqrt(std::sinh(sb) * std::sinh(sc));
    const double den = std::sqrt(std::sinh(s) * std::sinh(sa));
    return std::clamp(2.0 * std::atan2(num, den), 0.0, kPi);
}

EuclideanCircle hyp_circle_to_euclidean(const HypCircle& c) {
    const double s = std::abs(c.center);
    const double d = 2.0 * std::atanh(s);
    // The diameter along the ray through the center has endpoints at
    // hyperbolic distances d - r and d + r from the origin.
    const double x1 = std::tanh((d - c.radius) / 2.0);
    const double x2 = std::tanh((d + c.radius) / 2.0);
    const std::complex<double> dir = s > 0.0 ? c.center / s : std::complex<double>(1.0, 0.0);
    return {dir * (0.5 * (x1 + x2)), 0.5 * (x2 - x1)};
}

HypCircle euclidean_to_hyp_circle(const EuclideanCircle& c) {
    const double s = std::abs(c.center);
    const std::complex<double> dir = s > 0.0 ? c.center / s : std::complex<double>(1.0, 0.0);
    const double d1 = 2.0 * std::atanh(s - c.radius);
    const double d2 = 2.0 * std::atanh(s + c.radius);
    const double d = 0.5 * (d1 + d2);
    return {dir * std::tanh(d / 2.0), 0.5 * (d2 - d1)};
}

double schwarz_quotient(const DiskAutomorphism& m, DiskPoint z) {
    return std::abs(m.derivative(z)) * one_minus_norm(z) / one_minus_norm(m(z));
}

double schwarz_quotient(const std::function<std::complex<double>(std::complex<double>)>& f,
                        const std::function<std::complex<double>(std::complex<double>)>& df, DiskPoint z) {
    return std::abs(df(z)) * one_minus_norm(z) / one_minus_norm(f(z));
}

DiskPoint place_by_angle(DiskPoint from, DiskPoint toward, double dist, double angle) {
    const auto t = DiskAutomorphism::to_origin(from);
    const double heading = std::arg(t(toward));
    const DiskPoint local = std::polar(std::tanh(dist / 2.0), heading + angle);
    return t.inverse()(local);
}

DiskAutomorphism segment_matching(DiskPoint x0, DiskPoint x1, DiskPoint y0, DiskPoint y1) {
    const auto tx = DiskAutomorphism::to_origin(x0);
    const auto ty = DiskAutomorphism::to_origin(y0);
    const double turn = std::arg(ty(y1)) - std::arg(tx(x1));
    return ty.inverse().compose(DiskAutomorphism::rotation(turn)).compose(tx);
}

std::complex<double> to_klein(DiskPoint p) { return 2.0 * p / (1.0 + std::norm(p)); }

}  // namespace circlepat
