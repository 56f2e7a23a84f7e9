#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "circlepat/configurations.hpp"
#include "circlepat/errors.hpp"
#include "circlepat/hypgeo.hpp"

using namespace circlepat;
using cd = std::complex<double>;

namespace {

// Cosine of the exterior angle of two Euclidean circles: D^2 = R1^2 + R2^2 + 2 R1 R2 cos(theta).
double euclid_cos(cd c1, double R1, cd c2, double R2) {
    const double D = std::abs(c2 - c1);
    return (D * D - R1 * R1 - R2 * R2) / (2.0 * R1 * R2);
}

// Hyperbolic circle centered at p, as (Euclidean center, radius), by sampling
// the two points of the circle on the diameter through p.
std::pair<cd, double> circle_from_scratch(cd p, double r) {
    const auto m = DiskAutomorphism::to_origin(p).inverse();
    const double t = std::tanh(r / 2.0);
    const cd dir = std::abs(p) > 0 ? p / std::abs(p) : cd(1.0, 0.0);
    const cd a = m(t * dir), b = m(-t * dir);
    return {(a + b) / 2.0, std::abs(a - b) / 2.0};
}

// Angle at the origin-moved vertex p between rays to q and s.
double angle_at(cd p, cd q, cd s) {
    const auto m = DiskAutomorphism::to_origin(p);
    return std::abs(std::remainder(std::arg(m(q)) - std::arg(m(s)), 2.0 * kPi));
}

}  // namespace

TEST_CASE("u coordinates") {
    CHECK(radius_to_u(1.0) == doctest::Approx(std::log(std::tanh(0.5))).epsilon(1e-15));
    CHECK(u_to_radius(radius_to_u(2.5)) == doctest::Approx(2.5).epsilon(1e-14));
    const double r = 0.8, h = 1e-6;
    const double fd = (u_to_radius(radius_to_u(r) + h) - u_to_radius(radius_to_u(r) - h)) / (2.0 * h);
    CHECK(dr_du(r) == doctest::Approx(fd).epsilon(1e-8));
    CHECK_THROWS_AS(check_radius(0.0), RangeError);
    CHECK_THROWS_AS(check_radius(kMaxRadius + 1.0), RangeError);
    CHECK_THROWS_AS(check_radius(std::nan("")), RangeError);
}

TEST_CASE("admissibility is the strict angle sum bound") {
    CHECK(admissible_three(0.0, 0.0, 0.0));
    CHECK(admissible_three(1.0, 1.0, 1.0));
    CHECK_FALSE(admissible_three(1.0, 1.0, kPi - 2.0));
    CHECK_FALSE(admissible_three(2.0, 1.5, 0.0));
}

TEST_CASE("edge length realizes the exterior angle") {
    const double cases[][3] = {{0.5, 0.5, 0.0}, {1.0, 0.3, 1.0}, {2.0, 3.0, 2.5}, {0.05, 1.5, 0.3}};
    for (const auto& c : cases) {
        const double l = edge_length(c[0], c[1], c[2]);
        const auto [e1, R1] = circle_from_scratch(0.0, c[0]);
        const auto [e2, R2] = circle_from_scratch(std::tanh(l / 2.0), c[1]);
        CHECK(euclid_cos(e1, R1, e2, R2) == doctest::Approx(std::cos(c[2])).epsilon(1e-9).scale(1.0));
    }
    CHECK(edge_length(0.7, 1.2, 0.0) == doctest::Approx(1.9).epsilon(1e-14));
}

TEST_CASE("three-circle angles match an explicit configuration") {
    const std::array<std::array<double, 6>, 4> cases = {{
        {0.5, 0.5, 0.5, 0.0, 0.0, 0.0},
        {1.0, 0.2, 2.0, 0.3, 0.9, 0.4},
        {0.1, 0.1, 3.0, 1.0, 1.0, 1.0},
        {2.0, 1.0, 0.5, 0.0, 1.5, 0.2},
    }};
    for (const auto& c : cases) {
        ThreeCircleInput in{{c[0], c[1], c[2]}, {c[3], c[4], c[5]}};
        const auto a = three_circle_angles(in);
        CHECK(a.sum() < kPi);
        // Circle 0 at the origin, circle 1 on the positive axis, circle 2 at
        // angle a.angle[0] counterclockwise from it.
        const double l2 = edge_length(c[0], c[1], c[5]);
        const double l1 = edge_length(c[2], c[0], c[4]);
        const cd p0 = 0.0, p1 = std::tanh(l2 / 2.0), p2 = std::polar(std::tanh(l1 / 2.0), a.angle[0]);
        const auto [e0, R0] = circle_from_scratch(p0, c[0]);
        const auto [e1, R1] = circle_from_scratch(p1, c[1]);
        const auto [e2, R2] = circle_from_scratch(p2, c[2]);
        CHECK(euclid_cos(e1, R1, e2, R2) == doctest::Approx(std::cos(c[3])).epsilon(1e-9).scale(1.0));
        CHECK(euclid_cos(e2, R2, e0, R0) == doctest::Approx(std::cos(c[4])).epsilon(1e-9).scale(1.0));
        CHECK(euclid_cos(e0, R0, e1, R1) == doctest::Approx(std::cos(c[5])).epsilon(1e-9).scale(1.0));
        CHECK(angle_at(p1, p2, p0) == doctest::Approx(a.angle[1]).epsilon(1e-10));
        CHECK(angle_at(p2, p0, p1) == doctest::Approx(a.angle[2]).epsilon(1e-10));
    }
}

TEST_CASE("two-circle angles match the intersection point") {
    const double cases[][3] = {{1.0, 1.0, kPi / 2.0}, {0.3, 2.0, 1.0}, {2.5, 0.7, 2.8}};
    for (const auto& c : cases) {
        const double d = edge_length(c[0], c[1], c[2]);
        const auto [ei, Ri] = circle_from_scratch(0.0, c[0]);
        const auto [ej, Rj] = circle_from_scratch(std::tanh(d / 2.0), c[1]);
        // upper intersection point of the two Euclidean circles (centers on the real axis)
        const double D = ej.real() - ei.real();
        const double x = (D * D + Ri * Ri - Rj * Rj) / (2.0 * D);
        const cd P = cd(ei.real() + x, std::sqrt(Ri * Ri - x * x));
        const auto a = two_circle_angles({c[0], c[1], c[2]});
        CHECK(angle_at(0.0, P, std::tanh(d / 2.0)) == doctest::Approx(a.at_i).epsilon(1e-9));
        CHECK(angle_at(std::tanh(d / 2.0), 0.0, P) == doctest::Approx(a.at_j).epsilon(1e-9));
    }
    CHECK_THROWS_AS(two_circle_angles({1.0, 1.0, 0.0}), WeightOutOfRange);
    CHECK_THROWS_AS(two_circle_angles({1.0, 1.0, kPi}), WeightOutOfRange);
}

TEST_CASE("gradients against five-point differences") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(0.1, 3.0), ut(0.0, 1.0);
    for (int t = 0; t < 40; ++t) {
        ThreeCircleInput in{{ur(rng), ur(rng), ur(rng)}, {ut(rng), ut(rng), ut(rng)}};
        const auto g = angle_gradient_u(in);
        const double h = 1e-4;
        for (int b = 0; b < 3; ++b) {
            auto at = [&](double s) {
                auto x = in;
                x.r[b] = u_to_radius(radius_to_u(in.r[b]) + s);
                return three_circle_angles(x).angle;
            };
            const auto p1 = at(h), m1 = at(-h), p2 = at(2 * h), m2 = at(-2 * h);
            for (int a = 0; a < 3; ++a) {
                const double fd = (8.0 * (p1[a] - m1[a]) - (p2[a] - m2[a])) / (12.0 * h);
                CHECK(g(a, b) == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
            }
        }
        CHECK((g - g.transpose()).cwiseAbs().maxCoeff() < 1e-12);

        TwoCircleInput two{ur(rng), ur(rng), 0.1 + 2.9 * ut(rng)};
        const auto g2 = two_circle_gradient_u(two);
        CHECK(std::abs(g2(0, 1) - g2(1, 0)) < 1e-12);
        auto at2 = [&](double s) {
            auto x = two;
            x.r_i = u_to_radius(radius_to_u(two.r_i) + s);
            return two_circle_angles(x);
        };
        const double fd = (at2(1e-6).at_j - at2(-1e-6).at_j) / 2e-6;
        CHECK(g2(1, 0) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("triangle angle jet") {
    const std::array<double, 3> l{1.0, 1.3, 0.9};
    const auto jet = triangle_angle_jet(l);
    CHECK(jet.angle[0] == doctest::Approx(triangle_angle(l[0], l[1], l[2])).epsilon(1e-14));
    for (int s = 0; s < 3; ++s) {
        auto lp = l, lm = l;
        lp[s] += 1e-6;
        lm[s] -= 1e-6;
        const auto jp = triangle_angle_jet(lp), jm = triangle_angle_jet(lm);
        for (int a = 0; a < 3; ++a)
            CHECK(jet.dangle(a, s) == doctest::Approx((jp.angle[a] - jm.angle[a]) / 2e-6).epsilon(1e-7).scale(1.0));
    }
}
