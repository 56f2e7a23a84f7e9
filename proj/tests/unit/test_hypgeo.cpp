#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "circlepat/errors.hpp"
#include "circlepat/hypgeo.hpp"

using namespace circlepat;
using cd = std::complex<double>;

namespace {

// Length of the straight segment p->q under 2|dz|/(1-|z|^2), composite Simpson.
double metric_length_of_segment(cd p, cd q, int steps = 20000) {
    auto density = [&](double t) {
        const cd z = p + t * (q - p);
        return 2.0 * std::abs(q - p) / (1.0 - std::norm(z));
    };
    const double h = 1.0 / steps;
    double acc = density(0.0) + density(1.0);
    for (int k = 1; k < steps; ++k) acc += (k % 2 ? 4.0 : 2.0) * density(k * h);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("distance along diameters matches the integrated metric") {
    const std::pair<cd, cd> cases[] = {
        {0.0, 0.5}, {-0.3, 0.8}, {cd(0.2, 0.2), cd(-0.5, -0.5)}, {cd(0.0, -0.9), cd(0.0, 0.95)}};
    for (const auto& [p, q] : cases) CHECK(hyp_distance(p, q) == doctest::Approx(metric_length_of_segment(p, q)).epsilon(1e-9));
}

TEST_CASE("closed form values") {
    CHECK(hyp_distance(0.0, 0.5) == doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-14));
    CHECK(hyp_distance(cd(0.3, -0.1), cd(0.3, -0.1)) == 0.0);
    CHECK(to_klein(0.5) == cd(0.8, 0.0));
    CHECK(clamped_acos(1.0 + 1e-13) == 0.0);
    CHECK_THROWS_AS(clamped_acos(1.0 + 1e-6), Error);
}

TEST_CASE("automorphism composition and inverse agree with pointwise evaluation") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int t = 0; t < 50; ++t) {
        const DiskAutomorphism f({u(rng), u(rng)}, 3.0 * u(rng));
        const DiskAutomorphism g({u(rng), u(rng)}, 3.0 * u(rng));
        const cd z(u(rng), u(rng));
        CHECK(std::abs(f.compose(g)(z) - f(g(z))) < 1e-13);
        CHECK(std::abs(f.inverse()(f(z)) - z) < 1e-13);
        CHECK(std::abs(std::abs(f(std::polar(1.0, 5.0 * u(rng)))) - 1.0) < 1e-13);
        CHECK(schwarz_quotient(f, z) == doctest::Approx(1.0).epsilon(1e-12));
        // derivative against a central difference
        const double h = 1e-6;
        const cd fd = (f(z + h) - f(z - h)) / (2.0 * h);
        CHECK(std::abs(f.derivative(z) - fd) < 1e-7);
    }
    CHECK(std::abs(DiskAutomorphism::to_origin(cd(0.4, 0.3))(cd(0.4, 0.3))) < 1e-16);
}

TEST_CASE("schwarz quotient of a contraction") {
    // f(z) = z / 2: quotient (1/2)(1 - |z|^2) / (1 - |z|^2 / 4)
    const cd z(0.3, 0.4);
    const double q = schwarz_quotient([](cd w) { return w / 2.0; }, [](cd) { return cd(0.5, 0.0); }, z);
    CHECK(q == doctest::Approx(0.5 * 0.75 / (1.0 - 0.25 / 4.0)).epsilon(1e-14));
}

TEST_CASE("hyperbolic circles are Euclidean circles") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int t = 0; t < 30; ++t) {
        const HypCircle c{{u(rng), u(rng)}, 0.05 + 2.0 * std::abs(u(rng))};
        const auto e = hyp_circle_to_euclidean(c);
        for (int k = 0; k < 8; ++k) {
            const cd z = e.center + std::polar(e.radius, 0.7 * k);
            CHECK(hyp_distance(c.center, z) == doctest::Approx(c.radius).epsilon(1e-10));
        }
        const auto back = euclidean_to_hyp_circle(e);
        CHECK(std::abs(back.center - c.center) < 1e-12);
        CHECK(back.radius == doctest::Approx(c.radius).epsilon(1e-12));
    }
}

TEST_CASE("triangle angle matches an explicit placement") {
    // Vertex A at 0, B on the positive axis, C along the ray at angle alpha.
    const double cases[][3] = {{0.7, 1.1, 0.9}, {0.1, 3.0, 0.5}, {2.0, 2.5, 2.2}};
    for (const auto& c : cases) {
        const double alpha = c[0];
        const cd B = std::tanh(c[1] / 2.0);
        const cd C = std::polar(std::tanh(c[2] / 2.0), alpha);
        const double a = hyp_distance(B, C);
        CHECK(triangle_angle(a, c[1], c[2]) == doctest::Approx(alpha).epsilon(1e-12));
    }
    CHECK_THROWS_AS(triangle_angle(5.0, 1.0, 1.0), TriangleInequalityViolation);
}

TEST_CASE("place_by_angle and segment_matching") {
    const cd from(0.1, -0.2), toward(-0.4, 0.3);
    const cd p = place_by_angle(from, toward, 0.8, 1.0);
    CHECK(hyp_distance(from, p) == doctest::Approx(0.8).epsilon(1e-12));
    const double a = triangle_angle(hyp_distance(toward, p), hyp_distance(from, toward), 0.8);
    CHECK(a == doctest::Approx(1.0).epsilon(1e-10));
    // counterclockwise: at the origin frame the turn is positive
    const auto m = DiskAutomorphism::to_origin(from);
    CHECK(std::sin(std::arg(m(p)) - std::arg(m(toward))) > 0.0);

    const cd x0(0.0, 0.0), x1(0.5, 0.0);
    const cd y0(0.2, 0.3), y1 = place_by_angle(y0, 0.0, hyp_distance(x0, x1), 0.4);
    const auto s = segment_matching(x0, x1, y0, y1);
    CHECK(std::abs(s(x0) - y0) < 1e-14);
    CHECK(std::abs(s(x1) - y1) < 1e-12);
}

TEST_CASE("geodesics are chords in the Klein model") {
    // Geodesic midpoint of p, q computed by moving p to the origin.
    const cd p(0.3, 0.5), q(-0.6, 0.1);
    const auto m = DiskAutomorphism::to_origin(p);
    const cd mq = m(q);
    const cd mid = m.inverse()(std::polar(std::tanh(hyp_distance(p, q) / 4.0), std::arg(mq)));
    const cd a = to_klein(p), b = to_klein(q), c = to_klein(mid);
    const double cross = ((b - a) * std::conj(c - a)).imag();
    CHECK(std::abs(cross) < 1e-14);
}
