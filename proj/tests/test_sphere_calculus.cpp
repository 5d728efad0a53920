#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gcf/sphere_calculus.hpp"

using namespace gcf;

namespace {

constexpr double kPi = std::numbers::pi;

SupportField circle_field(int N, double R) {
    return make_support_field(1, N, R);
}

SupportField translated_circle(int N, double R, double a) {
    SupportField u = make_support_field(1, N);
    for (int i = 0; i < N; ++i) u.values[i] = R + a * std::cos(u.angle(i));
    return u;
}

SupportField ellipse_field(int N, double a, double b) {
    SupportField u = make_support_field(1, N);
    for (int i = 0; i < N; ++i) {
        const double t = u.angle(i);
        u.values[i] = std::sqrt(a * a * std::cos(t) * std::cos(t) +
                                b * b * std::sin(t) * std::sin(t));
    }
    return u;
}

// random strictly convex body from a few low harmonics
SupportField random_body(int N, std::mt19937& rng, double amp = 0.1) {
    std::uniform_real_distribution<double> coef(-amp, amp);
    SupportField u = make_support_field(1, N, 1.0);
    for (int k = 2; k <= 5; ++k) {
        const double a = coef(rng) / (k * k);
        const double b = coef(rng) / (k * k);
        for (int i = 0; i < N; ++i) {
            const double t = u.angle(i);
            u.values[i] += a * std::cos(k * t) + b * std::sin(k * t);
        }
    }
    return u;
}

// exact curvature of the ellipse with support sqrt(a^2 cos^2 + b^2 sin^2):
// the curvature radius is u'' + u = a^2 b^2 / u^3
double ellipse_exact_k(double a, double b, double u) {
    return u * u * u / (a * a * b * b);
}

}  // namespace

TEST_CASE("constant field is a centered circle") {
    const auto u = circle_field(64, 2.5);
    const auto c = eval_weingarten(u);
    for (int i = 0; i < 64; ++i) {
        CHECK(c.radii1[i] == doctest::Approx(2.5).epsilon(1e-13));
        CHECK(c.gauss_k[i] == doctest::Approx(1.0 / 2.5).epsilon(1e-13));
    }
}

TEST_CASE("curvature is translation invariant for a shifted ball") {
    const auto u = translated_circle(256, 1.0, 0.3);
    const auto c = eval_weingarten(u);
    for (int i = 0; i < 256; ++i) CHECK(c.gauss_k[i] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ellipse curvature at the major vertex") {
    // a = 2, b = 1: K at theta = 0 equals a / b^2 = 2
    const auto u = ellipse_field(256, 2.0, 1.0);
    const auto c = eval_weingarten(u);
    CHECK(c.gauss_k[0] == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("gauss_k times sigma_n is one pointwise") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 5; ++rep) {
        const auto u = random_body(128, rng);
        const auto c = eval_weingarten(u);
        for (int i = 0; i < 128; ++i)
            CHECK(std::abs(c.gauss_k[i] * c.sigma_n[i] - 1.0) < 1e-12);
    }
    // n = 2 as well
    SupportField s = make_support_field(2, 64);
    for (int i = 0; i < 64; ++i) s.values[i] = 1.0 + 0.1 * std::cos(s.angle(i));
    const auto c2 = eval_weingarten(s);
    for (int i = 0; i < 64; ++i) CHECK(std::abs(c2.gauss_k[i] * c2.sigma_n[i] - 1.0) < 1e-12);
}

TEST_CASE("derivatives annihilate first harmonics at fourth order") {
    auto w_max = [](int N) {
        SupportField u = make_support_field(1, N);
        for (int i = 0; i < N; ++i) u.values[i] = 0.7 * std::cos(u.angle(i));
        const auto d2 = diff2(u);
        double m = 0.0;
        for (int i = 0; i < N; ++i) m = std::max(m, std::abs(d2[i] + u.values[i]));
        return m;
    };
    const double e64 = w_max(64), e128 = w_max(128);
    CHECK(e128 < 1e-6);
    CHECK(e64 / e128 == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("grid refinement reduces ellipse curvature error by 2^4") {
    auto err = [](int N) {
        const auto u = ellipse_field(N, 2.0, 1.0);
        const auto c = eval_weingarten(u);
        double m = 0.0;
        for (int i = 0; i < N; ++i)
            m = std::max(m, std::abs(c.gauss_k[i] - ellipse_exact_k(2.0, 1.0, u.values[i])));
        return m;
    };
    const double e128 = err(128), e256 = err(256);
    CHECK(e128 / e256 == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("boundary points of simple bodies") {
    SUBCASE("unit circle") {
        const auto pts = boundary_points(circle_field(64, 1.0));
        for (int i = 0; i < 64; ++i) {
            const double t = 2.0 * kPi * i / 64;
            CHECK(pts[i][0] == doctest::Approx(std::cos(t)).epsilon(1e-12));
            CHECK(pts[i][1] == doctest::Approx(std::sin(t)).epsilon(1e-12));
        }
    }
    SUBCASE("translated ball traces a circle about (a, 0)") {
        const auto pts = boundary_points(translated_circle(128, 1.0, 0.3));
        for (const auto& p : pts) {
            const double r = std::hypot(p[0] - 0.3, p[1]);
            CHECK(r == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
    SUBCASE("ellipse points satisfy the implicit equation") {
        const auto pts = boundary_points(ellipse_field(4096, 2.0, 1.0));
        for (const auto& p : pts) {
            const double res = p[0] * p[0] / 4.0 + p[1] * p[1] - 1.0;
            CHECK(std::abs(res) < 1e-10);
        }
    }
}

TEST_CASE("body geometry of the unit circle") {
    const auto g = body_geometry(circle_field(64, 1.0));
    CHECK(g.volume == doctest::Approx(kPi).epsilon(1e-13));
    CHECK(g.r_minus == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(g.r_plus == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(g.width_min == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(g.width_max == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(std::abs(g.steiner[0]) < 1e-14);
    CHECK(volume_sandwich_ok(1, g));
}

TEST_CASE("body geometry of the unit sphere (n = 2)") {
    const auto g = body_geometry(make_support_field(2, 64, 1.0));
    CHECK(g.volume == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-13));
    CHECK(g.r_minus == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(volume_sandwich_ok(2, g));
}

TEST_CASE("translated ball geometry against the shoelace oracle") {
    const int N = 4096;
    const auto u = translated_circle(N, 1.0, 0.3);
    const auto g = body_geometry(u);
    CHECK(g.volume == doctest::Approx(kPi).epsilon(1e-10));
    CHECK(g.r_minus == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(g.r_plus == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(g.steiner[0] == doctest::Approx(0.3).epsilon(1e-10));

    // independent area: shoelace over the recovered polygon
    const auto pts = boundary_points(u);
    double area = 0.0;
    for (int i = 0; i < N; ++i) {
        const auto& p = pts[i];
        const auto& q = pts[(i + 1) % N];
        area += p[0] * q[1] - q[0] * p[1];
    }
    area *= 0.5;
    CHECK(area == doctest::Approx(g.volume).epsilon(1e-5));
}

TEST_CASE("translated sphere geometry (n = 2)") {
    SupportField u = make_support_field(2, 128);
    for (int i = 0; i < 128; ++i) u.values[i] = 1.0 + 0.3 * std::cos(u.angle(i));
    const auto g = body_geometry(u);
    // translation covariance holds to the 4th-order stencil error
    CHECK(g.volume == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-7));
    CHECK(g.steiner[0] == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(g.width_min == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("volume is translation covariant") {
    std::mt19937 rng(11);
    const auto u = random_body(256, rng);
    const double v0 = body_geometry(u).volume;
    SupportField moved = u;
    for (int i = 0; i < 256; ++i) {
        const double t = moved.angle(i);
        moved.values[i] += 0.4 * std::cos(t) - 0.2 * std::sin(t);
    }
    const double v1 = body_geometry(moved).volume;
    CHECK(std::abs(v1 - v0) < 1e-8);
}

TEST_CASE("sphere quadrature") {
    SUBCASE("constants, n = 1") {
        std::vector<double> f(64, 3.0);
        CHECK(integrate_sphere(1, f) == doctest::Approx(6.0 * kPi).epsilon(1e-14));
        CHECK(mean_integral(1, f) == doctest::Approx(3.0).epsilon(1e-14));
    }
    SUBCASE("odd harmonic integrates to zero") {
        std::vector<double> f(64);
        for (int i = 0; i < 64; ++i) f[i] = std::cos(2.0 * kPi * i / 64);
        CHECK(std::abs(integrate_sphere(1, f)) < 1e-13);
    }
    SUBCASE("cos^2 over S^2") {
        const int N = 32;
        std::vector<double> f(N);
        for (int i = 0; i < N; ++i) {
            const double phi = (i + 0.5) * kPi / N;
            f[i] = std::cos(phi) * std::cos(phi);
        }
        CHECK(integrate_sphere(2, f) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-13));
    }
    SUBCASE("weights are positive and sum to the sphere area") {
        for (int N : {16, 33, 64}) {
            const auto& w = quad_weights(2, N);
            double s = 0.0;
            for (double x : w) {
                CHECK(x > 0.0);
                s += x;
            }
            CHECK(s == doctest::Approx(4.0 * kPi).epsilon(1e-13));
        }
    }
}

TEST_CASE("translate_center is exact on grid values") {
    const auto u = translated_circle(128, 1.0, 0.3);
    SupportField v = u;
    translate_center(v, {0.3, 0.0});
    for (int i = 0; i < 128; ++i) CHECK(v.values[i] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(body_geometry(v).r_plus == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("errors") {
    SUBCASE("non-convex field") {
        SupportField u = make_support_field(1, 64, 1.0);
        for (int i = 0; i < 64; ++i) u.values[i] += 0.9 * std::cos(2.0 * u.angle(i));
        CHECK_THROWS_AS(eval_weingarten(u), ConvexityLost);
    }
    SUBCASE("non-finite input") {
        SupportField u = make_support_field(1, 64, 1.0);
        u.values[5] = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(eval_weingarten(u), NonFinite);
    }
    SUBCASE("bad grids") {
        CHECK_THROWS_AS(make_support_field(1, 8), ConfigError);
        CHECK_THROWS_AS(make_support_field(3, 64), ConfigError);
        CHECK_THROWS_AS(make_support_field(1, 65), ConfigError);
    }
}
