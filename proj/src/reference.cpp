#include "gcf/reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace gcf {

namespace {

// Below this radius all three ambients are Euclidean to O(rho^2); the closed
// power-law tail finishes the collapse with error far below the 1e-10 target.
constexpr double kTailRadius = 1e-3;

double euclidean_radius(double r0, double m, double tau) {
    const double v = std::pow(r0, m) - m * tau;
    return v <= 0.0 ? 0.0 : std::pow(v, 1.0 / m);
}

struct OdeTable {
    std::vector<double> taus, radii, slopes;
    double t_star = 0.0;
};

// Adaptive classical RK4 with step-doubling error control on d rho/d tau =
// -speed(rho), integrating down to the tail radius, then the closed tail.
OdeTable integrate_collapse(const std::function<double(double)>& speed, double rho0, double m) {
    constexpr double tol = 1e-12;
    auto rk4 = [&](double rho, double h) {
        const double k1 = -speed(rho);
        const double k2 = -speed(rho + 0.5 * h * k1);
        const double k3 = -speed(rho + 0.5 * h * k2);
        const double k4 = -speed(rho + h * k3);
        return rho + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    OdeTable out;
    double tau = 0.0, rho = rho0;
    double h = 1e-4 * rho0;
    out.taus.push_back(0.0);
    out.radii.push_back(rho0);
    out.slopes.push_back(-speed(rho0));

    int guard = 0;
    while (rho > kTailRadius) {
        if (++guard > 2'000'000) throw StalledFlow("reference ODE failed to reach the tail");
        double h_try = h;
        double full, half2;
        for (;;) {
            full = rk4(rho, h_try);
            const double mid = rk4(rho, 0.5 * h_try);
            half2 = rk4(mid, 0.5 * h_try);
            if (!std::isfinite(full) || !std::isfinite(half2) || half2 <= 0.0 ||
                mid <= 0.0) {
                h_try *= 0.5;  // stepped past extinction; event location by halving
                continue;
            }
            const double err = std::abs(half2 - full) / 15.0;
            if (err <= tol * std::max(1.0, std::abs(rho))) break;
            h_try *= 0.5;
        }
        rho = half2 + (half2 - full) / 15.0;  // local extrapolation
        tau += h_try;
        out.taus.push_back(tau);
        out.radii.push_back(rho);
        out.slopes.push_back(-speed(rho));
        const double err = std::abs(half2 - full) / 15.0;
        const double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 2.0;
        h = h_try * std::clamp(grow, 0.2, 2.0);
    }
    out.t_star = tau + std::pow(rho, m) / m;
    return out;
}

}  // namespace

double SphereSolution::radius_at(double tau) const {
    if (tau <= 0.0) return rho0;
    if (tau >= t_star) return 0.0;
    switch (kind) {
        case Kind::euclidean_power:
            return euclidean_radius(rho0, n * alpha + 1.0, tau);
        case Kind::sphere_cosine:
            return std::acos(std::min(1.0, std::cos(rho0) * std::exp(tau)));
        case Kind::table: {
            if (tau >= taus.back()) {
                // closed Euclidean tail from the last node
                const double m = n * alpha + 1.0;
                return euclidean_radius(radii.back(), m, tau - taus.back());
            }
            const size_t k =
                std::upper_bound(taus.begin(), taus.end(), tau) - taus.begin() - 1;
            const double h = taus[k + 1] - taus[k];
            const double t = (tau - taus[k]) / h;
            const double t2 = t * t, t3 = t2 * t;
            return (2 * t3 - 3 * t2 + 1) * radii[k] + (t3 - 2 * t2 + t) * h * slopes[k] +
                   (-2 * t3 + 3 * t2) * radii[k + 1] + (t3 - t2) * h * slopes[k + 1];
        }
    }
    return 0.0;
}

SphereSolution sphere_ode(int kappa, int n, double alpha, double rho0) {
    if (kappa != -1 && kappa != 0 && kappa != 1) throw ConfigError("kappa must be -1, 0 or 1");
    if (alpha <= 0.0) throw ConfigError("alpha must be positive");
    if (rho0 <= 0.0) throw OutOfDomain("initial radius must be positive");
    if (kappa == 1 && rho0 >= std::numbers::pi / 2.0)
        throw OutOfDomain("spherical cap must start inside the open hemisphere");

    SphereSolution s;
    s.kappa = kappa;
    s.n = n;
    s.alpha = alpha;
    s.rho0 = rho0;
    const double m = n * alpha + 1.0;

    if (kappa == 0) {
        s.kind = SphereSolution::Kind::euclidean_power;
        s.t_star = std::pow(rho0, m) / m;
        return s;
    }
    if (kappa == 1 && n == 1 && alpha == 1.0) {
        s.kind = SphereSolution::Kind::sphere_cosine;
        s.t_star = -std::log(std::cos(rho0));
        return s;
    }
    auto speed = [=](double rho) {
        const double cot = kappa == 1 ? std::cos(rho) / std::sin(rho)
                                      : std::cosh(rho) / std::sinh(rho);
        return std::pow(cot, n * alpha);
    };
    auto table = integrate_collapse(speed, rho0, m);
    s.kind = SphereSolution::Kind::table;
    s.taus = std::move(table.taus);
    s.radii = std::move(table.radii);
    s.slopes = std::move(table.slopes);
    s.t_star = table.t_star;
    return s;
}

SphereSolution projected_sphere_ode(int kappa, int n, double alpha, double r0) {
    if (kappa != -1 && kappa != 0 && kappa != 1) throw ConfigError("kappa must be -1, 0 or 1");
    if (alpha <= 0.0) throw ConfigError("alpha must be positive");
    if (r0 <= 0.0) throw OutOfDomain("initial radius must be positive");
    if (kappa == -1 && r0 >= 1.0) throw OutOfDomain("chart radius must stay below 1");

    SphereSolution s;
    s.kappa = kappa;
    s.n = n;
    s.alpha = alpha;
    s.rho0 = r0;
    const double m = n * alpha + 1.0;

    if (kappa == 0) {
        s.kind = SphereSolution::Kind::euclidean_power;
        s.t_star = std::pow(r0, m) / m;
        return s;
    }
    auto speed = [=](double r) { return (1.0 + kappa * r * r) * std::pow(r, -n * alpha); };
    auto table = integrate_collapse(speed, r0, m);
    s.kind = SphereSolution::Kind::table;
    s.taus = std::move(table.taus);
    s.radii = std::move(table.radii);
    s.slopes = std::move(table.slopes);
    s.t_star = table.t_star;
    return s;
}

}  // namespace gcf
