#include "gcf/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gcf {

namespace {

constexpr double kLogFormWindow = 1e-4;  // |alpha - 1| below this: log form
constexpr double kFeasibleSlack = 1e-10;

// u about z0 on the grid; throws when z0 is not strictly interior.
std::vector<double> support_about(const SupportField& u, const Vec2& z0) {
    std::vector<double> uz(u.values.size());
    const Vec2 offset = z0 - u.center;
    for (int i = 0; i < u.resolution; ++i) {
        uz[i] = u.values[i] - u.dir_dot(offset, i);
        if (!(uz[i] > 0.0))
            throw PointNotInterior("support about z0 vanishes at grid point " +
                                   std::to_string(i));
    }
    return uz;
}

bool interior(const SupportField& u, const Vec2& z0) {
    const Vec2 offset = z0 - u.center;
    for (int i = 0; i < u.resolution; ++i)
        if (!(u.values[i] - u.dir_dot(offset, i) > 0.0)) return false;
    return true;
}

// Direction components entering the z-derivatives (two for n = 1, one for the
// axisymmetric case where z moves along the axis only).
inline int active_dims(int n) { return n == 1 ? 2 : 1; }

inline void dir_components(const SupportField& u, int i, double c[2]) {
    const double a = u.angle(i);
    if (u.n == 1) {
        c[0] = std::cos(a);
        c[1] = std::sin(a);
    } else {
        c[0] = std::cos(a);
        c[1] = 0.0;
    }
}

struct Derivatives {
    double value = 0.0;
    double grad[2]{0.0, 0.0};
    double hess[2][2]{{0.0, 0.0}, {0.0, 0.0}};
};

Derivatives entropy_derivatives(const SupportField& u, const Vec2& z0, double alpha) {
    const auto uz = support_about(u, z0);
    const int N = u.resolution;
    const int d = active_dims(u.n);
    const auto& w = quad_weights(u.n, N);
    const double area = sphere_area(u.n);

    Derivatives out;
    if (std::abs(alpha - 1.0) < kLogFormWindow) {
        double e = 0.0, g[2]{0, 0}, q[2][2]{{0, 0}, {0, 0}};
        for (int i = 0; i < N; ++i) {
            double c[2];
            dir_components(u, i, c);
            e += w[i] * std::log(uz[i]);
            for (int k = 0; k < d; ++k) {
                g[k] -= w[i] * c[k] / uz[i];
                for (int l = 0; l < d; ++l) q[k][l] -= w[i] * c[k] * c[l] / (uz[i] * uz[i]);
            }
        }
        out.value = e / area;
        for (int k = 0; k < d; ++k) {
            out.grad[k] = g[k] / area;
            for (int l = 0; l < d; ++l) out.hess[k][l] = q[k][l] / area;
        }
        return out;
    }

    const double p = 1.0 - 1.0 / alpha;
    double M = 0.0, s[2]{0, 0}, q[2][2]{{0, 0}, {0, 0}};
    for (int i = 0; i < N; ++i) {
        double c[2];
        dir_components(u, i, c);
        const double up = std::pow(uz[i], p);
        M += w[i] * up;
        for (int k = 0; k < d; ++k) {
            s[k] += w[i] * up / uz[i] * c[k];
            for (int l = 0; l < d; ++l) q[k][l] += w[i] * up / (uz[i] * uz[i]) * c[k] * c[l];
        }
    }
    M /= area;
    for (int k = 0; k < d; ++k) s[k] /= area;
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) q[k][l] /= area;

    if (!(M > 0.0) || !std::isfinite(M)) throw NonFinite("entropy mean");
    out.value = std::log(M) / p;
    for (int k = 0; k < d; ++k) {
        out.grad[k] = -s[k] / M;
        for (int l = 0; l < d; ++l)
            out.hess[k][l] = (p - 1.0) * q[k][l] / M - p * s[k] * s[l] / (M * M);
    }
    return out;
}

}  // namespace

double entropy_at(const SupportField& u, const Vec2& z0, double alpha) {
    validate_field(u);
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    const auto uz = support_about(u, z0);
    if (std::abs(alpha - 1.0) < kLogFormWindow) {
        std::vector<double> logs(uz.size());
        for (size_t i = 0; i < uz.size(); ++i) logs[i] = std::log(uz[i]);
        return mean_integral(u.n, logs);
    }
    const double p = 1.0 - 1.0 / alpha;
    std::vector<double> pw(uz.size());
    for (size_t i = 0; i < uz.size(); ++i) pw[i] = std::pow(uz[i], p);
    return std::log(mean_integral(u.n, pw)) / p;
}

EntropyPointResult entropy_point(const SupportField& u, double alpha) {
    return entropy_point(u, alpha, body_geometry(u).steiner);
}

EntropyPointResult entropy_point(const SupportField& u, double alpha, const Vec2& guess) {
    validate_field(u);
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    const BodyGeometry geom = body_geometry(u);
    const double grad_tol = 1e-10 * geom.r_plus;
    const int d = active_dims(u.n);

    Vec2 z = interior(u, guess) ? guess : geom.steiner;
    if (!interior(u, z)) throw PointNotInterior("no interior starting point found");

    for (int it = 1; it <= 100; ++it) {
        const auto der = entropy_derivatives(u, z, alpha);
        const double gnorm = std::sqrt(der.grad[0] * der.grad[0] + der.grad[1] * der.grad[1]);
        if (gnorm < grad_tol) return {z, der.value, it};

        // ascent direction from the regularized (negative definite) Hessian
        double hnorm = 0.0;
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) hnorm = std::max(hnorm, std::abs(der.hess[k][l]));
        const double mu = 1e-12 * hnorm;
        double dir[2]{0.0, 0.0};
        if (d == 1) {
            dir[0] = der.grad[0] / (-der.hess[0][0] + mu);
        } else {
            const double a11 = -der.hess[0][0] + mu, a22 = -der.hess[1][1] + mu;
            const double a12 = -der.hess[0][1];
            const double det = a11 * a22 - a12 * a12;
            if (!(det > 0.0)) throw NoConvergence("entropy Hessian is degenerate");
            dir[0] = (a22 * der.grad[0] - a12 * der.grad[1]) / det;
            dir[1] = (a11 * der.grad[1] - a12 * der.grad[0]) / det;
        }

        const double slope = der.grad[0] * dir[0] + der.grad[1] * dir[1];
        double s = 1.0;
        bool moved = false;
        for (int back = 0; back < 50; ++back, s *= 0.5) {
            const Vec2 trial{z[0] + s * dir[0], z[1] + s * dir[1]};
            if (!interior(u, trial)) continue;
            if (entropy_at(u, trial, alpha) >= der.value + 1e-4 * s * slope) {
                z = trial;
                moved = true;
                break;
            }
        }
        if (!moved) return {z, der.value, it};  // step underflow at the maximizer
    }
    throw NoConvergence("entropy point iteration limit reached");
}

MonotoneFit monotone_quantity_trace(const std::vector<double>& entropy_trace,
                                    const std::vector<double>& t_trace, int n) {
    const size_t m = entropy_trace.size();
    if (m < 20 || t_trace.size() != m)
        throw InsufficientData("monotone fit needs at least 20 matched samples");
    const double gamma = 2.0 * (n + 1) / (2.0 * n + 1.0);

    std::vector<double> decay(m);
    for (size_t i = 0; i < m; ++i) decay[i] = std::exp(-gamma * t_trace[i]);

    // earliest feasible onset in the first half, or none
    auto onset = [&](double c) -> std::ptrdiff_t {
        double suffix = -std::numeric_limits<double>::max();
        std::vector<double> suf(m - 1);
        for (size_t i = m - 1; i-- > 0;) {
            const double diff = (entropy_trace[i + 1] + c * decay[i + 1]) -
                                (entropy_trace[i] + c * decay[i]);
            suffix = std::max(suffix, diff);
            suf[i] = suffix;
        }
        for (size_t i0 = 0; i0 <= m / 2 && i0 + 1 < m; ++i0)
            if (suf[i0] <= kFeasibleSlack) return static_cast<std::ptrdiff_t>(i0);
        return -1;
    };

    double c_fit = 0.0;
    if (onset(0.0) < 0) {
        double hi = 1e-8;
        while (onset(hi) < 0) {
            hi *= 2.0;
            if (hi > 1e14) throw NoConvergence("no finite correction constant restores monotonicity");
        }
        double lo = hi / 2.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (onset(mid) >= 0 ? hi : lo) = mid;
        }
        c_fit = hi;
    }

    MonotoneFit fit;
    fit.c_fit = c_fit;
    fit.t0_index = static_cast<size_t>(onset(c_fit));
    fit.t0_fit = t_trace[fit.t0_index];
    double worst = -std::numeric_limits<double>::max();
    for (size_t i = fit.t0_index; i + 1 < m; ++i) {
        const double diff = (entropy_trace[i + 1] + c_fit * decay[i + 1]) -
                            (entropy_trace[i] + c_fit * decay[i]);
        worst = std::max(worst, diff);
    }
    fit.max_violation = std::max(worst, 0.0);
    return fit;
}

bool entropy_lower_bound_check(const SupportField& u, double alpha) {
    const double vol = body_geometry(u).volume;
    const double log_scale = std::log(unit_ball_volume(u.n + 1) / vol) / (u.n + 1);
    const double e = entropy_point(u, alpha).value + log_scale;
    return e >= -1e-8;
}

}  // namespace gcf
