#include "gcf/sphere_calculus.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numbers>
#include <string>

namespace gcf {

namespace {

constexpr double kPi = std::numbers::pi;

// Ghost index for the staggered n = 2 grid: even reflection at both poles.
inline int reflect_index(int i, int N) {
    if (i < 0) return -1 - i;
    if (i >= N) return 2 * N - 1 - i;
    return i;
}

inline int wrap_index(int i, int N) { return ((i % N) + N) % N; }

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw NonFinite(std::string(what) + " is not finite");
}

}  // namespace

double SupportField::h() const {
    return (n == 1 ? 2.0 * kPi : kPi) / resolution;
}

double SupportField::angle(int i) const {
    return n == 1 ? i * h() : (i + 0.5) * h();
}

Vec2 SupportField::direction(int i) const {
    const double a = angle(i);
    if (n == 1) return {std::cos(a), std::sin(a)};
    return {std::sin(a), std::cos(a)};  // (s, z) meridian components
}

double SupportField::dir_dot(const Vec2& z, int i) const {
    const double a = angle(i);
    if (n == 1) return z[0] * std::cos(a) + z[1] * std::sin(a);
    return z[0] * std::cos(a);  // axis offset against the z-component
}

SupportField make_support_field(int n, int resolution, double fill) {
    SupportField u;
    u.n = n;
    u.resolution = resolution;
    u.values.assign(static_cast<size_t>(std::max(resolution, 0)), fill);
    validate_field(u);
    return u;
}

void validate_field(const SupportField& u) {
    if (u.n != 1 && u.n != 2) throw ConfigError("support field dimension must be 1 or 2");
    if (u.resolution < 16) throw ConfigError("grid resolution must be at least 16");
    if (u.n == 1 && u.resolution % 2 != 0)
        throw ConfigError("n = 1 grid must have even resolution (width pairing)");
    if (static_cast<int>(u.values.size()) != u.resolution)
        throw ConfigError("value count does not match resolution");
    if (u.n == 2 && u.center[1] != 0.0)
        throw ConfigError("axisymmetric center must lie on the axis");
}

std::vector<double> diff1(int n, const std::vector<double>& v) {
    const int N = static_cast<int>(v.size());
    const double h = (n == 1 ? 2.0 * kPi : kPi) / N;
    std::vector<double> out(v.size());
    auto at = [&](int i) { return n == 1 ? v[wrap_index(i, N)] : v[reflect_index(i, N)]; };
    for (int i = 0; i < N; ++i)
        out[i] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
    return out;
}

std::vector<double> diff2(int n, const std::vector<double>& v) {
    const int N = static_cast<int>(v.size());
    const double h = (n == 1 ? 2.0 * kPi : kPi) / N;
    std::vector<double> out(v.size());
    auto at = [&](int i) { return n == 1 ? v[wrap_index(i, N)] : v[reflect_index(i, N)]; };
    for (int i = 0; i < N; ++i)
        out[i] = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) + 16.0 * at(i - 1) - at(i - 2)) /
                 (12.0 * h * h);
    return out;
}

double sphere_area(int n) { return n == 1 ? 2.0 * kPi : 4.0 * kPi; }

double unit_ball_volume(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return kPi;
        case 3: return 4.0 * kPi / 3.0;
        default: throw ConfigError("unit ball volume requested for unsupported dimension");
    }
}

const std::vector<double>& quad_weights(int n, int resolution) {
    static std::map<std::pair<int, int>, std::vector<double>> cache;
    auto key = std::make_pair(n, resolution);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<double> w(static_cast<size_t>(resolution));
    if (n == 1) {
        std::fill(w.begin(), w.end(), 2.0 * kPi / resolution);
    } else {
        // Fejer rule on the Chebyshev angles phi_j = (j+1/2) pi/N: exact for
        // polynomials of degree < N in cos(phi), weights sum to 2. Multiplied
        // by 2pi these integrate axisymmetric fields over S^2.
        const int N = resolution;
        for (int j = 0; j < N; ++j) {
            const double phi = (j + 0.5) * kPi / N;
            double s = 0.0;
            for (int m = 1; m <= N / 2; ++m)
                s += std::cos(2.0 * m * phi) / (4.0 * m * m - 1.0);
            w[j] = 2.0 * kPi * (2.0 / N) * (1.0 - 2.0 * s);
        }
    }
    return cache.emplace(key, std::move(w)).first->second;
}

double integrate_sphere(int n, const std::vector<double>& f) {
    check_finite(f, "integrand");
    const auto& w = quad_weights(n, static_cast<int>(f.size()));
    double s = 0.0;
    for (size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
    return s;
}

double mean_integral(int n, const std::vector<double>& f) {
    return integrate_sphere(n, f) / sphere_area(n);
}

CurvatureField eval_weingarten(const SupportField& u) {
    validate_field(u);
    const int N = u.resolution;
    const auto d1 = diff1(u);
    const auto d2 = diff2(u);
    check_finite(d1, "support gradient");
    check_finite(d2, "support hessian");

    double r_plus = 0.0;
    for (int i = 0; i < N; ++i)
        r_plus = std::max(r_plus, std::sqrt(u.values[i] * u.values[i] + d1[i] * d1[i]));
    const double eigen_floor = 1e-10 * r_plus;

    CurvatureField c;
    c.radii1.resize(N);
    c.sigma_n.resize(N);
    c.gauss_k.resize(N);
    c.mean_h.resize(N);
    if (u.n == 2) c.radii2.resize(N);

    double lam_min = std::numeric_limits<double>::max();
    for (int i = 0; i < N; ++i) {
        const double l1 = d2[i] + u.values[i];
        c.radii1[i] = l1;
        double sig = l1;
        double H = 0.0;
        if (u.n == 2) {
            const double phi = u.angle(i);
            const double l2 = d1[i] / std::tan(phi) + u.values[i];
            c.radii2[i] = l2;
            sig = l1 * l2;
            lam_min = std::min(lam_min, std::min(l1, l2));
            if (l1 <= eigen_floor || l2 <= eigen_floor)
                throw ConvexityLost("principal radius " + std::to_string(std::min(l1, l2)) +
                                    " at grid point " + std::to_string(i));
            H = 1.0 / l1 + 1.0 / l2;
        } else {
            lam_min = std::min(lam_min, l1);
            if (l1 <= eigen_floor)
                throw ConvexityLost("principal radius " + std::to_string(l1) +
                                    " at grid point " + std::to_string(i));
            H = 1.0 / l1;
        }
        if (!std::isfinite(sig)) throw NonFinite("sigma_n overflow");
        c.sigma_n[i] = sig;
        c.gauss_k[i] = 1.0 / sig;
        c.mean_h[i] = H;
    }
    c.lambda_min = lam_min;
    const auto [lo, hi] = std::minmax_element(c.gauss_k.begin(), c.gauss_k.end());
    c.k_min = *lo;
    c.k_max = *hi;
    return c;
}

std::vector<Vec2> boundary_points(const SupportField& u) {
    validate_field(u);
    const auto d1 = diff1(u);
    std::vector<Vec2> pts(static_cast<size_t>(u.resolution));
    for (int i = 0; i < u.resolution; ++i) {
        const double a = u.angle(i);
        const double ui = u.values[i];
        if (u.n == 1) {
            pts[i] = {ui * std::cos(a) - d1[i] * std::sin(a) + u.center[0],
                      ui * std::sin(a) + d1[i] * std::cos(a) + u.center[1]};
        } else {
            // meridian (s, z); the center offset lives on the axis
            pts[i] = {ui * std::sin(a) + d1[i] * std::cos(a),
                      ui * std::cos(a) - d1[i] * std::sin(a) + u.center[0]};
        }
    }
    return pts;
}

std::vector<double> grad_norm_sq(const SupportField& u) {
    auto d1 = diff1(u);
    for (double& x : d1) x *= x;
    return d1;
}

BodyGeometry body_geometry(const SupportField& u) {
    const auto curv = eval_weingarten(u);  // convexity gate
    const int N = u.resolution;
    const auto d1 = diff1(u);

    BodyGeometry g;
    g.r_minus = *std::min_element(u.values.begin(), u.values.end());
    g.r_plus = 0.0;
    for (int i = 0; i < N; ++i)
        g.r_plus = std::max(g.r_plus, std::sqrt(u.values[i] * u.values[i] + d1[i] * d1[i]));

    std::vector<double> integrand(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) integrand[i] = u.values[i] * curv.sigma_n[i];
    g.volume = integrate_sphere(u.n, integrand) / (u.n + 1);
    if (!(g.volume > 0.0)) throw NonFinite("enclosed volume is not positive");

    g.width_min = std::numeric_limits<double>::max();
    g.width_max = 0.0;
    for (int i = 0; i < N; ++i) {
        const int j = u.n == 1 ? (i + N / 2) % N : N - 1 - i;
        const double w = u.values[i] + u.values[j];
        g.width_min = std::min(g.width_min, w);
        g.width_max = std::max(g.width_max, w);
    }

    // First-moment tracking center, normalized so a translated ball maps to
    // its own center: s = ((n+1)/|S^n|) * integral of u(x) x.
    const double scale = (u.n + 1) / sphere_area(u.n);
    std::vector<double> m0(static_cast<size_t>(N)), m1(static_cast<size_t>(N), 0.0);
    for (int i = 0; i < N; ++i) {
        const Vec2 x = u.direction(i);
        if (u.n == 1) {
            m0[i] = u.values[i] * x[0];
            m1[i] = u.values[i] * x[1];
        } else {
            m0[i] = u.values[i] * x[1];  // axis component
        }
    }
    Vec2 offset{scale * integrate_sphere(u.n, m0), 0.0};
    if (u.n == 1) offset[1] = scale * integrate_sphere(u.n, m1);
    g.steiner = u.center + offset;
    return g;
}

bool volume_sandwich_ok(int n, const BodyGeometry& g) {
    // cone over the inscribed ball from the farthest point, and the pancake
    // bound width * shadow; both sides keyed to the n-ball constant
    const double c = unit_ball_volume(n);
    const double lo = c / (n + 1) * std::pow(g.r_minus, n) * g.r_plus;
    const double hi = 2.0 * (n + 1) * c * g.r_minus * std::pow(g.r_plus, n);
    return lo <= g.volume * (1.0 + 1e-12) && g.volume <= hi * (1.0 + 1e-12);
}

void translate_center(SupportField& u, const Vec2& new_center) {
    const Vec2 delta = new_center - u.center;
    if (u.n == 2 && delta[1] != 0.0)
        throw ConfigError("axisymmetric center may only move along the axis");
    for (int i = 0; i < u.resolution; ++i) u.values[i] -= u.dir_dot(delta, i);
    u.center = new_center;
}

SupportField rescaled(const SupportField& u, double factor) {
    SupportField out = u;
    for (double& v : out.values) v *= factor;
    out.center = factor * out.center;
    return out;
}

}  // namespace gcf
