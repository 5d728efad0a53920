#include "gcf/spaceform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gcf {

namespace {

constexpr double kPi = std::numbers::pi;

inline Vec2 center_to_point(int n, const Vec2& c) {
    return n == 1 ? c : Vec2{0.0, c[0]};
}

inline Vec2 meridian_dir(int n, double psi) {
    return n == 1 ? Vec2{std::cos(psi), std::sin(psi)} : Vec2{std::sin(psi), std::cos(psi)};
}

}  // namespace

double SpaceformParams::phi(double rho) const {
    if (kappa == 1) return std::sin(rho);
    if (kappa == -1) return std::sinh(rho);
    return rho;
}

double SpaceformParams::dphi(double rho) const {
    if (kappa == 1) return std::cos(rho);
    if (kappa == -1) return std::cosh(rho);
    return 1.0;
}

double SpaceformParams::ddphi(double rho) const { return -kappa * phi(rho); }

double SpaceformParams::rho_limit() const {
    return kappa == 1 ? kPi / 2.0 : std::numeric_limits<double>::infinity();
}

SpaceformParams spaceform(int kappa) {
    if (kappa != -1 && kappa != 0 && kappa != 1)
        throw ConfigError("ambient curvature must be -1, 0 or +1");
    return SpaceformParams{kappa};
}

int ambient_kappa(Ambient a) {
    switch (a) {
        case Ambient::sphere: return 1;
        case Ambient::hyperbolic: return -1;
        default: return 0;
    }
}

Ambient ambient_from_kappa(int kappa) {
    if (kappa == 1) return Ambient::sphere;
    if (kappa == -1) return Ambient::hyperbolic;
    return Ambient::euclidean;
}

const char* ambient_name(Ambient a) {
    switch (a) {
        case Ambient::sphere: return "sphere";
        case Ambient::hyperbolic: return "hyperbolic";
        default: return "euclidean";
    }
}

Ambient parse_ambient(const std::string& token) {
    if (token == "sphere") return Ambient::sphere;
    if (token == "hyperbolic") return Ambient::hyperbolic;
    if (token == "euclidean") return Ambient::euclidean;
    throw ConfigError("unknown ambient token '" + token + "'");
}

double RadialGraph::h() const { return (n == 1 ? 2.0 * kPi : kPi) / resolution; }

double RadialGraph::angle(int i) const { return n == 1 ? i * h() : (i + 0.5) * h(); }

void validate_graph(const RadialGraph& g) {
    if (g.n != 1 && g.n != 2) throw ConfigError("radial graph dimension must be 1 or 2");
    if (g.resolution < 16) throw ConfigError("grid resolution must be at least 16");
    if (g.n == 1 && g.resolution % 2 != 0)
        throw ConfigError("n = 1 grid must have even resolution");
    if (static_cast<int>(g.values.size()) != g.resolution)
        throw ConfigError("value count does not match resolution");
    for (double v : g.values) {
        if (!std::isfinite(v)) throw NonFinite("radial graph value");
        if (v <= 0.0) throw OutOfDomain("radial graph values must be positive");
    }
    if (g.ambient == Ambient::sphere)
        for (double v : g.values)
            if (v >= kPi / 2.0) throw OutOfDomain("sphere graph reaches the equator");
}

RadialGraph project(const RadialGraph& g) {
    validate_graph(g);
    RadialGraph out = g;
    out.ambient = Ambient::euclidean;
    if (g.ambient == Ambient::sphere) {
        for (double& v : out.values) v = std::tan(v);
    } else if (g.ambient == Ambient::hyperbolic) {
        for (double& v : out.values) v = std::tanh(v);
    }
    return out;
}

RadialGraph lift(const RadialGraph& g, int kappa) {
    validate_graph(g);
    if (g.ambient != Ambient::euclidean)
        throw ConfigError("lift expects a graph in the Euclidean chart");
    RadialGraph out = g;
    out.ambient = ambient_from_kappa(kappa);
    if (kappa == 1) {
        for (double& v : out.values) v = std::atan(v);
    } else if (kappa == -1) {
        for (double& v : out.values) {
            if (v >= 1.0) throw OutOfDomain("chart radius reaches the unit ball boundary");
            v = std::atanh(v);
        }
    }
    return out;
}

double curvature_factor(double u, double grad_norm_sq, int kappa, int n) {
    const double base1 = 1.0 + kappa * (u * u + grad_norm_sq);
    const double base2 = 1.0 + kappa * u * u;
    if (base1 <= 0.0 || base2 <= 0.0)
        throw OutOfDomain("curvature factor outside the projection domain");
    return std::pow(base1 / base2, 0.5 * (n + 2));
}

namespace {

// Shared determinant formula for radial graphs; the Euclidean chart is the
// warp phi = r, phi' = 1.
std::vector<double> graph_curvature(const RadialGraph& g, bool euclidean_warp) {
    validate_graph(g);
    const SpaceformParams sf = euclidean_warp ? SpaceformParams{0} : spaceform(ambient_kappa(g.ambient));
    const auto d1 = diff1(g.n, g.values);
    const auto d2 = diff2(g.n, g.values);
    const int N = g.resolution;
    std::vector<double> K(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        const double p = sf.phi(g.values[i]);
        const double dp = sf.dphi(g.values[i]);
        if (p <= 0.0) throw OutOfDomain("warp factor vanished on the graph");
        const double grad2 = d1[i] * d1[i];
        const double m_rad = -p * d2[i] + 2.0 * dp * grad2 + p * p * dp;
        double num, den;
        if (g.n == 1) {
            num = m_rad;
            den = std::pow(p * p + grad2, 1.5);
        } else {
            const double m_ang = -p * d1[i] / std::tan(g.angle(i)) + p * p * dp;
            if (m_ang <= 0.0)
                throw ConvexityLost("angular second fundamental form at point " + std::to_string(i));
            num = m_rad * m_ang;
            den = std::pow(p * p + grad2, 2.0) * p * p;
        }
        if (m_rad <= 0.0)
            throw ConvexityLost("radial second fundamental form at point " + std::to_string(i));
        K[i] = num / den;
        if (!std::isfinite(K[i])) throw NonFinite("graph curvature");
    }
    return K;
}

}  // namespace

std::vector<double> gauss_curvature_spaceform_graph(const RadialGraph& g) {
    if (g.ambient == Ambient::euclidean)
        throw ConfigError("space-form curvature requested for a Euclidean graph");
    return graph_curvature(g, false);
}

std::vector<double> gauss_curvature_euclidean_graph(const RadialGraph& g) {
    if (g.ambient != Ambient::euclidean)
        throw ConfigError("euclidean curvature requested for a space-form graph");
    return graph_curvature(g, true);
}

// -- monotone cubic -------------------------------------------------------------

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const size_t m = x_.size();
    if (m < 3 || y_.size() != m) throw ConfigError("interpolation needs at least 3 samples");
    for (size_t k = 0; k + 1 < m; ++k)
        if (!(x_[k + 1] > x_[k])) throw NotStarShaped("interpolation abscissae not increasing");

    std::vector<double> hgap(m - 1), sec(m - 1);
    for (size_t k = 0; k + 1 < m; ++k) {
        hgap[k] = x_[k + 1] - x_[k];
        sec[k] = (y_[k + 1] - y_[k]) / hgap[k];
    }
    m_.assign(m, 0.0);
    m_[0] = sec[0];
    m_[m - 1] = sec[m - 2];
    for (size_t k = 1; k + 1 < m; ++k) {
        if (sec[k - 1] * sec[k] <= 0.0) {
            m_[k] = 0.0;  // local extremum: flat slope, no overshoot
        } else {
            const double w1 = 2.0 * hgap[k] + hgap[k - 1];
            const double w2 = hgap[k] + 2.0 * hgap[k - 1];
            m_[k] = (w1 + w2) / (w1 / sec[k - 1] + w2 / sec[k]);
        }
    }
}

double MonotoneCubic::operator()(double xq) const {
    const size_t m = x_.size();
    const double xc = std::clamp(xq, x_.front(), x_.back());
    size_t k = std::upper_bound(x_.begin(), x_.end(), xc) - x_.begin();
    k = std::clamp<size_t>(k, 1, m - 1) - 1;
    const double h = x_[k + 1] - x_[k];
    const double t = (xc - x_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * m_[k] +
           (-2 * t3 + 3 * t2) * y_[k + 1] + (t3 - t2) * h * m_[k + 1];
}

// -- radial <-> support conversions ----------------------------------------------

namespace {

struct RadialSamples {
    std::vector<double> psi;  // strictly increasing polar angles
    std::vector<double> r;
};

// Polar representation of the boundary about `origin` (meridian coordinates).
RadialSamples polar_samples(const SupportField& u, const Vec2& origin_pt) {
    const auto pts = boundary_points(u);
    const int N = u.resolution;
    RadialSamples s;
    s.psi.resize(N);
    s.r.resize(N);
    for (int i = 0; i < N; ++i) {
        const Vec2 rel = pts[i] - origin_pt;
        s.r[i] = norm(rel);
        if (!(s.r[i] > 0.0)) throw NotStarShaped("boundary touches the tracking point");
        s.psi[i] = u.n == 1 ? std::atan2(rel[1], rel[0]) : std::atan2(rel[0], rel[1]);
    }
    if (u.n == 1) {
        // unwrap to a strictly increasing angle covering one full turn
        double prev_raw = s.psi[0];
        for (int i = 1; i < N; ++i) {
            const double raw = s.psi[i];
            double delta = raw - prev_raw;
            while (delta <= 0.0) delta += 2.0 * kPi;
            while (delta > 2.0 * kPi) delta -= 2.0 * kPi;
            if (delta >= kPi) throw NotStarShaped("polar angles are not monotone");
            s.psi[i] = s.psi[i - 1] + delta;
            prev_raw = raw;
        }
    } else {
        for (int i = 0; i < N; ++i)
            if (s.psi[i] <= 0.0 || s.psi[i] >= kPi)
                throw NotStarShaped("meridian angle outside (0, pi)");
        for (int i = 1; i < N; ++i)
            if (s.psi[i] <= s.psi[i - 1]) throw NotStarShaped("polar angles are not monotone");
    }
    return s;
}

// Interpolant of r(psi) with ghost samples: periodic wrap for n = 1, even
// reflection at the poles for n = 2.
MonotoneCubic radial_interpolant(int n, const RadialSamples& s) {
    const size_t N = s.psi.size();
    std::vector<double> x, y;
    x.reserve(N + 6);
    y.reserve(N + 6);
    if (n == 1) {
        const double period = 2.0 * kPi;
        for (size_t k = N - 3; k < N; ++k) {
            x.push_back(s.psi[k] - period);
            y.push_back(s.r[k]);
        }
        x.insert(x.end(), s.psi.begin(), s.psi.end());
        y.insert(y.end(), s.r.begin(), s.r.end());
        for (size_t k = 0; k < 3; ++k) {
            x.push_back(s.psi[k] + period);
            y.push_back(s.r[k]);
        }
    } else {
        for (size_t k = 3; k-- > 0;) {
            x.push_back(-s.psi[k]);
            y.push_back(s.r[k]);
        }
        x.insert(x.end(), s.psi.begin(), s.psi.end());
        y.insert(y.end(), s.r.begin(), s.r.end());
        for (size_t k = N; k-- > N - 3;) {
            x.push_back(2.0 * kPi - s.psi[k]);
            y.push_back(s.r[k]);
        }
    }
    return MonotoneCubic(std::move(x), std::move(y));
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
    constexpr double gr = 0.6180339887498949;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 60 && d - c > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return std::max({f(0.5 * (a + b)), fc, fd});
}

// Support values about the curve's own origin: u(x_j) = max_psi <P(psi), x_j>,
// dense scan followed by golden-section refinement of the bracketing cell.
SupportField support_from_curve(int n, int N, const std::function<Vec2(double)>& curve,
                                double lo, double span, bool periodic) {
    const int M = 16 * N;
    std::vector<Vec2> dense(static_cast<size_t>(M + 1));
    for (int k = 0; k <= M; ++k) dense[k] = curve(lo + span * k / M);

    SupportField out = make_support_field(n, N);
    for (int j = 0; j < N; ++j) {
        const double aj = out.angle(j);
        const Vec2 xj = meridian_dir(n, aj);
        int best = 0;
        double fbest = -std::numeric_limits<double>::max();
        for (int k = 0; k < M + (periodic ? 0 : 1); ++k) {
            const double v = dot(dense[k], xj);
            if (v > fbest) {
                fbest = v;
                best = k;
            }
        }
        const double step = span / M;
        double a = lo + (best - 1) * step;
        double b = lo + (best + 1) * step;
        if (!periodic) {
            a = std::max(a, lo);
            b = std::min(b, lo + span);
        }
        auto f = [&](double psi) { return dot(curve(psi), xj); };
        out.values[j] = std::max(fbest, golden_max(f, a, b));
    }
    return out;
}

}  // namespace

RadialGraph support_to_radial(const SupportField& u) {
    validate_field(u);
    const Vec2 origin = center_to_point(u.n, u.center);
    const auto s = polar_samples(u, origin);
    const auto interp = radial_interpolant(u.n, s);

    RadialGraph g;
    g.ambient = Ambient::euclidean;
    g.n = u.n;
    g.resolution = u.resolution;
    g.center = u.center;
    g.values.resize(static_cast<size_t>(u.resolution));
    for (int j = 0; j < u.resolution; ++j) {
        double a = g.angle(j);
        if (u.n == 1) {
            while (a < s.psi.front()) a += 2.0 * kPi;
            while (a >= s.psi.front() + 2.0 * kPi) a -= 2.0 * kPi;
        }
        g.values[j] = interp(a);
    }
    validate_graph(g);
    return g;
}

SupportField radial_to_support(const RadialGraph& g) {
    validate_graph(g);
    if (g.ambient != Ambient::euclidean)
        throw ConfigError("support conversion expects a Euclidean graph; project first");
    RadialSamples s;
    s.psi.resize(static_cast<size_t>(g.resolution));
    s.r = g.values;
    for (int i = 0; i < g.resolution; ++i) s.psi[i] = g.angle(i);
    const auto interp = radial_interpolant(g.n, s);
    auto curve = [&](double psi) { return interp(psi) * meridian_dir(g.n, psi); };
    SupportField out = g.n == 1 ? support_from_curve(1, g.resolution, curve, 0.0, 2.0 * kPi, true)
                                : support_from_curve(2, g.resolution, curve, 0.0, kPi, false);
    out.center = g.center;
    return out;
}

// -- chart bookkeeping ------------------------------------------------------------

namespace {

using Vec3 = std::array<double, 3>;

inline double pair_form(int kappa, const Vec3& a, const Vec3& b) {
    if (kappa == 1) return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    return a[2] * b[2] - a[0] * b[0] - a[1] * b[1];  // timelike last
}

Vec3 lift_local(int kappa, const Vec2& y) {
    const double s = 1.0 + kappa * (y[0] * y[0] + y[1] * y[1]);
    if (s <= 0.0) throw OutOfDomain("chart point outside the projection domain");
    const double d = std::sqrt(s);
    return {y[0] / d, y[1] / d, 1.0 / d};
}

struct LocalAxes {
    Vec3 f0, f1, q;
};

// Gram-Schmidt about the lifted target. The projection point q is unit with
// <q,q> = +1 in both metrics; the chart axes are unit with <f,f> = sign,
// sign = +1 (kappa = 1) or -1 (spacelike, kappa = -1).
LocalAxes local_axes(int kappa, const Vec2& target) {
    const Vec3 q = lift_local(kappa, target);
    const double sign = kappa == 1 ? 1.0 : -1.0;
    auto make_axis = [&](Vec3 v, const Vec3* prev) {
        const double cq = pair_form(kappa, v, q);
        for (int i = 0; i < 3; ++i) v[i] -= cq * q[i];
        if (prev) {
            const double cp = pair_form(kappa, v, *prev) / sign;
            for (int i = 0; i < 3; ++i) v[i] -= cp * (*prev)[i];
        }
        const double nn = pair_form(kappa, v, v) / sign;
        if (!(nn > 0.0)) throw OutOfDomain("degenerate chart frame");
        for (int i = 0; i < 3; ++i) v[i] /= std::sqrt(nn);
        return v;
    };
    const Vec3 f0 = make_axis({1, 0, 0}, nullptr);
    const Vec3 f1 = make_axis({0, 1, 0}, &f0);
    return {f0, f1, q};
}

}  // namespace

ChartFrame ChartFrame::identity(int kappa) {
    ChartFrame f;
    f.kappa = kappa;
    return f;
}

std::array<double, 3> ChartFrame::ambient_point(const Vec2& y) const {
    const Vec3 L = kappa == 0 ? Vec3{y[0], y[1], 0.0} : lift_local(kappa, y);
    Vec3 out{0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) out[i] += cols[k][i] * L[k];
    return out;
}

void ChartFrame::recenter(const Vec2& target) {
    if (kappa == 0) return;
    const auto ax = local_axes(kappa, target);
    const std::array<Vec3, 3> local{ax.f0, ax.f1, ax.q};
    std::array<std::array<double, 3>, 3> next{};
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 3; ++i) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += cols[k][i] * local[c][k];
            next[c][i] = s;
        }
    cols = next;
}

Vec2 reproject_point(int kappa, const Vec2& y, const Vec2& target) {
    if (kappa == 0) return y - target;
    const auto ax = local_axes(kappa, target);
    const Vec3 Y = lift_local(kappa, y);
    const double den = pair_form(kappa, Y, ax.q);
    if (den <= 0.0) throw OutOfDomain("point leaves the recentered projection domain");
    const double sign = kappa == 1 ? 1.0 : -1.0;
    return {sign * pair_form(kappa, Y, ax.f0) / den, sign * pair_form(kappa, Y, ax.f1) / den};
}

SupportField reproject_support(const SupportField& u, int kappa, const Vec2& target,
                               ChartFrame* frame) {
    validate_field(u);
    if (kappa == 0) throw ConfigError("reprojection is a space-form operation");
    const Vec2 t_pt = center_to_point(u.n, target);
    const auto s = polar_samples(u, t_pt);
    const auto interp = radial_interpolant(u.n, s);
    auto curve = [&](double psi) {
        const Vec2 p_abs = t_pt + interp(psi) * meridian_dir(u.n, psi);
        return reproject_point(kappa, p_abs, t_pt);
    };
    SupportField out = u.n == 1
                           ? support_from_curve(1, u.resolution, curve, 0.0, 2.0 * kPi, true)
                           : support_from_curve(2, u.resolution, curve, 0.0, kPi, false);
    if (frame) frame->recenter(t_pt);
    return out;
}

}  // namespace gcf
