#pragma once

// Discrete calculus for scalar fields on S^n and the convex-body functionals
// built from them.
//
//   n = 1: periodic uniform grid theta_i = i * 2pi/N.
//   n = 2: axisymmetric fields u(phi) on the staggered polar grid
//          phi_j = (j + 1/2) * pi/N, poles excluded; ghost values use even
//          reflection (smooth axisymmetric functions are even at both poles).
//
// Derivatives are 4th-order central differences. Quadrature is the midpoint
// trapezoid rule for n = 1 and a Fejer-type rule in cos(phi) for n = 2, so
// both integrate smooth fields to spectral accuracy.

#include <array>
#include <cmath>
#include <vector>

#include "gcf/errors.hpp"

namespace gcf {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double c, const Vec2& a) { return {c * a[0], c * a[1]}; }

/// Support function of a convex body, sampled on the grid over S^n.
/// `values[i]` is the support distance in direction x_i measured about
/// `center`. For n = 2 the body is axisymmetric and `center` holds the offset
/// along the symmetry axis in the first slot (second slot must be zero).
struct SupportField {
    int n = 1;
    int resolution = 0;
    std::vector<double> values;
    Vec2 center{0.0, 0.0};

    double h() const;
    double angle(int i) const;
    /// Meridian components of the unit direction x_i:
    /// n = 1 -> (cos t, sin t); n = 2 -> (sin phi, cos phi) as (s, z).
    Vec2 direction(int i) const;
    /// <z, x_i> for a chart point z (n = 2: z = (axis, 0), x_i axis comp = cos phi).
    double dir_dot(const Vec2& z, int i) const;
};

SupportField make_support_field(int n, int resolution, double fill = 0.0);
void validate_field(const SupportField& u);

// -- grid machinery ----------------------------------------------------------

std::vector<double> diff1(int n, const std::vector<double>& v);
std::vector<double> diff2(int n, const std::vector<double>& v);
inline std::vector<double> diff1(const SupportField& u) { return diff1(u.n, u.values); }
inline std::vector<double> diff2(const SupportField& u) { return diff2(u.n, u.values); }

double sphere_area(int n);              // |S^n|: 2pi or 4pi
double unit_ball_volume(int dim);       // |B^dim(1)|
/// Quadrature weights w_i with sum_i w_i f_i ~ integral of f over S^n
/// (axisymmetric integrand for n = 2). Cached per (n, N).
const std::vector<double>& quad_weights(int n, int resolution);
double integrate_sphere(int n, const std::vector<double>& f);
double mean_integral(int n, const std::vector<double>& f);

// -- curvature ----------------------------------------------------------------

/// Principal radii of curvature (eigenvalues of W = Hess u + u Id) and the
/// derived curvatures per grid point.
struct CurvatureField {
    std::vector<double> radii1;   // lambda_1 = u'' + u
    std::vector<double> radii2;   // lambda_2 = u' cot(phi) + u  (n = 2 only)
    std::vector<double> sigma_n;  // det W = product of the radii
    std::vector<double> gauss_k;  // 1 / det W
    std::vector<double> mean_h;   // sum of principal curvatures
    double lambda_min = 0.0;
    double k_min = 0.0;
    double k_max = 0.0;
};

/// Throws ConvexityLost when some radius drops to or below
/// 1e-10 * (circumradius about center); NonFinite on overflow.
CurvatureField eval_weingarten(const SupportField& u);

// -- body functionals ----------------------------------------------------------

struct BodyGeometry {
    double volume = 0.0;
    double r_minus = 0.0;     // inradius about center (min u)
    double r_plus = 0.0;      // circumradius about center (max |X|)
    double width_min = 0.0;   // min over x of u(x) + u(-x)
    double width_max = 0.0;
    Vec2 steiner{0.0, 0.0};   // Steiner point, absolute chart coordinates
};

/// Boundary recovery X(x_i) = grad u + u x_i, in absolute chart coordinates
/// (meridian (s, z) pairs for n = 2).
std::vector<Vec2> boundary_points(const SupportField& u);

/// |grad u|^2 per grid point.
std::vector<double> grad_norm_sq(const SupportField& u);

BodyGeometry body_geometry(const SupportField& u);

/// Sanity sandwich c(n) r_-^n r_+ <= vol <= c(n) r_- r_+^n with c(n) = |B^n|,
/// meaningful for bodies tracked about a near-central point. Diagnostic only.
bool volume_sandwich_ok(int n, const BodyGeometry& g);

/// Re-measures u about a new reference point (exact algebra on grid values).
void translate_center(SupportField& u, const Vec2& new_center);

/// Dilation of the body about the chart origin by `factor`.
SupportField rescaled(const SupportField& u, double factor);

}  // namespace gcf
