#pragma once

// The constant-curvature ambient side: warping function phi(rho), the gnomonic
// projection of the hemisphere / hyperboloid onto a tangent plane, Gauss
// curvature of radial graphs in both pictures, the pointwise curvature factor
// relating them, and conversions between radial graphs and support fields.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "gcf/sphere_calculus.hpp"

namespace gcf {

/// Ambient curvature kappa in {-1, 0, +1} with the warping function of the
/// geodesic polar metric d rho^2 + phi(rho)^2 dz^2.
struct SpaceformParams {
    int kappa = 0;

    double phi(double rho) const;
    double dphi(double rho) const;
    double ddphi(double rho) const;
    /// Largest admissible geodesic radius for projected bodies
    /// (pi/2 on the sphere, unbounded otherwise).
    double rho_limit() const;
};

SpaceformParams spaceform(int kappa);

enum class Ambient { sphere, euclidean, hyperbolic };

int ambient_kappa(Ambient a);
Ambient ambient_from_kappa(int kappa);
const char* ambient_name(Ambient a);
Ambient parse_ambient(const std::string& token);

/// Star-shaped hypersurface given by its radial distance over S^n: geodesic
/// radius rho(z_i) in a space form, or Euclidean radius r(z_i) in the chart.
/// Same grids as SupportField.
struct RadialGraph {
    Ambient ambient = Ambient::euclidean;
    int n = 1;
    int resolution = 0;
    std::vector<double> values;
    Vec2 center{0.0, 0.0};

    double h() const;
    double angle(int i) const;
};

void validate_graph(const RadialGraph& g);

/// Gnomonic image r = tan(rho) / rho / tanh(rho). Throws OutOfDomain when a
/// sphere graph reaches the equator rho >= pi/2.
RadialGraph project(const RadialGraph& g);

/// Inverse of project: rho = atan(r) / r / atanh(r). For kappa = -1 the chart
/// must stay inside the unit ball.
RadialGraph lift(const RadialGraph& g, int kappa);

/// ((1 + kappa(u^2 + g)) / (1 + kappa u^2))^((n+2)/2), g = |grad u|^2: the
/// ratio of space-form to chart Gauss curvature at a boundary point.
double curvature_factor(double u, double grad_norm_sq, int kappa, int n);

/// Gauss curvature of a radial graph in the space form, pointwise on the grid.
std::vector<double> gauss_curvature_spaceform_graph(const RadialGraph& g);

/// Same formula with phi = r, phi' = 1 (graph in the Euclidean chart).
std::vector<double> gauss_curvature_euclidean_graph(const RadialGraph& g);

/// Samples the boundary, converts to polar angles about the field's center and
/// resamples the radius onto the uniform grid (monotone cubic, no overshoot).
RadialGraph support_to_radial(const SupportField& u);

/// Support function of the body bounded by a Euclidean radial graph, evaluated
/// by maximizing <P(psi), x> over a densely resampled boundary curve.
SupportField radial_to_support(const RadialGraph& g);

// -- chart bookkeeping ---------------------------------------------------------

/// Frame of the current projection chart in the coordinates of the initial
/// model frame (meridian-reduced 3d model: R^3 for kappa = 1, R^{2,1} for
/// kappa = -1). Columns 0,1 are the chart axes, column 2 the projection point.
struct ChartFrame {
    int kappa = 0;
    std::array<std::array<double, 3>, 3> cols{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    static ChartFrame identity(int kappa);
    /// Model coordinates of a chart point.
    std::array<double, 3> ambient_point(const Vec2& y) const;
    /// Re-anchors the chart at `target` (current chart coordinates).
    void recenter(const Vec2& target);
};

/// Chart coordinates of y after re-anchoring the projection at `target`.
Vec2 reproject_point(int kappa, const Vec2& y, const Vec2& target);

/// Rebuilds the support field in the chart re-anchored at `target` (absolute
/// chart coordinates; typically the Steiner point). The result is measured
/// about the new chart origin. Updates `frame` when given.
SupportField reproject_support(const SupportField& u, int kappa, const Vec2& target,
                               ChartFrame* frame = nullptr);

// -- monotone cubic interpolation (shared by the conversions) -------------------

/// Fritsch-Carlson monotone cubic through strictly increasing abscissae.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y);
    double operator()(double xq) const;

private:
    std::vector<double> x_, y_, m_;
};

}  // namespace gcf
