#pragma once

// Closed-form and high-accuracy ODE oracles for collapsing geodesic spheres.
// A centered sphere of radius rho collapses by
//     d rho / d tau = -(phi'(rho)/phi(rho))^(n alpha),
// and its gnomonic image of chart radius r by
//     d r / d tau = -(1 + kappa r^2) r^(-n alpha).
// These serve as independent ground truth for the PDE engine; the adaptive
// integrator targets local error well below the engine's tolerances.

#include <vector>

#include "gcf/errors.hpp"

namespace gcf {

struct SphereSolution {
    int kappa = 0;
    int n = 1;
    double alpha = 1.0;
    double rho0 = 1.0;      // initial radius (geodesic or chart, per flavor)
    double t_star = 0.0;    // extinction time

    /// Radius at time tau, clamped to 0 for tau >= t_star.
    double radius_at(double tau) const;

    // dense solution nodes (closed-form flavors leave these empty)
    std::vector<double> taus;
    std::vector<double> radii;
    std::vector<double> slopes;

    enum class Kind { euclidean_power, sphere_cosine, table } kind = Kind::table;
};

/// Geodesic-sphere collapse in the space form. Closed forms when available
/// (kappa = 0 any (n, alpha); kappa = 1, n = 1, alpha = 1), adaptive RK4 with
/// extinction event location otherwise.
SphereSolution sphere_ode(int kappa, int n, double alpha, double rho0);

/// Collapse of the projected (chart) radius under the projected speed
/// 1 + kappa r^2. Coincides with tan/tanh of sphere_ode pointwise in tau.
SphereSolution projected_sphere_ode(int kappa, int n, double alpha, double r0);

}  // namespace gcf
