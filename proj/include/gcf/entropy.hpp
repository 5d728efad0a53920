#pragma once

// The entropy functional of a convex body, its interior maximizer, and the
// corrected-monotonicity fit along normalized-flow traces.

#include <vector>

#include "gcf/sphere_calculus.hpp"

namespace gcf {

/// Power-mean entropy about the interior point z0 (absolute chart
/// coordinates): (alpha/(alpha-1)) log of the mean of u_{z0}^(1-1/alpha),
/// with the log-mean form at alpha = 1 (taken for |alpha-1| < 1e-4).
/// Throws PointNotInterior when u_{z0} <= 0 somewhere on the grid.
double entropy_at(const SupportField& u, const Vec2& z0, double alpha);

struct EntropyPointResult {
    Vec2 point{0.0, 0.0};  // the unique interior maximizer
    double value = 0.0;
    int iterations = 0;
};

/// Damped Newton ascent with Armijo backtracking; converged when the gradient
/// norm drops below 1e-10 * r_plus. The functional is strictly concave, so the
/// local maximizer is the global one.
EntropyPointResult entropy_point(const SupportField& u, double alpha);
EntropyPointResult entropy_point(const SupportField& u, double alpha, const Vec2& guess);

struct MonotoneFit {
    double c_fit = 0.0;
    double t0_fit = 0.0;
    double max_violation = 0.0;
    size_t t0_index = 0;
};

/// Smallest C >= 0 (bisection) such that entropy(t) + C exp(-2(n+1)t/(2n+1))
/// is non-increasing from some t0 in the first half of the trace; reports the
/// residual largest per-step increase at that (C, t0).
MonotoneFit monotone_quantity_trace(const std::vector<double>& entropy_trace,
                                    const std::vector<double>& t_trace, int n);

/// Entropy of the body rescaled to unit-ball volume is bounded below by zero;
/// checks E >= -1e-8 after the exact additive volume correction.
bool entropy_lower_bound_check(const SupportField& u, double alpha);

struct EntropyReport {
    double alpha = 1.0;
    double value = 0.0;
    Vec2 entropy_point{0.0, 0.0};
    bool lower_bound_ok = true;
    bool has_fit = false;
    MonotoneFit fit;
};

}  // namespace gcf
