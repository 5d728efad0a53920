#pragma once

// The volume-fixed rescaled flow u_t = u - psi K^alpha / (mean of psi K^(alpha-1)),
// with the speed-factor arguments damped by exp(-2t). Volume is pinned to the
// unit ball multiplicatively after every step; diagnostics track roundness and
// the soliton defect of the evolving body.

#include <optional>
#include <vector>

#include "gcf/entropy.hpp"
#include "gcf/flow.hpp"

namespace gcf {

/// t = (1/(n+1)) log(|B(1)| / vol).
double time_map(double volume_unnormalized, int n);

struct NormalizedState {
    SupportField field;   // volume pinned to |B(1)|
    double t = 0.0;
    double tau = 0.0;     // accumulated unnormalized time
    long step_count = 0;
    ChartFrame frame;
    double psi_bound = 0.0;
};

/// Rescales a body to unit-ball volume and anchors t to its volume.
NormalizedState make_normalized_state(SupportField u, ChartFrame frame, const FlowConfig& cfg,
                                      double tau0 = 0.0);

struct NormalizedStepInfo {
    double psi_min = 1.0;
    double psi_max = 1.0;
    double eta = 1.0;  // mean of psi K^(alpha-1) at the step start
};

/// RK4 step with the nonlocal denominator re-evaluated per stage, followed by
/// the multiplicative volume renormalization; t advances by dt and tau by the
/// consistent exp(-(n alpha + 1) t) / eta increment.
NormalizedState normalized_step(const NormalizedState& state, const FlowConfig& cfg, double dt,
                                NormalizedStepInfo* info = nullptr);

double normalized_cfl(const NormalizedState& state, const FlowConfig& cfg);

/// max |lambda u - K^alpha| / max K^alpha about the Steiner point, with
/// lambda the mean of K^(alpha-1); zero exactly on a centered sphere.
double soliton_residual(const SupportField& u, double alpha);

/// (r_plus - r_minus) / r_plus about the Steiner point.
double roundness(const SupportField& u);

struct NormalizedTrace {
    std::vector<double> t, tau, volume, r_minus, r_plus, roundness, soliton_residual,
        entropy, psi_min, psi_max;

    size_t size() const { return t.size(); }
};

struct DecayFit {
    double slope_minus = 0.0;
    double slope_plus = 0.0;
};

/// Least-squares slopes of log r_minus / log r_plus (unnormalized radii)
/// against t over the trailing half of the trace.
DecayFit decay_exponent_fit(const std::vector<double>& r_minus_unnorm,
                            const std::vector<double>& r_plus_unnorm,
                            const std::vector<double>& t_trace);

struct NormalizedRunResult {
    NormalizedState final_state;
    NormalizedTrace trace;
    MonotoneFit fit;
    DecayFit decay;
    bool converged = false;
    double t_converged = 0.0;
};

/// Integrates to t_end (exactly, the last step is clamped), sampling the full
/// diagnostic row every step. Convergence latches after 100 consecutive steps
/// with roundness < 1e-3 and soliton residual < 1e-4.
NormalizedRunResult run_normalized(NormalizedState state, const FlowConfig& cfg, double t_end);

}  // namespace gcf
