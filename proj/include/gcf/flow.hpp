#pragma once

// The unnormalized contracting flow u_tau = -psi K^alpha on support fields:
// speed-factor evaluation, explicit RK4 stepping under a two-limit CFL rule,
// center tracking, extinction detection with closed-form tail extrapolation,
// and the run diagnostics (pinching trace, restarts).

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "gcf/spaceform.hpp"
#include "gcf/sphere_calculus.hpp"

namespace gcf {

enum class PsiKind { projected, constant_one, custom };

struct FlowConfig {
    double alpha = 1.0;
    int kappa = 0;
    PsiKind psi_kind = PsiKind::projected;  // forced to constant_one for kappa = 0
    double psi_bound_A = 0.0;               // 0: derive from the initial body
    double cfl_safety = 0.25;
    double extinction_radius = 1e-3;
    long max_steps = 20'000'000;
    double restart_fraction = 0.1;  // r_plus fraction that triggers the restart snapshot
    bool capture_restart = false;
    bool stop_after_restart = false;  // end the run once the snapshot is taken
    std::function<std::vector<double>(const std::vector<double>& u,
                                      const std::vector<double>& grad_sq)>
        custom_psi;  // only read for PsiKind::custom

    void validate() const;
    PsiKind effective_psi_kind() const;
};

struct FlowState {
    SupportField field;
    double tau = 0.0;
    long step_count = 0;
    BodyGeometry geometry;
    double k_min = 0.0;
    double k_max = 0.0;
    ChartFrame frame;
    double psi_bound = 0.0;  // active A for the [1/A, A] runtime check
};

struct FlowTrace {
    std::vector<double> tau, volume, r_minus, r_plus, k_min, k_max, pinching, dt;

    size_t size() const { return tau.size(); }
    void push(const FlowState& s, double step_dt);
};

struct ExtinctionReport {
    double t_star = 0.0;
    std::array<double, 3> extinction_point{0.0, 0.0, 0.0};
    double pinching_max = 0.0;
    int restarts = 0;
};

/// Restart snapshot for the normalized phase: the body re-anchored at the
/// extinction-point estimate once r_plus fell below the restart fraction.
struct RestartState {
    SupportField field;
    double tau = 0.0;
    ChartFrame frame;
};

struct FlowRunResult {
    ExtinctionReport report;
    FlowTrace trace;
    std::optional<RestartState> restart;
    FlowState final_state;
};

/// Speed factor psi per grid point, evaluated about the chart origin. With
/// `t_rescale` set, the squared lengths carry exp(-2t) (the rescaled flow's
/// coefficients). Bounds [1/A, A] are asserted when bound_A > 0.
std::vector<double> eval_psi(const SupportField& u, const FlowConfig& cfg, double bound_A,
                             std::optional<double> t_rescale = std::nullopt);

/// -psi K^alpha per grid point.
std::vector<double> flow_rhs(const SupportField& u, const FlowConfig& cfg, double bound_A);

/// Two-limit step control: diffusive h^2 limit of the linearized operator and
/// a tenth of the advective star-shape margin. Always positive.
double cfl(const FlowState& state, const FlowConfig& cfg);

/// One explicit RK4 update over dt; convexity is re-checked at every stage.
FlowState step(const FlowState& state, const FlowConfig& cfg, double dt);

FlowState make_flow_state(SupportField u0, const FlowConfig& cfg);

/// Integrates until the circumradius about the tracked center drops below the
/// extinction radius, then adds the closed-form collapse remainder to t_star.
FlowRunResult run_to_extinction(const SupportField& u0, const FlowConfig& cfg);

/// Max over the run of r_plus^2 / r_minus.
double pinching_diagnostic(const FlowTrace& trace);

}  // namespace gcf
