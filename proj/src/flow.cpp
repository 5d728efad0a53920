#include "gcf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gcf {

namespace {

constexpr double kPi = std::numbers::pi;

// Support and squared gradient measured about the chart origin (the center
// bookkeeping is folded back in; psi is a function of the absolute position).
void origin_support(const SupportField& u, std::vector<double>& uo, std::vector<double>& go) {
    const int N = u.resolution;
    const auto d1 = diff1(u);
    uo.resize(N);
    go.resize(N);
    for (int i = 0; i < N; ++i) {
        const double a = u.angle(i);
        double tangential;
        if (u.n == 1) {
            uo[i] = u.values[i] + u.center[0] * std::cos(a) + u.center[1] * std::sin(a);
            tangential = -u.center[0] * std::sin(a) + u.center[1] * std::cos(a);
        } else {
            uo[i] = u.values[i] + u.center[0] * std::cos(a);
            tangential = -u.center[0] * std::sin(a);
        }
        const double g = d1[i] + tangential;
        go[i] = g * g;
    }
}

double auto_psi_bound(const SupportField& u, const FlowConfig& cfg) {
    if (cfg.effective_psi_kind() == PsiKind::constant_one) return 1.0;
    const auto psi0 = eval_psi(u, cfg, 0.0);
    const auto [lo, hi] = std::minmax_element(psi0.begin(), psi0.end());
    if (*lo <= 0.0) throw PsiBoundViolated("initial speed factor is not positive");
    // headroom over the initial range; contracting runs only tighten it
    return 10.0 * std::max({1.0, *hi, 1.0 / *lo});
}

}  // namespace

void FlowConfig::validate() const {
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (kappa != -1 && kappa != 0 && kappa != 1) throw ConfigError("kappa must be -1, 0 or 1");
    if (psi_bound_A != 0.0 && psi_bound_A < 1.0)
        throw ConfigError("psi bound A must be at least 1");
    if (!(cfl_safety > 0.0) || cfl_safety > 100.0)
        throw ConfigError("cfl safety factor must lie in (0, 100]");
    if (!(extinction_radius > 0.0)) throw ConfigError("extinction radius must be positive");
    if (max_steps <= 0) throw ConfigError("max step count must be positive");
    if (!(restart_fraction > 0.0) || restart_fraction >= 1.0)
        throw ConfigError("restart fraction must lie in (0, 1)");
    if (psi_kind == PsiKind::custom && !custom_psi)
        throw ConfigError("custom psi selected without a callback");
}

PsiKind FlowConfig::effective_psi_kind() const {
    if (psi_kind == PsiKind::custom) return PsiKind::custom;
    return kappa == 0 ? PsiKind::constant_one : psi_kind;
}

std::vector<double> eval_psi(const SupportField& u, const FlowConfig& cfg, double bound_A,
                             std::optional<double> t_rescale) {
    const int N = u.resolution;
    const PsiKind kind = cfg.effective_psi_kind();
    if (kind == PsiKind::constant_one) return std::vector<double>(N, 1.0);

    std::vector<double> uo, go;
    origin_support(u, uo, go);
    if (kind == PsiKind::custom) return cfg.custom_psi(uo, go);

    const double a = 0.5 * ((u.n + 2) * cfg.alpha + 1.0);
    const double b = 0.5 * (1.0 - (u.n + 2) * cfg.alpha);
    const double scale = t_rescale ? std::exp(-2.0 * *t_rescale) : 1.0;
    std::vector<double> psi(N);
    for (int i = 0; i < N; ++i) {
        const double base1 = 1.0 + cfg.kappa * scale * (uo[i] * uo[i] + go[i]);
        const double base2 = 1.0 + cfg.kappa * scale * uo[i] * uo[i];
        if (base1 <= 0.0 || base2 <= 0.0)
            throw OutOfDomain("body left the projection domain (psi base <= 0)");
        psi[i] = std::pow(base1, a) * std::pow(base2, b);
        if (!std::isfinite(psi[i])) throw NonFinite("speed factor");
        if (bound_A > 0.0 && (psi[i] > bound_A || psi[i] < 1.0 / bound_A))
            throw PsiBoundViolated("psi = " + std::to_string(psi[i]) +
                                   " outside [1/A, A], A = " + std::to_string(bound_A));
    }
    return psi;
}

std::vector<double> flow_rhs(const SupportField& u, const FlowConfig& cfg, double bound_A) {
    const auto curv = eval_weingarten(u);
    const auto psi = eval_psi(u, cfg, bound_A);
    std::vector<double> rhs(u.values.size());
    for (size_t i = 0; i < rhs.size(); ++i)
        rhs[i] = -psi[i] * std::pow(curv.gauss_k[i], cfg.alpha);
    return rhs;
}

double cfl(const FlowState& state, const FlowConfig& cfg) {
    const SupportField& u = state.field;
    const double h = u.h();
    const auto curv = eval_weingarten(u);
    const auto psi = eval_psi(u, cfg, state.psi_bound);

    double diff_rate = 0.0;  // max of alpha psi K^alpha / lambda_min per point
    double advect = std::numeric_limits<double>::max();
    for (int i = 0; i < u.resolution; ++i) {
        const double speed = psi[i] * std::pow(curv.gauss_k[i], cfg.alpha);
        double lam = curv.radii1[i];
        if (u.n == 2) lam = std::min(lam, curv.radii2[i]);
        diff_rate = std::max(diff_rate, cfg.alpha * speed / lam);
        if (u.values[i] > 0.0) advect = std::min(advect, u.values[i] / speed);
    }
    double dt = h * h / diff_rate;
    if (advect < std::numeric_limits<double>::max()) dt = std::min(dt, advect / 10.0);
    return cfg.cfl_safety * dt;
}

FlowState step(const FlowState& state, const FlowConfig& cfg, double dt) {
    const SupportField& u = state.field;
    const size_t N = u.values.size();

    SupportField stage = u;
    auto eval = [&](const std::vector<double>& base, const std::vector<double>& k,
                    double c) -> std::vector<double> {
        for (size_t i = 0; i < N; ++i) stage.values[i] = base[i] + c * k[i];
        return flow_rhs(stage, cfg, state.psi_bound);
    };

    const auto k1 = flow_rhs(u, cfg, state.psi_bound);
    const auto k2 = eval(u.values, k1, 0.5 * dt);
    const auto k3 = eval(u.values, k2, 0.5 * dt);
    const auto k4 = eval(u.values, k3, dt);

    FlowState next = state;
    for (size_t i = 0; i < N; ++i)
        next.field.values[i] =
            u.values[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    next.tau += dt;
    next.step_count += 1;

    const auto curv = eval_weingarten(next.field);  // convexity re-check
    next.k_min = curv.k_min;
    next.k_max = curv.k_max;
    next.geometry = body_geometry(next.field);
    return next;
}

FlowState make_flow_state(SupportField u0, const FlowConfig& cfg) {
    cfg.validate();
    validate_field(u0);

    FlowState s;
    s.frame = ChartFrame::identity(cfg.kappa);
    s.field = std::move(u0);
    const auto curv = eval_weingarten(s.field);
    s.k_min = curv.k_min;
    s.k_max = curv.k_max;
    s.geometry = body_geometry(s.field);

    if (cfg.kappa == -1) {
        const auto pts = boundary_points(s.field);
        for (const auto& p : pts)
            if (norm(p) >= 1.0)
                throw OutOfDomain("body does not fit inside the unit chart ball");
    }
    s.psi_bound = cfg.psi_bound_A > 0.0 ? cfg.psi_bound_A : auto_psi_bound(s.field, cfg);
    return s;
}

void FlowTrace::push(const FlowState& s, double step_dt) {
    tau.push_back(s.tau);
    volume.push_back(s.geometry.volume);
    r_minus.push_back(s.geometry.r_minus);
    r_plus.push_back(s.geometry.r_plus);
    k_min.push_back(s.k_min);
    k_max.push_back(s.k_max);
    pinching.push_back(s.geometry.r_plus * s.geometry.r_plus / s.geometry.r_minus);
    dt.push_back(step_dt);
}

double pinching_diagnostic(const FlowTrace& trace) {
    if (trace.size() == 0) throw InsufficientData("empty flow trace");
    return *std::max_element(trace.pinching.begin(), trace.pinching.end());
}

namespace {

// Keeps the tracked center on the Steiner point. Translation is exact algebra
// and used whenever the offset drifts; re-projection is reserved for the
// space-form cases where the chart margin degrades.
void recenter_if_needed(FlowState& s, const FlowConfig& cfg, int& restarts) {
    const Vec2 offset = s.geometry.steiner - s.field.center;
    const double off = norm(offset);
    const double rp = s.geometry.r_plus;
    if (off <= 0.05 * rp) return;

    if (cfg.kappa != 0) {
        double chart_extent = 0.0;
        for (const auto& p : boundary_points(s.field)) chart_extent = std::max(chart_extent, norm(p));
        double ratio;
        if (cfg.kappa == 1) {
            const double far = std::atan(chart_extent);
            ratio = std::atan(rp) / (kPi / 2.0 - far);
        } else {
            if (chart_extent >= 1.0) throw OutOfDomain("body left the unit chart ball");
            ratio = rp / (1.0 - chart_extent);
        }
        const double target_off = norm(s.geometry.steiner);
        if (ratio > 0.5 && target_off > 0.05 * rp) {
            s.field = reproject_support(s.field, cfg.kappa, s.geometry.steiner, &s.frame);
            const auto curv = eval_weingarten(s.field);
            s.k_min = curv.k_min;
            s.k_max = curv.k_max;
            s.geometry = body_geometry(s.field);
            ++restarts;
            return;
        }
    }
    translate_center(s.field, s.geometry.steiner);
    s.geometry = body_geometry(s.field);
}

RestartState capture_restart(FlowState s, const FlowConfig& cfg, int& restarts) {
    // anchor the chart at the extinction-point estimate before handing off
    if (cfg.kappa != 0) {
        s.field = reproject_support(s.field, cfg.kappa, s.geometry.steiner, &s.frame);
        ++restarts;
    } else {
        translate_center(s.field, s.geometry.steiner);
    }
    return RestartState{std::move(s.field), s.tau, s.frame};
}

}  // namespace

FlowRunResult run_to_extinction(const SupportField& u0, const FlowConfig& cfg) {
    FlowRunResult res;
    FlowState state = make_flow_state(u0, cfg);
    const double r_plus_initial = state.geometry.r_plus;
    int restarts = 0;

    res.trace.push(state, 0.0);
    while (state.geometry.r_plus >= cfg.extinction_radius) {
        if (state.step_count >= cfg.max_steps)
            throw StalledFlow("step budget exhausted before extinction");
        double dt = cfl(state, cfg);
        if (!(dt > 1e-18 * std::max(1.0, state.tau)))
            throw StalledFlow("time step underflow before extinction");

        FlowState next = state;
        for (int attempt = 0;; ++attempt) {
            try {
                next = step(state, cfg, dt);
                break;
            } catch (const ConvexityLost&) {
                if (attempt >= 8) throw;
                dt *= 0.5;
            }
        }
        state = std::move(next);
        recenter_if_needed(state, cfg, restarts);
        res.trace.push(state, dt);

        if (cfg.capture_restart && !res.restart &&
            state.geometry.r_plus < cfg.restart_fraction * r_plus_initial) {
            res.restart = capture_restart(state, cfg, restarts);
            // the snapshot's recentering also serves the ongoing run
            if (cfg.kappa != 0) {
                state.field = res.restart->field;
                state.frame = res.restart->frame;
                const auto curv = eval_weingarten(state.field);
                state.k_min = curv.k_min;
                state.k_max = curv.k_max;
                state.geometry = body_geometry(state.field);
            }
            if (cfg.stop_after_restart) break;
        }
    }

    // closed-form remainder of the centered-sphere collapse below the threshold
    const double rp = state.geometry.r_plus;
    const double m = state.field.n * cfg.alpha + 1.0;
    const double psi_center =
        cfg.effective_psi_kind() == PsiKind::projected ? 1.0 + cfg.kappa * rp * rp : 1.0;
    res.report.t_star = state.tau + std::pow(rp, m) / (m * psi_center);
    res.report.restarts = restarts;
    res.report.pinching_max = pinching_diagnostic(res.trace);
    const Vec2 q = state.geometry.steiner;
    if (cfg.kappa == 0) {
        res.report.extinction_point = {q[0], q[1], 0.0};
        if (state.field.n == 2) res.report.extinction_point = {0.0, q[0], 0.0};
    } else {
        const Vec2 q_pt = state.field.n == 1 ? q : Vec2{0.0, q[0]};
        res.report.extinction_point = state.frame.ambient_point(q_pt);
    }
    res.final_state = std::move(state);
    return res;
}

}  // namespace gcf
