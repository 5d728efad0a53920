#include "gcf/normalized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gcf {

namespace {

struct RhsEval {
    std::vector<double> f;
    double eta = 1.0;
    double psi_min = 1.0;
    double psi_max = 1.0;
};

RhsEval normalized_rhs(const SupportField& u, double t, const FlowConfig& cfg, double bound_A) {
    const auto curv = eval_weingarten(u);
    const auto psi = eval_psi(u, cfg, bound_A, t);
    const size_t N = u.values.size();

    std::vector<double> k_alpha(N), weighted(N);
    for (size_t i = 0; i < N; ++i) {
        k_alpha[i] = std::pow(curv.gauss_k[i], cfg.alpha);
        weighted[i] = psi[i] * k_alpha[i] / curv.gauss_k[i];  // psi K^(alpha-1)
    }
    RhsEval out;
    out.eta = mean_integral(u.n, weighted);
    if (!(out.eta > 0.0)) throw NonFinite("normalization denominator");
    out.f.resize(N);
    for (size_t i = 0; i < N; ++i) out.f[i] = u.values[i] - psi[i] * k_alpha[i] / out.eta;
    const auto [lo, hi] = std::minmax_element(psi.begin(), psi.end());
    out.psi_min = *lo;
    out.psi_max = *hi;
    return out;
}

double auto_psi_bound(const SupportField& u, double t, const FlowConfig& cfg) {
    if (cfg.effective_psi_kind() == PsiKind::constant_one) return 1.0;
    const auto psi0 = eval_psi(u, cfg, 0.0, t);
    const auto [lo, hi] = std::minmax_element(psi0.begin(), psi0.end());
    if (*lo <= 0.0) throw PsiBoundViolated("initial speed factor is not positive");
    return 10.0 * std::max({1.0, *hi, 1.0 / *lo});
}

// r_minus, r_plus about the Steiner point.
void steiner_radii(const SupportField& u, double& r_minus, double& r_plus) {
    const Vec2 offset = body_geometry(u).steiner - u.center;
    const auto d1 = diff1(u);
    r_minus = std::numeric_limits<double>::max();
    r_plus = 0.0;
    for (int i = 0; i < u.resolution; ++i) {
        const double us = u.values[i] - u.dir_dot(offset, i);
        r_minus = std::min(r_minus, us);
        r_plus = std::max(r_plus, std::sqrt(us * us + d1[i] * d1[i]));
    }
}

}  // namespace

double time_map(double volume_unnormalized, int n) {
    if (!(volume_unnormalized > 0.0) || !std::isfinite(volume_unnormalized))
        throw NonFinite("volume must be positive for the time map");
    return std::log(unit_ball_volume(n + 1) / volume_unnormalized) / (n + 1);
}

NormalizedState make_normalized_state(SupportField u, ChartFrame frame, const FlowConfig& cfg,
                                      double tau0) {
    cfg.validate();
    validate_field(u);
    const double vol = body_geometry(u).volume;
    const double t0 = time_map(vol, u.n);

    NormalizedState s;
    s.field = rescaled(u, std::exp(t0));
    s.t = t0;
    s.tau = tau0;
    s.frame = frame;
    s.psi_bound = cfg.psi_bound_A > 0.0 ? cfg.psi_bound_A : auto_psi_bound(s.field, t0, cfg);
    return s;
}

NormalizedState normalized_step(const NormalizedState& state, const FlowConfig& cfg, double dt,
                                NormalizedStepInfo* info) {
    const SupportField& u = state.field;
    const size_t N = u.values.size();
    const double m = u.n * cfg.alpha + 1.0;

    SupportField stage = u;
    auto eval = [&](const std::vector<double>& k, double c, double ts) {
        for (size_t i = 0; i < N; ++i) stage.values[i] = u.values[i] + c * k[i];
        return normalized_rhs(stage, ts, cfg, state.psi_bound);
    };

    const RhsEval e1 = normalized_rhs(u, state.t, cfg, state.psi_bound);
    const RhsEval e2 = eval(e1.f, 0.5 * dt, state.t + 0.5 * dt);
    const RhsEval e3 = eval(e2.f, 0.5 * dt, state.t + 0.5 * dt);
    const RhsEval e4 = eval(e3.f, dt, state.t + dt);

    NormalizedState next = state;
    for (size_t i = 0; i < N; ++i)
        next.field.values[i] =
            u.values[i] + dt / 6.0 * (e1.f[i] + 2.0 * e2.f[i] + 2.0 * e3.f[i] + e4.f[i]);
    next.t += dt;
    next.step_count += 1;

    // d tau / dt = exp(-(n alpha + 1) t) / eta, accumulated with the stages
    auto g = [&](double ts, double eta) { return std::exp(-m * ts) / eta; };
    next.tau += dt / 6.0 *
                (g(state.t, e1.eta) + 2.0 * g(state.t + 0.5 * dt, e2.eta) +
                 2.0 * g(state.t + 0.5 * dt, e3.eta) + g(state.t + dt, e4.eta));

    // pin the volume invariant
    const double vol = body_geometry(next.field).volume;
    next.field = rescaled(next.field, std::pow(unit_ball_volume(u.n + 1) / vol, 1.0 / (u.n + 1)));

    if (info) {
        info->psi_min = e1.psi_min;
        info->psi_max = e1.psi_max;
        info->eta = e1.eta;
    }
    return next;
}

double normalized_cfl(const NormalizedState& state, const FlowConfig& cfg) {
    const SupportField& u = state.field;
    const double h = u.h();
    const auto curv = eval_weingarten(u);
    const auto psi = eval_psi(u, cfg, state.psi_bound, state.t);

    std::vector<double> weighted(u.values.size());
    for (size_t i = 0; i < weighted.size(); ++i)
        weighted[i] = psi[i] * std::pow(curv.gauss_k[i], cfg.alpha - 1.0);
    const double eta = mean_integral(u.n, weighted);

    double diff_rate = 0.0;
    double advect = std::numeric_limits<double>::max();
    for (int i = 0; i < u.resolution; ++i) {
        const double speed = psi[i] * std::pow(curv.gauss_k[i], cfg.alpha) / eta;
        double lam = curv.radii1[i];
        if (u.n == 2) lam = std::min(lam, curv.radii2[i]);
        diff_rate = std::max(diff_rate, cfg.alpha * speed / lam);
        if (u.values[i] > 0.0) advect = std::min(advect, u.values[i] / speed);
    }
    double dt = h * h / diff_rate;
    if (advect < std::numeric_limits<double>::max()) dt = std::min(dt, advect / 10.0);
    dt = std::min(dt, 0.2);  // reaction term u has unit rate
    return cfg.cfl_safety * dt;
}

double soliton_residual(const SupportField& u, double alpha) {
    const auto curv = eval_weingarten(u);
    const Vec2 offset = body_geometry(u).steiner - u.center;
    std::vector<double> k_am1(u.values.size());
    for (size_t i = 0; i < k_am1.size(); ++i) k_am1[i] = std::pow(curv.gauss_k[i], alpha - 1.0);
    const double lambda = mean_integral(u.n, k_am1);

    double num = 0.0, den = 0.0;
    for (int i = 0; i < u.resolution; ++i) {
        const double us = u.values[i] - u.dir_dot(offset, i);
        const double ka = std::pow(curv.gauss_k[i], alpha);
        num = std::max(num, std::abs(lambda * us - ka));
        den = std::max(den, ka);
    }
    return num / den;
}

double roundness(const SupportField& u) {
    double r_minus, r_plus;
    steiner_radii(u, r_minus, r_plus);
    return (r_plus - r_minus) / r_plus;
}

DecayFit decay_exponent_fit(const std::vector<double>& r_minus_unnorm,
                            const std::vector<double>& r_plus_unnorm,
                            const std::vector<double>& t_trace) {
    const size_t m = t_trace.size();
    if (r_minus_unnorm.size() != m || r_plus_unnorm.size() != m)
        throw InsufficientData("radius and time traces differ in length");
    const size_t lo = m / 2;
    if (m - lo < 20) throw InsufficientData("decay fit needs at least 20 tail samples");

    auto slope = [&](const std::vector<double>& r) {
        double st = 0, sy = 0, stt = 0, sty = 0;
        const double cnt = static_cast<double>(m - lo);
        for (size_t i = lo; i < m; ++i) {
            const double y = std::log(r[i]);
            st += t_trace[i];
            sy += y;
            stt += t_trace[i] * t_trace[i];
            sty += t_trace[i] * y;
        }
        const double denom = stt - st * st / cnt;
        if (!(std::abs(denom) > 0.0)) throw InsufficientData("degenerate time window");
        return (sty - st * sy / cnt) / denom;
    };
    return {slope(r_minus_unnorm), slope(r_plus_unnorm)};
}

NormalizedRunResult run_normalized(NormalizedState state, const FlowConfig& cfg, double t_end) {
    cfg.validate();
    NormalizedRunResult res;

    Vec2 entropy_guess = body_geometry(state.field).steiner;
    auto sample = [&](const NormalizedState& s, double psi_lo, double psi_hi) {
        res.trace.t.push_back(s.t);
        res.trace.tau.push_back(s.tau);
        res.trace.volume.push_back(body_geometry(s.field).volume);
        double rm, rp;
        steiner_radii(s.field, rm, rp);
        res.trace.r_minus.push_back(rm);
        res.trace.r_plus.push_back(rp);
        res.trace.roundness.push_back((rp - rm) / rp);
        res.trace.soliton_residual.push_back(soliton_residual(s.field, cfg.alpha));
        const auto ep = entropy_point(s.field, cfg.alpha, entropy_guess);
        entropy_guess = ep.point;
        res.trace.entropy.push_back(ep.value);
        res.trace.psi_min.push_back(psi_lo);
        res.trace.psi_max.push_back(psi_hi);
    };

    {
        const auto psi0 = eval_psi(state.field, cfg, state.psi_bound, state.t);
        const auto [lo, hi] = std::minmax_element(psi0.begin(), psi0.end());
        sample(state, *lo, *hi);
    }

    int streak = 0;
    while (state.t < t_end - 1e-12) {
        if (state.step_count >= cfg.max_steps)
            throw StalledFlow("step budget exhausted in the normalized run");
        double dt = std::min(normalized_cfl(state, cfg), t_end - state.t);
        if (!(dt > 1e-16)) throw StalledFlow("normalized time step underflow");

        NormalizedStepInfo info;
        NormalizedState next = state;
        for (int attempt = 0;; ++attempt) {
            try {
                next = normalized_step(state, cfg, dt, &info);
                break;
            } catch (const ConvexityLost&) {
                if (attempt >= 8) throw;
                dt *= 0.5;
            }
        }
        state = std::move(next);
        sample(state, info.psi_min, info.psi_max);

        if (res.trace.roundness.back() < 1e-3 && res.trace.soliton_residual.back() < 1e-4) {
            if (++streak == 100 && !res.converged) {
                res.converged = true;
                res.t_converged = state.t;
            }
        } else {
            streak = 0;
        }
    }

    if (res.trace.size() >= 20)
        res.fit = monotone_quantity_trace(res.trace.entropy, res.trace.t, state.field.n);
    if (res.trace.size() >= 40) {
        std::vector<double> rm(res.trace.size()), rp(res.trace.size());
        for (size_t i = 0; i < res.trace.size(); ++i) {
            const double shrink = std::exp(-res.trace.t[i]);
            rm[i] = res.trace.r_minus[i] * shrink;
            rp[i] = res.trace.r_plus[i] * shrink;
        }
        res.decay = decay_exponent_fit(rm, rp, res.trace.t);
    }
    res.final_state = std::move(state);
    return res;
}

}  // namespace gcf
