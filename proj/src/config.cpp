#include "gcf/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "gcf/entropy.hpp"
#include "gcf/io.hpp"
#include "gcf/normalized.hpp"
#include "gcf/reference.hpp"

namespace gcf {

namespace {

const char* kVersion = "gcflow 1.0.0";

long parse_long(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
    }
}

double parse_dbl(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
    }
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "command") cfg.command = value;
    else if (key == "kappa") cfg.kappa = static_cast<int>(parse_long(key, value));
    else if (key == "n") cfg.n = static_cast<int>(parse_long(key, value));
    else if (key == "alpha") cfg.alpha = parse_dbl(key, value);
    else if (key == "N") cfg.resolution = static_cast<int>(parse_long(key, value));
    else if (key == "initial") cfg.initial = value;
    else if (key == "cfl_safety") cfg.cfl_safety = parse_dbl(key, value);
    else if (key == "extinction_radius") cfg.extinction_radius = parse_dbl(key, value);
    else if (key == "t_max") cfg.t_max = parse_dbl(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "seed") cfg.seed = parse_long(key, value);
    else if (key == "max_steps") cfg.max_steps = parse_long(key, value);
    else if (key == "psi_bound_A") cfg.psi_bound_A = parse_dbl(key, value);
    else if (key == "restart_fraction") cfg.restart_fraction = parse_dbl(key, value);
    else if (key == "trace_stride") cfg.trace_stride = parse_long(key, value);
    else throw ConfigError("unknown key '" + key + "'");
}

struct InitialBody {
    enum class Kind { ball, translated_ball, ellipse, file } kind;
    double a = 0.0, b = 0.0;
    std::string path;
};

InitialBody parse_initial(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ConfigError("initial body '" + spec + "' must look like kind:args");
    const std::string kind = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    InitialBody body{};
    if (kind == "file") {
        body.kind = InitialBody::Kind::file;
        body.path = args;
        if (args.empty()) throw ConfigError("initial=file: needs a path");
        return body;
    }
    std::vector<double> nums;
    std::istringstream as(args);
    std::string tok;
    while (std::getline(as, tok, ',')) nums.push_back(parse_dbl("initial", tok));
    if (kind == "ball") {
        if (nums.size() != 1) throw ConfigError("initial=ball:R takes one number");
        body.kind = InitialBody::Kind::ball;
        body.a = nums[0];
    } else if (kind == "translated_ball") {
        if (nums.size() != 2) throw ConfigError("initial=translated_ball:R,a takes two numbers");
        body.kind = InitialBody::Kind::translated_ball;
        body.a = nums[0];
        body.b = nums[1];
    } else if (kind == "ellipse") {
        if (nums.size() != 2) throw ConfigError("initial=ellipse:a,b takes two numbers");
        body.kind = InitialBody::Kind::ellipse;
        body.a = nums[0];
        body.b = nums[1];
    } else {
        throw ConfigError("unknown initial body kind '" + kind + "'");
    }
    return body;
}

// Largest chart distance of the analytic bodies, for the domain precheck.
double initial_extent(const InitialBody& b) {
    switch (b.kind) {
        case InitialBody::Kind::ball: return b.a;
        case InitialBody::Kind::translated_ball: return b.a + std::abs(b.b);
        case InitialBody::Kind::ellipse: return std::max(b.a, b.b);
        default: return 0.0;
    }
}

}  // namespace

void RunConfig::validate() const {
    static const std::vector<std::string> commands{"flow",    "normalized", "entropy",
                                                   "project", "oracle",     "report"};
    if (std::find(commands.begin(), commands.end(), command) == commands.end())
        throw ConfigError("command must be one of flow|normalized|entropy|project|oracle|report");
    if (kappa != -1 && kappa != 0 && kappa != 1) throw ConfigError("kappa must be -1, 0 or 1");
    if (n != 1 && n != 2) throw ConfigError("n must be 1 or 2");
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (resolution < 16) throw ConfigError("N must be at least 16");
    if (n == 1 && resolution % 2 != 0) throw ConfigError("N must be even for n = 1");
    if (!(cfl_safety > 0.0) || cfl_safety > 100.0)
        throw ConfigError("cfl_safety must lie in (0, 100]");
    if (!(extinction_radius > 0.0)) throw ConfigError("extinction_radius must be positive");
    if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (max_steps <= 0) throw ConfigError("max_steps must be positive");
    if (psi_bound_A != 0.0 && psi_bound_A < 1.0) throw ConfigError("psi_bound_A must be >= 1");
    if (!(restart_fraction > 0.0) || restart_fraction >= 1.0)
        throw ConfigError("restart_fraction must lie in (0, 1)");
    if (trace_stride < 1) throw ConfigError("trace_stride must be at least 1");

    const InitialBody body = parse_initial(initial);
    if (body.kind != InitialBody::Kind::file) {
        if (!(body.a > 0.0)) throw ConfigError("initial body size must be positive");
        if (body.kind == InitialBody::Kind::translated_ball && !(body.a > std::abs(body.b)))
            throw ConfigError("translated ball must contain its reference point (R > |a|)");
        if (body.kind == InitialBody::Kind::ellipse && !(body.b > 0.0))
            throw ConfigError("ellipse semi-axes must be positive");
        if (kappa == -1 && initial_extent(body) >= 1.0)
            throw ConfigError("initial body lies outside the unit-ball projection domain");
    }
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + " of " + path +
                              " is not key=value");
        try {
            apply_key(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(e.what()) + " (line " + std::to_string(lineno) +
                              " of " + path + ")");
        }
    }
    return cfg;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    std::string config_path;
    std::string command;
    std::vector<std::pair<std::string, std::string>> flags;

    size_t i = 0;
    if (i < args.size() && !args[i].starts_with("--")) command = args[i++];
    for (; i < args.size(); ++i) {
        if (!args[i].starts_with("--"))
            throw ConfigError("expected --key value, got '" + args[i] + "'");
        const std::string key = args[i].substr(2);
        if (i + 1 >= args.size()) throw ConfigError("flag --" + key + " is missing its value");
        const std::string value = args[++i];
        if (key == "config") config_path = value;
        else flags.emplace_back(key, value);
    }

    RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config_file(config_path);
    for (const auto& [k, v] : flags) apply_key(cfg, k, v);
    if (!command.empty()) cfg.command = command;
    cfg.validate();
    return cfg;
}

SupportField build_initial_body(const RunConfig& cfg) {
    const InitialBody body = parse_initial(cfg.initial);
    if (body.kind == InitialBody::Kind::file) return read_support_snapshot(body.path);

    SupportField u = make_support_field(cfg.n, cfg.resolution);
    for (int i = 0; i < cfg.resolution; ++i) {
        const double a = u.angle(i);
        switch (body.kind) {
            case InitialBody::Kind::ball:
                u.values[i] = body.a;
                break;
            case InitialBody::Kind::translated_ball:
                u.values[i] = body.a + body.b * std::cos(a);
                break;
            case InitialBody::Kind::ellipse:
                u.values[i] = cfg.n == 1 ? std::sqrt(body.a * body.a * std::cos(a) * std::cos(a) +
                                                     body.b * body.b * std::sin(a) * std::sin(a))
                                         : std::sqrt(body.a * body.a * std::sin(a) * std::sin(a) +
                                                     body.b * body.b * std::cos(a) * std::cos(a));
                break;
            default:
                break;
        }
    }
    return u;
}

FlowConfig flow_config(const RunConfig& cfg) {
    FlowConfig fc;
    fc.alpha = cfg.alpha;
    fc.kappa = cfg.kappa;
    fc.psi_kind = cfg.kappa == 0 ? PsiKind::constant_one : PsiKind::projected;
    fc.psi_bound_A = cfg.psi_bound_A;
    fc.cfl_safety = cfg.cfl_safety;
    fc.extinction_radius = cfg.extinction_radius;
    fc.max_steps = cfg.max_steps;
    fc.restart_fraction = cfg.restart_fraction;
    return fc;
}

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg) {
    return {
        {"version", kVersion},
        {"command", cfg.command},
        {"kappa", std::to_string(cfg.kappa)},
        {"n", std::to_string(cfg.n)},
        {"alpha", format_g17(cfg.alpha)},
        {"N", std::to_string(cfg.resolution)},
        {"initial", cfg.initial},
        {"cfl_safety", format_g17(cfg.cfl_safety)},
        {"extinction_radius", format_g17(cfg.extinction_radius)},
        {"t_max", format_g17(cfg.t_max)},
        {"seed", std::to_string(cfg.seed)},
        {"trace_stride", std::to_string(cfg.trace_stride)},
    };
}

void append_entropy_report(std::vector<std::pair<std::string, std::string>>& man,
                           const EntropyReport& rep, int n) {
    man.emplace_back("entropy_alpha", format_g17(rep.alpha));
    man.emplace_back("entropy_value", format_g17(rep.value));
    man.emplace_back("entropy_point_x", format_g17(rep.entropy_point[0]));
    if (n == 1) man.emplace_back("entropy_point_y", format_g17(rep.entropy_point[1]));
    man.emplace_back("entropy_lower_bound_ok", rep.lower_bound_ok ? "true" : "false");
    if (rep.has_fit) {
        man.emplace_back("entropy_c_fit", format_g17(rep.fit.c_fit));
        man.emplace_back("entropy_t0_fit", format_g17(rep.fit.t0_fit));
        man.emplace_back("entropy_max_violation", format_g17(rep.fit.max_violation));
    }
}

const char* kFlowPlot =
    "# gnuplot script emitted alongside trace.csv\n"
    "set datafile separator ','\n"
    "set key autotitle columnhead\n"
    "set xlabel 'tau'\n"
    "set logscale y\n"
    "plot 'trace.csv' using 1:4 with lines title 'r_plus', \\\n"
    "     'trace.csv' using 1:3 with lines title 'r_minus', \\\n"
    "     'trace.csv' using 1:7 with lines title 'pinching'\n";

const char* kNormalizedPlot =
    "# gnuplot script emitted alongside trace.csv\n"
    "set datafile separator ','\n"
    "set key autotitle columnhead\n"
    "set xlabel 't'\n"
    "set logscale y\n"
    "plot 'trace.csv' using 1:6 with lines title 'roundness', \\\n"
    "     'trace.csv' using 1:7 with lines title 'soliton residual', \\\n"
    "     'trace.csv' using 1:9 with lines title 'monotone quantity'\n";

const char* kOraclePlot =
    "# gnuplot script emitted alongside trace.csv\n"
    "set datafile separator ','\n"
    "set key autotitle columnhead\n"
    "set xlabel 'tau'\n"
    "plot 'trace.csv' using 1:2 with lines title 'radius'\n";

int run_flow(const RunConfig& cfg) {
    const SupportField body = build_initial_body(cfg);
    const FlowConfig fc = flow_config(cfg);
    const FlowRunResult res = run_to_extinction(body, fc);

    auto man = config_echo(cfg);
    man.emplace_back("t_star", format_g17(res.report.t_star));
    man.emplace_back("extinction_point",
                     format_g17(res.report.extinction_point[0]) + " " +
                         format_g17(res.report.extinction_point[1]) + " " +
                         format_g17(res.report.extinction_point[2]));
    man.emplace_back("pinching_max", format_g17(res.report.pinching_max));
    man.emplace_back("restarts", std::to_string(res.report.restarts));
    man.emplace_back("steps", std::to_string(res.final_state.step_count));
    man.emplace_back("final_tau", format_g17(res.final_state.tau));

    write_flow_trace_csv(join(cfg.output_dir, "trace.csv"), res.trace, cfg.trace_stride);
    write_manifest(join(cfg.output_dir, "manifest.txt"), man);
    write_support_snapshot(join(cfg.output_dir, "snapshot.txt"), res.final_state.field);
    write_text(join(cfg.output_dir, "plot.gp"), kFlowPlot);
    return 0;
}

int run_normalized_cmd(const RunConfig& cfg) {
    const SupportField body = build_initial_body(cfg);
    FlowConfig fc = flow_config(cfg);

    NormalizedState start;
    double restart_tau = 0.0;
    int restarts = 0;
    if (cfg.kappa != 0) {
        fc.capture_restart = true;
        fc.stop_after_restart = true;
        const FlowRunResult pre = run_to_extinction(body, fc);
        if (!pre.restart) throw StalledFlow("restart snapshot was never captured");
        restart_tau = pre.restart->tau;
        restarts = pre.report.restarts;
        start = make_normalized_state(pre.restart->field, pre.restart->frame, fc, restart_tau);
    } else {
        start = make_normalized_state(body, ChartFrame::identity(0), fc, 0.0);
    }

    const double t_end = start.t + cfg.t_max;
    const NormalizedRunResult res = run_normalized(start, fc, t_end);

    const double gamma = 2.0 * (cfg.n + 1) / (2.0 * cfg.n + 1.0);
    std::vector<double> monotone_q(res.trace.size());
    for (size_t i = 0; i < res.trace.size(); ++i)
        monotone_q[i] = res.trace.entropy[i] + res.fit.c_fit * std::exp(-gamma * res.trace.t[i]);

    auto man = config_echo(cfg);
    man.emplace_back("t_start", format_g17(start.t));
    man.emplace_back("t_end", format_g17(res.final_state.t));
    man.emplace_back("restart_tau", format_g17(restart_tau));
    man.emplace_back("restarts", std::to_string(restarts));
    man.emplace_back("steps", std::to_string(res.final_state.step_count));
    man.emplace_back("converged", res.converged ? "true" : "false");
    man.emplace_back("t_converged", format_g17(res.t_converged));
    man.emplace_back("roundness_final", format_g17(res.trace.roundness.back()));
    man.emplace_back("soliton_residual_final", format_g17(res.trace.soliton_residual.back()));
    man.emplace_back("decay_slope_minus", format_g17(res.decay.slope_minus));
    man.emplace_back("decay_slope_plus", format_g17(res.decay.slope_plus));

    EntropyReport rep;
    rep.alpha = cfg.alpha;
    rep.value = res.trace.entropy.back();
    rep.entropy_point = entropy_point(res.final_state.field, cfg.alpha).point;
    rep.lower_bound_ok = entropy_lower_bound_check(res.final_state.field, cfg.alpha);
    rep.has_fit = true;
    rep.fit = res.fit;
    append_entropy_report(man, rep, cfg.n);

    write_normalized_trace_csv(join(cfg.output_dir, "trace.csv"), res.trace, monotone_q,
                               cfg.trace_stride);
    write_manifest(join(cfg.output_dir, "manifest.txt"), man);
    write_support_snapshot(join(cfg.output_dir, "snapshot.txt"), res.final_state.field);
    write_text(join(cfg.output_dir, "plot.gp"), kNormalizedPlot);
    return 0;
}

int run_entropy(const RunConfig& cfg) {
    const SupportField body = build_initial_body(cfg);
    EntropyReport rep;
    rep.alpha = cfg.alpha;
    const auto ep = entropy_point(body, cfg.alpha);
    rep.value = ep.value;
    rep.entropy_point = ep.point;
    rep.lower_bound_ok = entropy_lower_bound_check(body, cfg.alpha);

    auto man = config_echo(cfg);
    append_entropy_report(man, rep, cfg.n);
    write_manifest(join(cfg.output_dir, "manifest.txt"), man);
    write_support_snapshot(join(cfg.output_dir, "snapshot.txt"), body);
    return 0;
}

int run_project(const RunConfig& cfg) {
    const InitialBody body = parse_initial(cfg.initial);
    if (body.kind != InitialBody::Kind::file)
        throw ConfigError("project expects initial=file:<radial snapshot>");
    const RadialGraph g = read_radial_snapshot(body.path);

    RadialGraph out;
    std::string direction;
    if (g.ambient == Ambient::euclidean) {
        if (cfg.kappa == 0)
            throw ConfigError("lifting a Euclidean graph needs kappa = +1 or -1");
        out = lift(g, cfg.kappa);
        direction = "lift";
    } else {
        out = project(g);
        direction = "project";
    }

    auto man = config_echo(cfg);
    man.emplace_back("direction", direction);
    man.emplace_back("ambient_in", ambient_name(g.ambient));
    man.emplace_back("ambient_out", ambient_name(out.ambient));
    write_manifest(join(cfg.output_dir, "manifest.txt"), man);
    write_radial_snapshot(join(cfg.output_dir, "snapshot.txt"), out);
    return 0;
}

int run_oracle(const RunConfig& cfg) {
    const InitialBody body = parse_initial(cfg.initial);
    if (body.kind != InitialBody::Kind::ball)
        throw ConfigError("oracle expects initial=ball:R (a centered sphere)");
    const SphereSolution sol = projected_sphere_ode(cfg.kappa, cfg.n, cfg.alpha, body.a);

    auto man = config_echo(cfg);
    man.emplace_back("t_star", format_g17(sol.t_star));
    write_oracle_csv(join(cfg.output_dir, "trace.csv"), sol);
    write_manifest(join(cfg.output_dir, "manifest.txt"), man);
    write_text(join(cfg.output_dir, "plot.gp"), kOraclePlot);
    return 0;
}

int run_report(const RunConfig& cfg) {
    const auto man = read_manifest(join(cfg.output_dir, "manifest.txt"));
    for (const auto& [k, v] : man) std::cout << k << " = " << v << "\n";
    std::ifstream trace(join(cfg.output_dir, "trace.csv"));
    if (trace) {
        std::string line, last;
        long rows = -1;  // header
        while (std::getline(trace, line))
            if (!line.empty()) {
                ++rows;
                last = line;
            }
        std::cout << "trace_rows = " << rows << "\n";
        std::cout << "trace_last = " << last << "\n";
    }
    return 0;
}

}  // namespace

int run(const RunConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.output_dir);
    if (cfg.command == "flow") return run_flow(cfg);
    if (cfg.command == "normalized") return run_normalized_cmd(cfg);
    if (cfg.command == "entropy") return run_entropy(cfg);
    if (cfg.command == "project") return run_project(cfg);
    if (cfg.command == "oracle") return run_oracle(cfg);
    return run_report(cfg);
}

int cli_main(const std::vector<std::string>& args) {
    try {
        return run(parse_config(args));
    } catch (const FlowError& e) {
        std::cerr << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace gcf
