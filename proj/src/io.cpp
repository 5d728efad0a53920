#include "gcf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gcf {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "' for reading");
    return in;
}

double parse_double(const std::string& tok, const std::string& path) {
    try {
        size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric token '" + tok + "' in " + path);
    }
}

void write_columns(std::ofstream& out, const std::string& header,
                   const std::vector<const std::vector<double>*>& cols, long stride) {
    out << header << "\n";
    const size_t rows = cols.empty() ? 0 : cols.front()->size();
    for (size_t r = 0; r < rows; ++r) {
        if (r % static_cast<size_t>(stride) != 0 && r + 1 != rows) continue;
        for (size_t c = 0; c < cols.size(); ++c) {
            if (c) out << ',';
            out << format_g17((*cols[c])[r]);
        }
        out << "\n";
    }
}

}  // namespace

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_support_snapshot(const std::string& path, const SupportField& u) {
    validate_field(u);
    auto out = open_out(path);
    out << u.n << ' ' << u.resolution;
    if (u.n == 1) {
        out << ' ' << format_g17(u.center[0]) << ' ' << format_g17(u.center[1]);
    } else {
        out << " 0 0 " << format_g17(u.center[0]);
    }
    out << "\n";
    for (double v : u.values) out << format_g17(v) << "\n";
}

SupportField read_support_snapshot(const std::string& path) {
    auto in = open_in(path);
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("empty snapshot " + path);
    std::istringstream hs(header);
    SupportField u;
    hs >> u.n >> u.resolution;
    if (!hs) throw ConfigError("bad snapshot header in " + path);
    std::vector<double> c;
    std::string tok;
    while (hs >> tok) c.push_back(parse_double(tok, path));
    if (static_cast<int>(c.size()) != u.n + 1)
        throw ConfigError("snapshot header must carry n+1 center components");
    u.center = u.n == 1 ? Vec2{c[0], c[1]} : Vec2{c[2], 0.0};
    if (u.n == 2 && (c[0] != 0.0 || c[1] != 0.0))
        throw ConfigError("axisymmetric snapshot center must lie on the axis");
    u.values.reserve(static_cast<size_t>(std::max(u.resolution, 0)));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        u.values.push_back(parse_double(line, path));
    }
    validate_field(u);
    return u;
}

void write_radial_snapshot(const std::string& path, const RadialGraph& g) {
    validate_graph(g);
    auto out = open_out(path);
    out << ambient_name(g.ambient) << ' ' << g.n << ' ' << g.resolution;
    if (g.n == 1) {
        out << ' ' << format_g17(g.center[0]) << ' ' << format_g17(g.center[1]);
    } else {
        out << " 0 0 " << format_g17(g.center[0]);
    }
    out << "\n";
    for (double v : g.values) out << format_g17(v) << "\n";
}

RadialGraph read_radial_snapshot(const std::string& path) {
    auto in = open_in(path);
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("empty snapshot " + path);
    std::istringstream hs(header);
    std::string ambient;
    RadialGraph g;
    hs >> ambient >> g.n >> g.resolution;
    if (!hs) throw ConfigError("bad snapshot header in " + path);
    g.ambient = parse_ambient(ambient);
    std::vector<double> c;
    std::string tok;
    while (hs >> tok) c.push_back(parse_double(tok, path));
    if (static_cast<int>(c.size()) != g.n + 1)
        throw ConfigError("snapshot header must carry n+1 center components");
    g.center = g.n == 1 ? Vec2{c[0], c[1]} : Vec2{c[2], 0.0};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        g.values.push_back(parse_double(line, path));
    }
    validate_graph(g);
    return g;
}

void write_flow_trace_csv(const std::string& path, const FlowTrace& trace, long stride) {
    auto out = open_out(path);
    write_columns(out, "tau,volume,r_minus,r_plus,k_min,k_max,pinching,dt",
                  {&trace.tau, &trace.volume, &trace.r_minus, &trace.r_plus, &trace.k_min,
                   &trace.k_max, &trace.pinching, &trace.dt},
                  stride);
}

void write_normalized_trace_csv(const std::string& path, const NormalizedTrace& trace,
                                const std::vector<double>& monotone_q, long stride) {
    if (monotone_q.size() != trace.size())
        throw ConfigError("monotone column length does not match the trace");
    auto out = open_out(path);
    write_columns(
        out,
        "t,tau,volume,r_minus,r_plus,roundness,soliton_residual,entropy,monotone_q,psi_min,psi_max",
        {&trace.t, &trace.tau, &trace.volume, &trace.r_minus, &trace.r_plus, &trace.roundness,
         &trace.soliton_residual, &trace.entropy, &monotone_q, &trace.psi_min, &trace.psi_max},
        stride);
}

void write_oracle_csv(const std::string& path, const SphereSolution& sol, int samples) {
    auto out = open_out(path);
    out << "tau,radius\n";
    for (int k = 0; k <= samples; ++k) {
        const double tau = sol.t_star * k / samples;
        out << format_g17(tau) << ',' << format_g17(sol.radius_at(tau)) << "\n";
    }
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    auto out = open_out(path);
    for (const auto& [k, v] : entries) out << k << '=' << v << "\n";
}

std::vector<std::pair<std::string, std::string>> read_manifest(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("manifest line without '=' in " + path);
        entries.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return entries;
}

void write_text(const std::string& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
}

}  // namespace gcf
