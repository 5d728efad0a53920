#pragma once

// Snapshot, CSV and manifest emission. All files are UTF-8 text with LF line
// endings and full 17-significant-digit floats, so identical runs produce
// byte-identical artifacts.

#include <string>
#include <utility>
#include <vector>

#include "gcf/flow.hpp"
#include "gcf/normalized.hpp"
#include "gcf/reference.hpp"
#include "gcf/spaceform.hpp"

namespace gcf {

std::string format_g17(double x);

/// Support snapshot: header `n N center...` (n+1 center components), then one
/// value per line in grid order.
void write_support_snapshot(const std::string& path, const SupportField& u);
SupportField read_support_snapshot(const std::string& path);

/// Radial snapshot: same layout with a leading ambient token
/// (sphere | euclidean | hyperbolic).
void write_radial_snapshot(const std::string& path, const RadialGraph& g);
RadialGraph read_radial_snapshot(const std::string& path);

void write_flow_trace_csv(const std::string& path, const FlowTrace& trace, long stride = 1);

/// `monotone_q` carries the corrected entropy entropy + C exp(-2(n+1)t/(2n+1)).
void write_normalized_trace_csv(const std::string& path, const NormalizedTrace& trace,
                                const std::vector<double>& monotone_q, long stride = 1);

void write_oracle_csv(const std::string& path, const SphereSolution& sol, int samples = 512);

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);
std::vector<std::pair<std::string, std::string>> read_manifest(const std::string& path);

void write_text(const std::string& path, const std::string& content);

}  // namespace gcf
