#pragma once

#include <string>
#include <vector>

#include "gasketpile/engine.hpp"
#include "gasketpile/measure.hpp"

namespace gp {

/// Graph export: {"level", "sink", "vertices": ["p,q", ...] canonical order,
/// "edges": [[i, j, multiplicity], ...] with i < j, "sink_edges":
/// [[i, multiplicity], ...]}.
std::string graph_to_json(const GasketGraph& g);

/// Config round trip: {"level", "sink", "heights": [...]} in canonical
/// order. Reading rebuilds the graph through the shared cache and validates
/// the height count; malformed input throws with a one-line message.
std::string config_to_json(const SandpileConfig& c);
SandpileConfig config_from_json(const std::string& text);

/// Convergence table renderers. CSV columns: level, cell, integral_num,
/// integral_den, target_num, target_den, abs_error_decimal (20 significant
/// digits). The JSON mirror carries the same fields.
std::string table_to_csv(const std::vector<ConvergenceRow>& rows);
std::string table_to_json(const std::vector<ConvergenceRow>& rows);

/// Whole-file helpers.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace gp
