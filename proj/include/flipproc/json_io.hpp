#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "flipproc/dynamics.hpp"
#include "flipproc/equivalence.hpp"
#include "flipproc/rooted_graph.hpp"
#include "flipproc/rule.hpp"
#include "flipproc/simulator.hpp"
#include "flipproc/step_kernel.hpp"
#include "flipproc/uniqueness.hpp"

// File formats. Vertices and parts are 1-based in every external format.

namespace flipproc::io {

using Json = nlohmann::ordered_json;

/// {"order": k, "entries": [{"from": code, "to": code, "p": "p/q"}],
///  "default": "identity"}. Unknown fields are rejected; "p" may be an
/// integer, "p/q" or an exact decimal string. Throws InputError, including for
/// rules that fail validation when `validate` is set.
Rule rule_from_json(const Json& j, bool validate = true);
/// Entries of the normalized rule, sorted by (from, to).
Json rule_to_json(const Rule& rule);

/// {"weights": ["1/2", ...], "values": [[...], ...]}; numbers or exact strings.
StepKernel kernel_from_json(const Json& j);
Json kernel_to_json(const StepKernel& w);

/// {"vertices": [names], "edges": [[u, v], ...], "roots": [names in order]}.
graph::RootedGraph rooted_graph_from_json(const Json& j);
Json rooted_graph_to_json(const graph::RootedGraph& g);

Json class_to_json(const graph::OrbitClass& cls);
/// [{"class": {"code", "a", "b"}, "size", "coeff": "p/q"}] in canonical order.
Json certificate_to_json(const CoeffVector& v);
Json verdict_to_json(const EquivalenceVerdict& v);
Json uniqueness_to_json(const UniquenessVerdict& v);

/// Header t,w_1_1,w_1_2,...; one row per state, upper triangle row-major.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
/// Header run,t,block_i,block_j,density,reference,abs_dev.
void write_simulation_csv(std::ostream& out, const sim::SimResult& result);
Json transference_to_json(const sim::TransferenceReport& report);

/// Parses a whole file. Throws InputError on I/O or syntax errors.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Formats a double with 17 significant digits.
std::string format_double(double x);

}  // namespace flipproc::io
