#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hodgefaas/complex.hpp"
#include "hodgefaas/diagnostics.hpp"
#include "hodgefaas/flows.hpp"
#include "hodgefaas/hodge.hpp"
#include "hodgefaas/topology.hpp"

namespace hodgefaas::io {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become InputError with line/column.
Json parse_json(std::string_view text, const std::string& source);
std::string read_file(const std::filesystem::path& path);
Json load_json(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

// Complex description:
//   {"nodes": [{"id", "label"?}], "edges": [{"id", "tail", "head", "label"?}],
//    "faces": [{"id", "boundary": [[edgeId, +-1], ...], "label"?}]}
// Unknown fields are rejected by name.
ComplexDescription complex_from_json(const Json& doc, const std::string& source);
Json complex_to_json(const ComplexDescription& desc);
CellComplex load_complex(const std::filesystem::path& path);

// Flow file: {"metric": "...", "values": {"edgeId": number, ...}}.
// Window file: {"windows": [<flow file>, ...]}.
struct ParsedFlows {
  std::vector<EdgeFlow> windows;
  std::vector<std::string> warnings;
  bool windowed = false;
};

EdgeFlow flow_from_json(const CellComplex& c, const Json& doc, std::vector<std::string>* warnings);
ParsedFlows flows_from_json(const CellComplex& c, const Json& doc);
ParsedFlows load_flows(const CellComplex& c, const std::filesystem::path& path);
Json flow_to_json(const CellComplex& c, const EdgeFlow& f);
Json flows_to_json(const CellComplex& c, const std::vector<EdgeFlow>& flows);

// {"base_rate", "edge_increments": {edgeId: dl}, "seed", "windows"}
WorkloadSpec workload_from_json(const Json& doc);
Json workload_to_json(const WorkloadSpec& w);
// {"cold_latency": {nodeId: ms}}
ColdStartSpec coldstart_from_json(const Json& doc);
// {"metric", "values": {nodeId: x}}; missing nodes default to 0 with a warning.
NodeMetric node_metric_from_json(const CellComplex& c, const Json& doc,
                                 std::vector<std::string>* warnings);
// {"metric", "series": {nodeId: [samples]}}; isolated nodes may be omitted.
NodeMetricSeries node_series_from_json(const CellComplex& c, const Json& doc);

Json betti_to_json(const BettiNumbers& b);
Json spectrum_to_json(int degree, const std::vector<double>& eigs, const SpectralGap& gap);
Json decomposition_to_json(const CellComplex& c, const EdgeFlow& f, const HodgeDecomposition& d);
/// Frozen schema: edge,f,f_grad,f_curl,h
std::string decomposition_to_csv(const CellComplex& c, const EdgeFlow& f,
                                 const HodgeDecomposition& d);
Json report_to_json(const DiagnosticReport& r);
std::string report_to_text(const DiagnosticReport& r);
Json trend_to_json(const TrendSummary& t);

/// Stable textual rendering used by every emitter.
std::string dump(const Json& doc);

}  // namespace hodgefaas::io
