#pragma once

#include <filesystem>
#include <string>

#include "wsn/simulator.hpp"
#include "wsn/topology.hpp"

namespace wsn {

// Floating-point fields use printf "%.9g"; absent values are empty cells.
std::string format_number(double v);

// Header: t,node_id,x,x_hat,e,b,action,missing
std::string trace_csv(const std::vector<TraceRow>& trace);
// One JSON object per line: t, node, station, kind, outcome, provenance.
std::string events_jsonl(const std::vector<Event>& events);
std::string summary_json(const RunSummary& summary);
// Header: node_id,x,y,peripheral,neighbor_list (neighbors joined by ';').
std::string topology_csv(const Deployment& d, const AdjacencyMap& adjacency);

// Writes trace.csv, events.jsonl, summary.json and config.echo into `dir`,
// creating it if needed. Throws IoError naming the failing path.
void write_outputs(const std::filesystem::path& dir, const RunResult& result);

}  // namespace wsn
