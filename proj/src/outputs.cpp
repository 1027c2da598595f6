#include "wsn/outputs.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "wsn/errors.hpp"

namespace wsn {

using ordered_json = nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::string out = "t,node_id,x,x_hat,e,b,action,missing\n";
  for (const auto& r : trace) {
    out += std::to_string(r.t);
    out += ',';
    out += std::to_string(r.node.value);
    out += ',';
    out += opt(r.x);
    out += ',';
    out += opt(r.x_hat);
    out += ',';
    out += opt(r.e);
    out += ',';
    out += format_number(r.b);
    out += ',';
    out += to_string(r.action);
    out += ',';
    out += r.missing ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string events_jsonl(const std::vector<Event>& events) {
  std::string out;
  for (const auto& e : events) {
    ordered_json j;
    j["t"] = e.t;
    j["node"] = e.node.value;
    j["station"] = e.station.value;
    j["kind"] = to_string(e.kind);
    if (!e.outcome.empty()) j["outcome"] = e.outcome;
    j["provenance"] = e.provenance;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string summary_json(const RunSummary& s) {
  ordered_json j;
  ordered_json caps = ordered_json::array();
  for (const auto& c : s.captures) {
    ordered_json o;
    o["node"] = c.node.value;
    o["attack_start"] = c.attack_start;
    o["quarantined_at"] = c.quarantined_at ? ordered_json(*c.quarantined_at) : ordered_json(nullptr);
    o["detection_latency"] = c.latency ? ordered_json(*c.latency) : ordered_json(nullptr);
    caps.push_back(std::move(o));
  }
  j["captures"] = caps;
  j["true_positives"] = s.true_positives;
  j["false_negatives"] = s.false_negatives;
  j["false_positives"] = s.false_positives;
  ordered_json honest = ordered_json::array();
  for (NodeId n : s.honest_quarantined) honest.push_back(n.value);
  j["honest_quarantined"] = honest;
  j["crypto"] = {{"accepted", s.crypto_rejections.accepted},
                 {"bad_tag", s.crypto_rejections.bad_tag},
                 {"replay", s.crypto_rejections.replay},
                 {"unknown_sender", s.crypto_rejections.unknown_sender}};
  ordered_json auth = ordered_json::object();
  for (const auto& [k, v] : s.auth_failures) auth[k] = v;
  j["auth_failures"] = auth;
  j["sybil_rejections"] = s.sybil_rejections;
  j["quarantines"] = s.quarantines;
  j["alarms"] = s.alarms;
  j["availability_alarms"] = s.availability_alarms;
  j["revocations"] = s.revocations;
  // Same 9-significant-digit rendering as the trace, kept as JSON numbers.
  ordered_json trust = ordered_json::array();
  for (double b : s.final_trust) trust.push_back(std::stod(format_number(b)));
  j["final_trust"] = trust;
  return j.dump(2) + "\n";
}

std::string topology_csv(const Deployment& d, const AdjacencyMap& adjacency) {
  std::string out = "node_id,x,y,peripheral,neighbor_list\n";
  for (const auto& n : d.nodes()) {
    out += std::to_string(n.id.value) + ',' + format_number(n.position.x) + ',' + format_number(n.position.y) + ',' +
           (is_peripheral(d, n.id) ? "1" : "0") + ',';
    const auto& adj = adjacency.at(n.id.value);
    for (std::size_t i = 0; i < adj.size(); ++i) {
      if (i) out += ';';
      out += std::to_string(adj[i].value);
    }
    out += '\n';
  }
  return out;
}

void write_outputs(const std::filesystem::path& dir, const RunResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "trace.csv", trace_csv(result.trace));
  write_file(dir / "events.jsonl", events_jsonl(result.events));
  write_file(dir / "summary.json", summary_json(result.summary));
  write_file(dir / "config.echo", serialize_config(result.config));
}

}  // namespace wsn
