#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wsn/scenario.hpp"
#include "wsn/trust_kbs.hpp"
#include "wsn/wire.hpp"

namespace wsn {

// One row per monitored node per step.
struct TraceRow {
  TimeStep t = 0;
  NodeId node;
  std::optional<double> x;
  std::optional<double> x_hat;
  std::optional<double> e;
  double b = 0.0;
  Action action = Action::none;
  bool missing = false;
};

enum class EventKind { auth, rejection, quarantine, alarm, readmission, availability_alarm, revocation };

const char* to_string(EventKind k);

struct Event {
  TimeStep t = 0;
  NodeId node;
  StationId station;
  EventKind kind = EventKind::auth;
  // auth: accepted / bad_tag / no_shared_key / revoked
  // rejection: bad_tag / replay / unknown_sender
  std::string outcome;
  // "honest" or the attack kind responsible for the traffic or the node.
  std::string provenance;
};

// Channel accounting for one step:
// sent == accepted + rejected_bad_tag + rejected_replay + rejected_unknown + dropped.
struct MessageCounts {
  TimeStep t = 0;
  std::uint64_t sent = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected_bad_tag = 0;
  std::uint64_t rejected_replay = 0;
  std::uint64_t rejected_unknown = 0;
  std::uint64_t dropped = 0;
};

struct CaptureOutcome {
  NodeId node;
  TimeStep attack_start = 0;
  std::optional<TimeStep> quarantined_at;
  std::optional<TimeStep> latency;  // quarantined_at - attack_start
};

struct RunSummary {
  std::vector<CaptureOutcome> captures;
  std::uint32_t true_positives = 0;
  std::uint32_t false_negatives = 0;
  std::uint32_t false_positives = 0;  // quarantine events of honest nodes
  std::vector<NodeId> honest_quarantined;
  OpenMetrics crypto_rejections;  // station-side open() counters
  std::map<std::string, std::uint64_t> auth_failures;
  std::uint64_t sybil_rejections = 0;
  std::uint64_t quarantines = 0;
  std::uint64_t alarms = 0;
  std::uint64_t availability_alarms = 0;
  std::uint64_t revocations = 0;
  std::vector<double> final_trust;
};

struct RunResult {
  ScenarioConfig config;
  RunSummary summary;
  std::vector<TraceRow> trace;
  std::vector<Event> events;
  std::vector<MessageCounts> messages;
};

// The deployment a run of `cfg` uses.
Deployment deployment_of(const ScenarioConfig& cfg);

// deploy -> predistribute -> authenticate at t = 0 -> for t = 1..T: poll,
// sense or attack, seal, channel, open, trust step. Identical configs give
// identical results. Throws ConfigError for an invalid config.
RunResult run(const ScenarioConfig& cfg);

}  // namespace wsn
