#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wsn/attacks.hpp"
#include "wsn/field_model.hpp"
#include "wsn/topology.hpp"
#include "wsn/trust_kbs.hpp"

namespace wsn {

struct KeyingParams {
  std::uint32_t ring_size = 8;  // m_k
  std::uint32_t quorum = 3;     // q
  // When set, every alarm makes the serving base station cast a revocation vote.
  bool alarm_votes = false;

  bool operator==(const KeyingParams&) const = default;
};

// A run is a pure function of this record.
struct ScenarioConfig {
  std::uint64_t seed = 1;
  TimeStep horizon = 200;
  FieldSpec field;
  NoiseSpec noise;
  DeploymentSpec deployment;
  KeyingParams keying;
  EstimatorConfig estimator;
  TrustPolicy trust;
  AvailabilityPolicy availability;
  std::vector<AttackScript> attacks;

  bool operator==(const ScenarioConfig&) const = default;
};

// Every default applied to an otherwise empty config: 25-node 5x5 grid on a
// 100 m square, one base station at the center, moving plume, sigma = 1.
ScenarioConfig default_config();

// default_config() plus one offset-10-sigma capture of the center node from
// step 20 to the horizon.
ScenarioConfig demo_config();

// Parses a JSON scenario document. Missing keys take their defaults; derived
// defaults follow the values they depend on (peripheral_margin and
// distance_scale = adjacency_radius, tolerance = 3 sigma, penalty_gain =
// 0.05 / tolerance, ring_size = min(8, N - 1), one covering station).
// Unknown keys, type mismatches and invariant violations throw ConfigError
// with the dotted field path; syntax errors report line and column.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

// Fully-defaulted JSON; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

// Cross-field checks. Throws ConfigError.
void validate(const ScenarioConfig& cfg);

}  // namespace wsn
