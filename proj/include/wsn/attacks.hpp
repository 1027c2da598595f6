#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wsn/keying.hpp"
#include "wsn/rng.hpp"
#include "wsn/types.hpp"
#include "wsn/wire.hpp"

namespace wsn {

enum class AttackKind { node_capture, replay, spoof_no_key, sybil, selective_forwarding };

// Provenance label used in the event stream.
const char* to_string(AttackKind k);
std::optional<AttackKind> parse_attack_kind(std::string_view s);

enum class CaptureProfile { constant, offset, random, stale };

const char* to_string(CaptureProfile p);
std::optional<CaptureProfile> parse_capture_profile(std::string_view s);

// Sybil identities either come from outside the key space, or are real ids
// claimed by a captured node using its own station key.
enum class SybilMode { external, captured };

const char* to_string(SybilMode m);
std::optional<SybilMode> parse_sybil_mode(std::string_view s);

struct AttackScript {
  AttackKind kind = AttackKind::node_capture;
  std::vector<NodeId> targets;
  TimeStep start = 0;
  TimeStep end = 0;

  // node_capture
  CaptureProfile profile = CaptureProfile::offset;
  double constant_value = 0.0;
  double offset = 0.0;
  double random_lo = 0.0;
  double random_hi = 1.0;
  std::uint32_t stale_lag = 1;

  // selective_forwarding
  double drop_probability = 0.0;

  // sybil
  std::uint32_t fake_ids = 0;
  SybilMode sybil_mode = SybilMode::external;

  // spoof_no_key: forged reading value
  double spoof_value = 0.0;

  // replay: re-deliver the target's message from `replay_lag` steps earlier
  std::uint32_t replay_lag = 1;

  bool operator==(const AttackScript&) const = default;

  bool active(TimeStep t) const { return t >= start && t <= end; }
  bool targets_node(NodeId id) const;
};

// Throws ParameterError. Sybil and spoof targets may lie outside the
// deployment; every other kind must name deployed nodes.
void validate(const AttackScript& script, std::uint32_t node_count);

// Value a captured node seals in place of the honest reading. `honest_at`
// yields the node's own honest reading for an earlier step (stale profile);
// `rng` drives the random profile.
double apply_node_capture(const AttackScript& script, double honest, TimeStep t, Rng& rng,
                          const std::function<double(TimeStep)>& honest_at);

// Passive recorder of channel traffic. It only ever sees sealed messages.
class ChannelTap {
 public:
  void record(TimeStep t, const SealedMessage& msg);
  // Latest message `sender` sent at step `t`, if recorded.
  std::optional<SealedMessage> recorded(NodeId sender, TimeStep t) const;
  std::size_t size() const { return log_.size(); }

 private:
  struct Entry {
    TimeStep t;
    SealedMessage msg;
  };
  std::vector<Entry> log_;
};

// Verbatim re-delivery of the target's message from t - replay_lag.
std::optional<SealedMessage> apply_replay(const ChannelTap& tap, const AttackScript& script, NodeId target,
                                          TimeStep t);

// A reading sealed under a freshly drawn key the attacker made up.
SealedMessage apply_spoof_no_key(NodeId fake_sender, double forged_value, TimeStep t, Rng& rng);

// Identity claims made at the start step. External mode claims ids
// N, N+1, ... with no key; captured mode claims the deployed ids following
// the captured target and answers with the target's own station key.
std::vector<AuthTranscript> apply_sybil(const AttackScript& script, TimeStep t, std::uint32_t node_count,
                                        const KeyMaterial& keys, StationKeys& station,
                                        const RevocationState& revocation, Rng& rng);

// True when the reading is dropped.
bool apply_selective_forwarding(const AttackScript& script, Rng& rng, TimeStep t);

}  // namespace wsn
