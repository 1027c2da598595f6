#include "wsn/attacks.hpp"

#include <algorithm>

#include "wsn/errors.hpp"

namespace wsn {

const char* to_string(AttackKind k) {
  switch (k) {
    case AttackKind::node_capture: return "node_capture";
    case AttackKind::replay: return "replay";
    case AttackKind::spoof_no_key: return "spoof_no_key";
    case AttackKind::sybil: return "sybil";
    case AttackKind::selective_forwarding: return "selective_forwarding";
  }
  return "?";
}

std::optional<AttackKind> parse_attack_kind(std::string_view s) {
  for (auto k : {AttackKind::node_capture, AttackKind::replay, AttackKind::spoof_no_key, AttackKind::sybil,
                 AttackKind::selective_forwarding}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

const char* to_string(CaptureProfile p) {
  switch (p) {
    case CaptureProfile::constant: return "constant";
    case CaptureProfile::offset: return "offset";
    case CaptureProfile::random: return "random";
    case CaptureProfile::stale: return "stale";
  }
  return "?";
}

std::optional<CaptureProfile> parse_capture_profile(std::string_view s) {
  for (auto p : {CaptureProfile::constant, CaptureProfile::offset, CaptureProfile::random, CaptureProfile::stale}) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

const char* to_string(SybilMode m) { return m == SybilMode::external ? "external" : "captured"; }

std::optional<SybilMode> parse_sybil_mode(std::string_view s) {
  if (s == "external") return SybilMode::external;
  if (s == "captured") return SybilMode::captured;
  return std::nullopt;
}

bool AttackScript::targets_node(NodeId id) const {
  return std::find(targets.begin(), targets.end(), id) != targets.end();
}

void validate(const AttackScript& s, std::uint32_t node_count) {
  if (s.start > s.end) throw ParameterError("attack start must not exceed end");
  if (s.start < 0) throw ParameterError("attack start must be >= 0");
  const bool external_ids = s.kind == AttackKind::spoof_no_key ||
                            (s.kind == AttackKind::sybil && s.sybil_mode == SybilMode::external);
  if (!external_ids) {
    for (NodeId t : s.targets) {
      if (t.value >= node_count) throw ParameterError("attack target " + std::to_string(t.value) + " is not deployed");
    }
  }
  if (s.drop_probability < 0.0 || s.drop_probability > 1.0) {
    throw ParameterError("drop_probability must be in [0, 1]");
  }
  if (s.kind == AttackKind::node_capture) {
    if (s.profile == CaptureProfile::random && !(s.random_lo <= s.random_hi)) {
      throw ParameterError("random capture profile needs lo <= hi");
    }
    if (s.profile == CaptureProfile::stale && s.stale_lag < 1) throw ParameterError("stale_lag must be >= 1");
  }
  if (s.kind == AttackKind::replay && s.replay_lag < 1) throw ParameterError("replay_lag must be >= 1");
  if (s.kind == AttackKind::sybil && s.sybil_mode == SybilMode::captured && s.targets.size() != 1) {
    throw ParameterError("captured-mode sybil needs exactly one captured target");
  }
}

double apply_node_capture(const AttackScript& script, double honest, TimeStep t, Rng& rng,
                          const std::function<double(TimeStep)>& honest_at) {
  switch (script.profile) {
    case CaptureProfile::constant: return script.constant_value;
    case CaptureProfile::offset: return honest + script.offset;
    case CaptureProfile::random: return rng.uniform(script.random_lo, script.random_hi);
    case CaptureProfile::stale: return honest_at(std::max<TimeStep>(0, t - script.stale_lag));
  }
  return honest;
}

void ChannelTap::record(TimeStep t, const SealedMessage& msg) { log_.push_back({t, msg}); }

std::optional<SealedMessage> ChannelTap::recorded(NodeId sender, TimeStep t) const {
  for (auto it = log_.rbegin(); it != log_.rend(); ++it) {
    if (it->t == t && it->msg.sender == sender) return it->msg;
  }
  return std::nullopt;
}

std::optional<SealedMessage> apply_replay(const ChannelTap& tap, const AttackScript& script, NodeId target,
                                          TimeStep t) {
  return tap.recorded(target, t - static_cast<TimeStep>(script.replay_lag));
}

SealedMessage apply_spoof_no_key(NodeId fake_sender, double forged_value, TimeStep t, Rng& rng) {
  Key made_up{};
  rng.fill(made_up);
  // Any counter will do; the tag cannot verify.
  return seal(made_up, fake_sender, static_cast<std::uint64_t>(t) + 1, encode_reading({t, forged_value}));
}

std::vector<AuthTranscript> apply_sybil(const AttackScript& script, TimeStep t, std::uint32_t node_count,
                                        const KeyMaterial& keys, StationKeys& station,
                                        const RevocationState& revocation, Rng& rng) {
  std::vector<AuthTranscript> out;
  if (script.sybil_mode == SybilMode::external) {
    for (std::uint32_t k = 0; k < script.fake_ids; ++k) {
      out.push_back(run_challenge(station, revocation, NodeId{node_count + k}, std::nullopt, t, rng));
    }
    return out;
  }
  const NodeId captured = script.targets.front();
  const auto own_key = shared_key(keys.rings.at(captured.value), PeerId::of(station.id));
  for (std::uint32_t k = 1; k <= script.fake_ids; ++k) {
    const NodeId claimed{(captured.value + k) % node_count};
    if (claimed == captured) break;
    out.push_back(run_challenge(station, revocation, claimed, own_key, t, rng));
  }
  return out;
}

bool apply_selective_forwarding(const AttackScript& script, Rng& rng, TimeStep t) {
  if (!script.active(t)) return false;
  return rng.bernoulli(script.drop_probability);
}

}  // namespace wsn
