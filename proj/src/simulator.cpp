#include "wsn/simulator.hpp"

#include <algorithm>
#include <set>

#include "wsn/attacks.hpp"
#include "wsn/field_model.hpp"
#include "wsn/keying.hpp"
#include "wsn/topology.hpp"

namespace wsn {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::auth: return "auth";
    case EventKind::rejection: return "rejection";
    case EventKind::quarantine: return "quarantine";
    case EventKind::alarm: return "alarm";
    case EventKind::readmission: return "readmission";
    case EventKind::availability_alarm: return "availability_alarm";
    case EventKind::revocation: return "revocation";
  }
  return "?";
}

Deployment deployment_of(const ScenarioConfig& cfg) {
  Rng rng = Rng::stream(cfg.seed, "placement");
  return deploy(cfg.deployment, rng);
}

namespace {

constexpr const char* kHonest = "honest";

struct Cell {
  StationId id;
  std::size_t keys_index;
  std::vector<NodeId> members;
  TrustEngine engine;
  FreshnessWindow window;
  OpenMetrics metrics;
};

struct Inbound {
  SealedMessage msg;
  std::string provenance;
};

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg)
      : cfg_(cfg),
        deployment_(deployment_of(cfg)),
        adjacency_(neighbors(deployment_)),
        serving_(assign_cells(deployment_)),
        keys_(predistribute(cfg.deployment.node_count, cfg.keying.ring_size, cfg.seed, station_ids())),
        revocation_(cfg.keying.quorum),
        counters_(deployment_.size(), 0) {
    for (std::size_t s = 0; s < deployment_.base_stations().size(); ++s) {
      const StationId sid = deployment_.base_stations()[s].id;
      std::vector<NodeId> members;
      for (const auto& n : deployment_.nodes()) {
        if (serving_[n.id.value] == sid) members.push_back(n.id);
      }
      cells_.push_back(Cell{sid, s, members,
                            TrustEngine(deployment_, adjacency_, members, cfg.estimator, cfg.trust, cfg.availability),
                            {}, {}});
    }
  }

  RunResult run() {
    RunResult res;
    res.config = cfg_;
    authenticate_all(res);
    for (TimeStep t = 1; t <= cfg_.horizon; ++t) step(t, res);
    summarize(res);
    return res;
  }

 private:

  std::vector<StationId> station_ids() const {
    std::vector<StationId> ids;
    for (const auto& b : deployment_.base_stations()) ids.push_back(b.id);
    return ids;
  }

  Cell& cell_of(NodeId n) {
    const StationId sid = serving_.at(n.value);
    for (auto& c : cells_) {
      if (c.id == sid) return c;
    }
    return cells_.front();
  }

  StationKeys& station_keys(const Cell& c) { return keys_.stations[c.keys_index]; }

  std::string node_provenance(NodeId n) const {
    for (const auto& a : cfg_.attacks) {
      if (a.kind == AttackKind::node_capture && a.targets_node(n)) return to_string(a.kind);
    }
    for (const auto& a : cfg_.attacks) {
      if (a.kind == AttackKind::selective_forwarding && a.targets_node(n)) return to_string(a.kind);
    }
    return kHonest;
  }

  double honest_reading(NodeId n, TimeStep t) const {
    Rng rng = noise_stream(cfg_.seed, n, t);
    return observe(cfg_.field, cfg_.noise, deployment_.position(n), t, rng);
  }

  void authenticate_all(RunResult& res) {
    for (const auto& n : deployment_.nodes()) {
      Cell& c = cell_of(n.id);
      Rng rng = Rng::stream(cfg_.seed, "auth", {n.id.value});
      const AuthTranscript tr = authenticate(keys_.rings[n.id.value], station_keys(c), revocation_, 0, rng);
      res.events.push_back({0, n.id, c.id, EventKind::auth, to_string(tr.outcome), kHonest});
    }
  }

  void run_sybil(TimeStep t, RunResult& res) {
    for (std::size_t i = 0; i < cfg_.attacks.size(); ++i) {
      const auto& a = cfg_.attacks[i];
      if (a.kind != AttackKind::sybil || std::max<TimeStep>(a.start, 1) != t) continue;
      Cell& c = a.sybil_mode == SybilMode::captured ? cell_of(a.targets.front()) : cells_.front();
      Rng rng = Rng::stream(cfg_.seed, "attack.sybil", {i, static_cast<std::uint64_t>(t)});
      for (const auto& tr : apply_sybil(a, t, cfg_.deployment.node_count, keys_, station_keys(c), revocation_, rng)) {
        res.events.push_back({t, tr.claimed_id, c.id, EventKind::auth, to_string(tr.outcome), to_string(a.kind)});
      }
    }
  }

  void step(TimeStep t, RunResult& res) {
    MessageCounts mc;
    mc.t = t;
    run_sybil(t, res);

    std::vector<Verdict> verdicts;
    for (auto& cell : cells_) {
      StationKeys& sk = station_keys(cell);
      std::vector<Inbound> channel;

      for (NodeId n : cell.members) {
        if (revocation_.is_revoked(n)) continue;
        KeyRing& ring = keys_.rings[n.value];
        auto station_session = sk.sessions.find(n);
        if (!ring.session || station_session == sk.sessions.end()) continue;
        const Poll poll = make_poll(station_session->second, cell.id, n, t);
        if (!verify_poll(ring.session->key, poll)) continue;

        const double honest = honest_reading(n, t);
        double value = honest;
        std::string provenance = kHonest;
        for (std::size_t i = 0; i < cfg_.attacks.size(); ++i) {
          const auto& a = cfg_.attacks[i];
          if (a.kind != AttackKind::node_capture || !a.active(t) || !a.targets_node(n)) continue;
          Rng rng = Rng::stream(cfg_.seed, "attack.capture", {i, n.value, static_cast<std::uint64_t>(t)});
          value = apply_node_capture(a, honest, t, rng, [&](TimeStep s) { return honest_reading(n, s); });
          provenance = to_string(a.kind);
        }

        SealedMessage msg = seal(ring.session->key, n, ++counters_[n.value], encode_reading({t, value}));
        ++mc.sent;
        tap_.record(t, msg);

        bool dropped = false;
        for (std::size_t i = 0; i < cfg_.attacks.size(); ++i) {
          const auto& a = cfg_.attacks[i];
          if (a.kind != AttackKind::selective_forwarding || !a.targets_node(n)) continue;
          Rng rng = Rng::stream(cfg_.seed, "attack.drop", {i, n.value, static_cast<std::uint64_t>(t)});
          dropped = apply_selective_forwarding(a, rng, t) || dropped;
        }
        if (dropped) {
          ++mc.dropped;
          continue;
        }
        channel.push_back({std::move(msg), provenance});
      }

      inject(cell, t, channel, mc);

      std::vector<Reading> readings;
      for (const auto& in : channel) {
        const OpenResult r = open(sk.sessions, in.msg, cell.window, cell.metrics);
        switch (r.status) {
          case OpenStatus::accepted: {
            ++mc.accepted;
            const auto payload = decode_reading(r.plaintext);
            if (payload && payload->t == t) readings.push_back({in.msg.sender, t, payload->value});
            continue;
          }
          case OpenStatus::bad_tag: ++mc.rejected_bad_tag; break;
          case OpenStatus::replay: ++mc.rejected_replay; break;
          case OpenStatus::unknown_sender: ++mc.rejected_unknown; break;
        }
        res.events.push_back({t, in.msg.sender, cell.id, EventKind::rejection, to_string(r.status), in.provenance});
      }

      auto v = cell.engine.step(t, readings);
      verdicts.insert(verdicts.end(), v.begin(), v.end());
    }

    std::sort(verdicts.begin(), verdicts.end(), [](const Verdict& a, const Verdict& b) { return a.node < b.node; });
    for (const auto& v : verdicts) {
      res.trace.push_back({t, v.node, v.value, v.estimate, v.error, v.trust, v.action, v.missing});
      const StationId sid = serving_[v.node.value];
      const std::string prov = node_provenance(v.node);
      if (v.action == Action::quarantine) res.events.push_back({t, v.node, sid, EventKind::quarantine, "", prov});
      if (v.action == Action::alarm) res.events.push_back({t, v.node, sid, EventKind::alarm, "", prov});
      if (v.readmitted) res.events.push_back({t, v.node, sid, EventKind::readmission, "", prov});
      if (v.availability_alarm) res.events.push_back({t, v.node, sid, EventKind::availability_alarm, "", prov});
      if (v.action == Action::alarm && cfg_.keying.alarm_votes) {
        if (auto ev = revocation_.cast_vote(PeerId::of(sid), v.node)) {
          destroy_session(keys_, v.node);
          for (auto& c : cells_) c.engine.mark_revoked(v.node);
          res.events.push_back({t, v.node, sid, EventKind::revocation, "", prov});
        }
      }
    }
    res.messages.push_back(mc);
  }

  void inject(const Cell& cell, TimeStep t, std::vector<Inbound>& channel, MessageCounts& mc) {
    for (std::size_t i = 0; i < cfg_.attacks.size(); ++i) {
      const auto& a = cfg_.attacks[i];
      if (!a.active(t)) continue;
      if (a.kind == AttackKind::replay) {
        for (NodeId target : a.targets) {
          if (serving_.at(target.value) != cell.id) continue;
          if (auto m = apply_replay(tap_, a, target, t)) {
            channel.push_back({*m, to_string(a.kind)});
            ++mc.sent;
          }
        }
      } else if (a.kind == AttackKind::spoof_no_key) {
        for (NodeId target : a.targets) {
          const StationId dest = deployment_.contains(target) ? serving_[target.value] : cells_.front().id;
          if (dest != cell.id) continue;
          Rng rng = Rng::stream(cfg_.seed, "attack.spoof", {i, target.value, static_cast<std::uint64_t>(t)});
          channel.push_back({apply_spoof_no_key(target, a.spoof_value, t, rng), to_string(a.kind)});
          ++mc.sent;
        }
      }
    }
  }

  void summarize(RunResult& res) {
    RunSummary& s = res.summary;

    std::map<NodeId, TimeStep> capture_start;
    std::set<NodeId> attacked;
    for (const auto& a : cfg_.attacks) {
      if (a.kind == AttackKind::node_capture) {
        for (NodeId n : a.targets) {
          auto [it, inserted] = capture_start.try_emplace(n, a.start);
          if (!inserted) it->second = std::min(it->second, a.start);
          attacked.insert(n);
        }
      } else if (a.kind == AttackKind::selective_forwarding) {
        attacked.insert(a.targets.begin(), a.targets.end());
      }
    }

    std::set<NodeId> honest_q;
    for (const auto& e : res.events) {
      switch (e.kind) {
        case EventKind::quarantine:
          ++s.quarantines;
          if (!attacked.contains(e.node)) {
            ++s.false_positives;
            honest_q.insert(e.node);
          }
          break;
        case EventKind::alarm: ++s.alarms; break;
        case EventKind::availability_alarm: ++s.availability_alarms; break;
        case EventKind::revocation: ++s.revocations; break;
        case EventKind::auth:
          if (e.outcome != to_string(AuthOutcome::accepted)) {
            ++s.auth_failures[e.outcome];
            if (e.provenance == to_string(AttackKind::sybil)) ++s.sybil_rejections;
          }
          break;
        default: break;
      }
    }
    s.honest_quarantined.assign(honest_q.begin(), honest_q.end());

    for (const auto& [node, start] : capture_start) {
      CaptureOutcome o{node, start, std::nullopt, std::nullopt};
      for (const auto& e : res.events) {
        if (e.kind == EventKind::quarantine && e.node == node && e.t >= start) {
          o.quarantined_at = e.t;
          o.latency = e.t - start;
          break;
        }
      }
      if (o.quarantined_at) ++s.true_positives;
      else ++s.false_negatives;
      s.captures.push_back(o);
    }

    for (const auto& c : cells_) {
      s.crypto_rejections.accepted += c.metrics.accepted;
      s.crypto_rejections.bad_tag += c.metrics.bad_tag;
      s.crypto_rejections.replay += c.metrics.replay;
      s.crypto_rejections.unknown_sender += c.metrics.unknown_sender;
    }

    s.final_trust.assign(deployment_.size(), 0.0);
    for (const auto& c : cells_) {
      for (NodeId m : c.members) s.final_trust[m.value] = c.engine.ledger().at(m);
    }
  }

  const ScenarioConfig& cfg_;
  Deployment deployment_;
  AdjacencyMap adjacency_;
  std::vector<StationId> serving_;
  KeyMaterial keys_;
  RevocationState revocation_;
  std::vector<Cell> cells_;
  std::vector<std::uint64_t> counters_;
  ChannelTap tap_;
};

}  // namespace

RunResult run(const ScenarioConfig& cfg) {
  validate(cfg);
  return Simulation(cfg).run();
}

}  // namespace wsn
