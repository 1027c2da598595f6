#include "wsn/keying.hpp"

#include <algorithm>

#include "wsn/crypto.hpp"
#include "wsn/errors.hpp"

namespace wsn {

namespace {

Key random_key(Rng& rng) {
  Key k{};
  rng.fill(k);
  return k;
}

using Edge = std::pair<std::uint32_t, std::uint32_t>;

// Sequential stub matching with restarts: pick random stub pairs, keep the
// ones that form a new simple edge, restart if the remainder is unmatchable.
std::set<Edge> sample_regular_graph(std::uint32_t n, std::uint32_t degree, Rng& rng) {
  constexpr int kMaxRestarts = 1000;
  constexpr int kRandomTries = 64;
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    std::vector<std::uint32_t> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * degree);
    for (std::uint32_t v = 0; v < n; ++v) {
      for (std::uint32_t k = 0; k < degree; ++k) stubs.push_back(v);
    }
    if (stubs.size() % 2 == 1) stubs.pop_back();

    std::set<Edge> edges;
    auto valid = [&](std::size_t i, std::size_t j) {
      const auto u = stubs[i], v = stubs[j];
      return u != v && !edges.contains(std::minmax(u, v));
    };
    auto take = [&](std::size_t i, std::size_t j) {
      edges.insert(std::minmax(stubs[i], stubs[j]));
      if (i < j) std::swap(i, j);
      stubs[i] = stubs.back();
      stubs.pop_back();
      stubs[j] = stubs.back();
      stubs.pop_back();
    };

    bool stuck = false;
    while (stubs.size() >= 2 && !stuck) {
      bool matched = false;
      for (int k = 0; k < kRandomTries && !matched; ++k) {
        const auto i = static_cast<std::size_t>(rng.below(stubs.size()));
        const auto j = static_cast<std::size_t>(rng.below(stubs.size()));
        if (i != j && valid(i, j)) {
          take(i, j);
          matched = true;
        }
      }
      if (matched) continue;
      std::vector<std::pair<std::size_t, std::size_t>> options;
      for (std::size_t i = 0; i < stubs.size(); ++i) {
        for (std::size_t j = i + 1; j < stubs.size(); ++j) {
          if (valid(i, j)) options.emplace_back(i, j);
        }
      }
      if (options.empty()) {
        stuck = true;
      } else {
        const auto [i, j] = options[rng.below(options.size())];
        take(i, j);
      }
    }
    if (!stuck) return edges;
  }
  throw ParameterError("could not sample a key-sharing graph with the requested ring size");
}

}  // namespace

KeyMaterial predistribute(std::uint32_t node_count, std::uint32_t ring_size, std::uint64_t master_seed,
                          const std::vector<StationId>& stations) {
  if (ring_size < 1 || ring_size >= node_count) {
    throw ParameterError("ring size must satisfy 1 <= m_k < N (m_k=" + std::to_string(ring_size) +
                         ", N=" + std::to_string(node_count) + ")");
  }
  KeyMaterial km;
  km.rings.resize(node_count);
  for (std::uint32_t i = 0; i < node_count; ++i) km.rings[i].owner = NodeId{i};

  Rng graph_rng = Rng::stream(master_seed, "keys.graph");
  Rng key_rng = Rng::stream(master_seed, "keys.pairwise");
  for (const auto& [u, v] : sample_regular_graph(node_count, ring_size, graph_rng)) {
    const Key k = random_key(key_rng);
    km.rings[u].pairwise[PeerId::of(NodeId{v})] = k;
    km.rings[v].pairwise[PeerId::of(NodeId{u})] = k;
  }

  Rng station_rng = Rng::stream(master_seed, "keys.station");
  for (StationId s : stations) {
    StationKeys sk;
    sk.id = s;
    for (std::uint32_t i = 0; i < node_count; ++i) {
      const Key k = random_key(station_rng);
      sk.pairwise[NodeId{i}] = k;
      km.rings[i].pairwise[PeerId::of(s)] = k;
    }
    km.stations.push_back(std::move(sk));
  }
  return km;
}

std::optional<Key> shared_key(const KeyRing& ring, PeerId peer) {
  auto it = ring.pairwise.find(peer);
  if (it == ring.pairwise.end()) return std::nullopt;
  return it->second;
}

const char* to_string(AuthOutcome o) {
  switch (o) {
    case AuthOutcome::accepted: return "accepted";
    case AuthOutcome::bad_tag: return "bad_tag";
    case AuthOutcome::no_shared_key: return "no_shared_key";
    case AuthOutcome::revoked: return "revoked";
  }
  return "?";
}

Block auth_response_tag(const Key& pairwise, const Block& nonce, NodeId claimed) {
  crypto::Bytes m(nonce.begin(), nonce.end());
  for (int i = 3; i >= 0; --i) m.push_back(static_cast<std::uint8_t>(claimed.value >> (8 * i)));
  return crypto::cmac(pairwise, m);
}

Key derive_session_key(const Key& pairwise, const Block& nonce) {
  crypto::Bytes m(nonce.begin(), nonce.end());
  m.push_back(0x01);
  return crypto::cmac(pairwise, m);
}

AuthTranscript run_challenge(StationKeys& station, const RevocationState& revocation, NodeId claimed,
                             const std::optional<Key>& prover_key, TimeStep t, Rng& rng) {
  AuthTranscript tr;
  tr.claimed_id = claimed;
  tr.station = station.id;
  tr.t = t;
  rng.fill(tr.station_nonce);

  if (revocation.is_revoked(claimed)) {
    tr.outcome = AuthOutcome::revoked;
    return tr;
  }
  auto it = station.pairwise.find(claimed);
  if (!prover_key || it == station.pairwise.end()) {
    tr.outcome = AuthOutcome::no_shared_key;
    return tr;
  }
  tr.response_tag = auth_response_tag(*prover_key, tr.station_nonce, claimed);
  const Block expected = auth_response_tag(it->second, tr.station_nonce, claimed);
  if (!crypto::equal_constant_shape(expected, tr.response_tag)) {
    tr.outcome = AuthOutcome::bad_tag;
    return tr;
  }
  if (station.authenticated.contains(claimed)) {
    throw AlreadyAuthenticated("node " + std::to_string(claimed.value) + " already authenticated");
  }
  const Key session = derive_session_key(it->second, tr.station_nonce);
  station.sessions[claimed] = session;
  station.authenticated.insert(claimed);
  tr.outcome = AuthOutcome::accepted;
  tr.session_key = session;
  return tr;
}

AuthTranscript authenticate(KeyRing& ring, StationKeys& station, const RevocationState& revocation, TimeStep t,
                            Rng& rng) {
  if (ring.authenticated) {
    throw AlreadyAuthenticated("node " + std::to_string(ring.owner.value) + " already authenticated");
  }
  AuthTranscript tr =
      run_challenge(station, revocation, ring.owner, shared_key(ring, PeerId::of(station.id)), t, rng);
  if (tr.outcome == AuthOutcome::accepted) {
    // The node derives the same key from its own copy of the pairwise key.
    const Key mine = derive_session_key(*shared_key(ring, PeerId::of(station.id)), tr.station_nonce);
    ring.session = Session{mine, station.id, t};
    ring.authenticated = true;
  }
  return tr;
}

RevocationState::RevocationState(std::uint32_t quorum) : quorum_(quorum) {
  if (quorum_ < 1) throw ParameterError("revocation quorum must be at least 1");
}

std::optional<RevocationEvent> RevocationState::cast_vote(PeerId voter, NodeId accused) {
  if (voter == PeerId::of(accused)) throw SelfVote("node " + std::to_string(accused.value) + " voted against itself");
  if (voter.kind == PeerId::Kind::node && revoked_.contains(NodeId{voter.id})) {
    throw VoterRevoked("voter " + std::to_string(voter.id) + " is revoked");
  }
  if (revoked_.contains(accused)) return std::nullopt;

  auto& voters = votes_[accused];
  voters.insert(voter);
  if (voters.size() < quorum_) return std::nullopt;

  RevocationEvent ev{accused, voters};
  revoked_.insert(accused);
  votes_.erase(accused);
  const PeerId gone = PeerId::of(accused);
  for (auto& [_, set] : votes_) set.erase(gone);
  return ev;
}

std::size_t RevocationState::vote_count(NodeId accused) const {
  auto it = votes_.find(accused);
  return it == votes_.end() ? 0 : it->second.size();
}

void destroy_session(KeyMaterial& keys, NodeId id) {
  if (id.value < keys.rings.size()) keys.rings[id.value].session.reset();
  for (auto& s : keys.stations) s.sessions.erase(id);
}

}  // namespace wsn
