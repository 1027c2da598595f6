#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "wsn/rng.hpp"
#include "wsn/types.hpp"
#include "wsn/wire.hpp"

namespace wsn {

// Either a sensor node or a base station.
struct PeerId {
  enum class Kind : std::uint8_t { node, station };
  Kind kind = Kind::node;
  std::uint32_t id = 0;

  static PeerId of(NodeId n) { return {Kind::node, n.value}; }
  static PeerId of(StationId s) { return {Kind::station, s.value}; }
  auto operator<=>(const PeerId&) const = default;
};

struct Session {
  Key key{};
  StationId station;
  TimeStep auth_time = 0;
  bool operator==(const Session&) const = default;
};

struct KeyRing {
  NodeId owner;
  std::map<PeerId, Key> pairwise;
  std::optional<Session> session;
  // Set on the first accepted authentication and never cleared.
  bool authenticated = false;
};

// Base-station side of the key material.
struct StationKeys {
  StationId id;
  std::map<NodeId, Key> pairwise;
  SessionTable sessions;
  std::set<NodeId> authenticated;
};

struct KeyMaterial {
  std::vector<KeyRing> rings;  // indexed by NodeId
  std::vector<StationKeys> stations;
};

// Random-pairwise predistribution. Node-node partners form a random
// m_k-regular graph (one node keeps m_k - 1 partners when N * m_k is odd);
// every node also shares a distinct key with every station.
// Throws ParameterError unless 1 <= m_k < N.
KeyMaterial predistribute(std::uint32_t node_count, std::uint32_t ring_size, std::uint64_t master_seed,
                          const std::vector<StationId>& stations);

std::optional<Key> shared_key(const KeyRing& ring, PeerId peer);

class RevocationState;

enum class AuthOutcome { accepted, bad_tag, no_shared_key, revoked };

const char* to_string(AuthOutcome o);

struct AuthTranscript {
  NodeId claimed_id;
  StationId station;
  TimeStep t = 0;
  Block station_nonce{};
  Block response_tag{};
  AuthOutcome outcome = AuthOutcome::bad_tag;
  std::optional<Key> session_key;  // set only when accepted
};

// tag = CMAC(pairwise, nonce | claimed id as 4 bytes big-endian)
Block auth_response_tag(const Key& pairwise, const Block& nonce, NodeId claimed);
// session = CMAC(pairwise, nonce | 0x01)
Key derive_session_key(const Key& pairwise, const Block& nonce);

// One challenge-response round as seen by the station: a prover claims
// `claimed` and answers with `prover_key` (absent when it holds no key for
// this station). On acceptance the station records the session.
// Throws AlreadyAuthenticated for a valid response from an id that already
// holds a session.
AuthTranscript run_challenge(StationKeys& station, const RevocationState& revocation, NodeId claimed,
                             const std::optional<Key>& prover_key, TimeStep t, Rng& rng);

// Honest one-time authentication of `ring` with `station`; both sides store
// the session key on success. Throws AlreadyAuthenticated on a repeat.
AuthTranscript authenticate(KeyRing& ring, StationKeys& station, const RevocationState& revocation, TimeStep t,
                            Rng& rng);

struct RevocationEvent {
  NodeId accused;
  std::set<PeerId> voters;
};

class RevocationState {
 public:
  explicit RevocationState(std::uint32_t quorum = 3);

  // Idempotent per (voter, accused). Returns the event when this vote brings
  // the accused to quorum; the accused's own pending votes are dropped then.
  // Throws SelfVote and VoterRevoked.
  std::optional<RevocationEvent> cast_vote(PeerId voter, NodeId accused);

  bool is_revoked(NodeId id) const { return revoked_.contains(id); }
  const std::set<NodeId>& revoked() const { return revoked_; }
  std::size_t vote_count(NodeId accused) const;
  std::uint32_t quorum() const { return quorum_; }

 private:
  std::uint32_t quorum_;
  std::map<NodeId, std::set<PeerId>> votes_;
  std::set<NodeId> revoked_;
};

// Destroys the node's session on both sides.
void destroy_session(KeyMaterial& keys, NodeId id);

}  // namespace wsn
