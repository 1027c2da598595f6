#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "openssl_oracle.hpp"
#include "wsn/errors.hpp"
#include "wsn/keying.hpp"

using namespace wsn;

namespace {

const std::vector<StationId> kOneStation{StationId{0}};

std::size_t count_node_links(const KeyMaterial& km) {
  std::size_t links = 0;
  const auto n = km.rings.size();
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      if (shared_key(km.rings[a], PeerId::of(NodeId{b}))) ++links;
    }
  }
  return links;
}

bool connected_with_stations(const KeyMaterial& km) {
  // Union-find over nodes plus one vertex per station.
  const std::size_t n = km.rings.size();
  std::vector<std::size_t> parent(n + km.stations.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      if (shared_key(km.rings[a], PeerId::of(NodeId{b}))) parent[find(a)] = find(b);
    }
    for (std::size_t s = 0; s < km.stations.size(); ++s) {
      if (shared_key(km.rings[a], PeerId::of(km.stations[s].id))) parent[find(a)] = find(n + s);
    }
  }
  const auto root = find(0);
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (find(v) != root) return false;
  }
  return true;
}

}  // namespace

TEST(Predistribute, TwoNodesShareOneKey) {
  const auto km = predistribute(2, 1, 1, kOneStation);
  ASSERT_EQ(km.rings.size(), 2u);
  const auto ab = shared_key(km.rings[0], PeerId::of(NodeId{1}));
  const auto ba = shared_key(km.rings[1], PeerId::of(NodeId{0}));
  ASSERT_TRUE(ab && ba);
  EXPECT_EQ(*ab, *ba);
  EXPECT_EQ(count_node_links(km), 1u);
}

TEST(Predistribute, Deterministic) {
  const auto a = predistribute(20, 5, 99, kOneStation);
  const auto b = predistribute(20, 5, 99, kOneStation);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(a.rings[i].pairwise, b.rings[i].pairwise);
  }
  const auto c = predistribute(20, 5, 100, kOneStation);
  bool differs = false;
  for (std::size_t i = 0; i < 20; ++i) differs |= a.rings[i].pairwise != c.rings[i].pairwise;
  EXPECT_TRUE(differs);
}

TEST(Predistribute, RingSizeBounds) {
  EXPECT_THROW(predistribute(10, 10, 1, kOneStation), ParameterError);
  EXPECT_THROW(predistribute(10, 0, 1, kOneStation), ParameterError);
  EXPECT_NO_THROW(predistribute(10, 9, 1, kOneStation));
}

TEST(Predistribute, EachNodeHasRingSizePartners) {
  const auto km = predistribute(20, 5, 3, kOneStation);
  for (const auto& ring : km.rings) {
    std::size_t nodes = 0;
    for (const auto& [peer, _] : ring.pairwise) nodes += peer.kind == PeerId::Kind::node;
    EXPECT_EQ(nodes, 5u);
  }
}

TEST(Predistribute, PairLinkRateAtFiftyNodes) {
  // Exhaustive pair scan against the pairing expectation m_k / (N - 1).
  const double expected = 8.0 / 49.0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto km = predistribute(50, 8, seed, kOneStation);
    const double rate = static_cast<double>(count_node_links(km)) / (50.0 * 49.0 / 2.0);
    EXPECT_NEAR(rate, expected, 0.2 * expected) << "seed " << seed;
    EXPECT_TRUE(connected_with_stations(km)) << "seed " << seed;
  }
}

TEST(SharedKey, StationKeyAlwaysPresent) {
  const std::vector<StationId> two{StationId{0}, StationId{5}};
  const auto km = predistribute(12, 3, 4, two);
  for (const auto& ring : km.rings) {
    for (const auto& st : km.stations) {
      const auto k = shared_key(ring, PeerId::of(st.id));
      ASSERT_TRUE(k.has_value());
      EXPECT_EQ(*k, st.pairwise.at(ring.owner));
    }
  }
}

TEST(SharedKey, SymmetricAndAbsentForNonPartners) {
  const auto km = predistribute(30, 4, 5, kOneStation);
  std::size_t absent = 0;
  for (std::uint32_t a = 0; a < 30; ++a) {
    for (std::uint32_t b = 0; b < 30; ++b) {
      if (a == b) continue;
      const auto ab = shared_key(km.rings[a], PeerId::of(NodeId{b}));
      const auto ba = shared_key(km.rings[b], PeerId::of(NodeId{a}));
      ASSERT_EQ(ab.has_value(), ba.has_value());
      if (ab) {
        EXPECT_EQ(*ab, *ba);
      } else {
        ++absent;
      }
    }
  }
  EXPECT_GT(absent, 0u);
  EXPECT_FALSE(shared_key(km.rings[0], PeerId::of(NodeId{0})).has_value());
  EXPECT_FALSE(shared_key(km.rings[0], PeerId::of(StationId{9})).has_value());
}

TEST(Predistribute, EveryKeyHasExactlyTwoHolders) {
  const std::vector<StationId> two{StationId{0}, StationId{1}};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto km = predistribute(40, 6, seed, two);
    std::map<Key, int> holders;
    for (const auto& ring : km.rings) {
      for (const auto& [_, k] : ring.pairwise) ++holders[k];
    }
    for (const auto& st : km.stations) {
      for (const auto& [_, k] : st.pairwise) ++holders[k];
    }
    for (const auto& [k, n] : holders) ASSERT_EQ(n, 2);
  }
}

TEST(Authenticate, HonestNodeAccepted) {
  auto km = predistribute(5, 2, 1, kOneStation);
  RevocationState rev;
  Rng rng(1);
  const auto tr = authenticate(km.rings[3], km.stations[0], rev, 0, rng);
  EXPECT_EQ(tr.outcome, AuthOutcome::accepted);
  ASSERT_TRUE(km.rings[3].session.has_value());
  EXPECT_EQ(km.rings[3].session->key, km.stations[0].sessions.at(NodeId{3}));
  EXPECT_EQ(km.rings[3].session->key, *tr.session_key);
  EXPECT_TRUE(km.rings[3].authenticated);
  EXPECT_FALSE(km.rings[2].session.has_value());
}

TEST(Authenticate, SecondAttemptThrows) {
  auto km = predistribute(5, 2, 1, kOneStation);
  RevocationState rev;
  Rng rng(2);
  authenticate(km.rings[1], km.stations[0], rev, 0, rng);
  EXPECT_THROW(authenticate(km.rings[1], km.stations[0], rev, 1, rng), AlreadyAuthenticated);
  // Replaying the genuine key from outside the ring is refused the same way.
  const auto key = shared_key(km.rings[1], PeerId::of(StationId{0}));
  EXPECT_THROW(run_challenge(km.stations[0], rev, NodeId{1}, key, 2, rng), AlreadyAuthenticated);
}

TEST(Authenticate, WrongKeyIsBadTag) {
  auto km = predistribute(5, 2, 1, kOneStation);
  RevocationState rev;
  Rng rng(3);
  Key forged{};
  rng.fill(forged);
  const auto tr = run_challenge(km.stations[0], rev, NodeId{2}, forged, 0, rng);
  EXPECT_EQ(tr.outcome, AuthOutcome::bad_tag);
  EXPECT_FALSE(tr.session_key.has_value());
  EXPECT_FALSE(km.stations[0].sessions.contains(NodeId{2}));
}

TEST(Authenticate, MissingKeyAndUnknownId) {
  auto km = predistribute(5, 2, 1, kOneStation);
  RevocationState rev;
  Rng rng(4);
  EXPECT_EQ(run_challenge(km.stations[0], rev, NodeId{2}, std::nullopt, 0, rng).outcome,
            AuthOutcome::no_shared_key);
  Key k{};
  EXPECT_EQ(run_challenge(km.stations[0], rev, NodeId{77}, k, 0, rng).outcome, AuthOutcome::no_shared_key);
  auto ring = km.rings[4];
  ring.pairwise.erase(PeerId::of(StationId{0}));
  EXPECT_EQ(authenticate(ring, km.stations[0], rev, 0, rng).outcome, AuthOutcome::no_shared_key);
}

TEST(Authenticate, RevokedNodeRefused) {
  auto km = predistribute(6, 3, 1, kOneStation);
  RevocationState rev(1);
  ASSERT_TRUE(rev.cast_vote(PeerId::of(StationId{0}), NodeId{5}).has_value());
  Rng rng(5);
  EXPECT_EQ(authenticate(km.rings[5], km.stations[0], rev, 0, rng).outcome, AuthOutcome::revoked);
  EXPECT_FALSE(km.rings[5].session.has_value());
}

TEST(Authenticate, TagMatchesIndependentCmac) {
  Key k{};
  Block nonce{};
  for (int i = 0; i < 16; ++i) {
    k[i] = static_cast<std::uint8_t>(0x10 + i);
    nonce[i] = static_cast<std::uint8_t>(0xf0 - i);
  }
  std::vector<std::uint8_t> msg(nonce.begin(), nonce.end());
  for (std::uint8_t b : {0x00, 0x00, 0x01, 0x2c}) msg.push_back(b);
  EXPECT_EQ(auth_response_tag(k, nonce, NodeId{300}), oracle::openssl_cmac(k, msg));

  std::vector<std::uint8_t> kdf(nonce.begin(), nonce.end());
  kdf.push_back(0x01);
  EXPECT_EQ(derive_session_key(k, nonce), oracle::openssl_cmac(k, kdf));
}

TEST(Authenticate, ForgedTagsNeverVerify) {
  auto km = predistribute(3, 1, 8, kOneStation);
  RevocationState rev;
  Rng rng(6);
  Key forged{};
  std::size_t accepted = 0;
  for (int i = 0; i < 1000000; ++i) {
    rng.fill(forged);
    accepted += run_challenge(km.stations[0], rev, NodeId{1}, forged, 0, rng).outcome == AuthOutcome::accepted;
  }
  EXPECT_EQ(accepted, 0u);
}

TEST(Revocation, QuorumExamples) {
  RevocationState rev(3);
  EXPECT_FALSE(rev.cast_vote(PeerId::of(NodeId{1}), NodeId{9}));
  EXPECT_FALSE(rev.cast_vote(PeerId::of(NodeId{2}), NodeId{9}));
  EXPECT_FALSE(rev.is_revoked(NodeId{9}));
  const auto ev = rev.cast_vote(PeerId::of(NodeId{3}), NodeId{9});
  ASSERT_TRUE(ev.has_value());
  EXPECT_EQ(ev->accused, NodeId{9});
  EXPECT_EQ(ev->voters.size(), 3u);
  EXPECT_TRUE(rev.is_revoked(NodeId{9}));
  EXPECT_FALSE(rev.cast_vote(PeerId::of(NodeId{4}), NodeId{9}));
}

TEST(Revocation, DuplicateVotesCountOnce) {
  RevocationState rev(2);
  EXPECT_FALSE(rev.cast_vote(PeerId::of(NodeId{1}), NodeId{9}));
  EXPECT_FALSE(rev.cast_vote(PeerId::of(NodeId{1}), NodeId{9}));
  EXPECT_EQ(rev.vote_count(NodeId{9}), 1u);
  EXPECT_FALSE(rev.is_revoked(NodeId{9}));
}

TEST(Revocation, Errors) {
  RevocationState rev(1);
  EXPECT_THROW(rev.cast_vote(PeerId::of(NodeId{4}), NodeId{4}), SelfVote);
  rev.cast_vote(PeerId::of(NodeId{1}), NodeId{4});
  EXPECT_THROW(rev.cast_vote(PeerId::of(NodeId{4}), NodeId{2}), VoterRevoked);
  EXPECT_THROW(RevocationState(0), ParameterError);
}

TEST(Revocation, RevokedNodeVotesDiscarded) {
  RevocationState rev(2);
  rev.cast_vote(PeerId::of(NodeId{5}), NodeId{7});
  EXPECT_EQ(rev.vote_count(NodeId{7}), 1u);
  rev.cast_vote(PeerId::of(NodeId{1}), NodeId{5});
  rev.cast_vote(PeerId::of(NodeId{2}), NodeId{5});
  ASSERT_TRUE(rev.is_revoked(NodeId{5}));
  EXPECT_EQ(rev.vote_count(NodeId{7}), 0u);
  EXPECT_FALSE(rev.cast_vote(PeerId::of(NodeId{1}), NodeId{7}));
  EXPECT_FALSE(rev.is_revoked(NodeId{7}));
}

TEST(RevocationProperty, RandomVotesKeepInvariants) {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto quorum = static_cast<std::uint32_t>(1 + rng.below(4));
    RevocationState rev(quorum);
    std::set<NodeId> seen;
    // Oracle: recount distinct surviving voters per accused.
    std::map<NodeId, std::set<NodeId>> ballots;
    for (int v = 0; v < 40; ++v) {
      const NodeId voter{static_cast<std::uint32_t>(rng.below(8))};
      const NodeId accused{static_cast<std::uint32_t>(rng.below(8))};
      if (voter == accused || rev.is_revoked(voter)) continue;
      const auto ev = rev.cast_vote(PeerId::of(voter), accused);
      if (!rev.is_revoked(accused)) ballots[accused].insert(voter);
      if (ev) {
        ballots.erase(accused);
        for (auto& [_, set] : ballots) set.erase(accused);
      }
      ASSERT_TRUE(std::includes(rev.revoked().begin(), rev.revoked().end(), seen.begin(), seen.end()));
      seen = rev.revoked();
      for (std::uint32_t n = 0; n < 8; ++n) {
        if (rev.is_revoked(NodeId{n})) continue;
        ASSERT_EQ(rev.vote_count(NodeId{n}), ballots[NodeId{n}].size());
        ASSERT_LT(rev.vote_count(NodeId{n}), quorum);
      }
    }
  }
}

TEST(DestroySession, ClearsBothSides) {
  auto km = predistribute(4, 2, 1, kOneStation);
  RevocationState rev;
  Rng rng(8);
  authenticate(km.rings[2], km.stations[0], rev, 0, rng);
  destroy_session(km, NodeId{2});
  EXPECT_FALSE(km.rings[2].session.has_value());
  EXPECT_FALSE(km.stations[0].sessions.contains(NodeId{2}));
  EXPECT_TRUE(km.rings[2].authenticated);
}
