#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "wsn/crypto.hpp"
#include "wsn/types.hpp"

namespace wsn {

// Node -> station record. Wire layout, all integers big-endian:
//
//   offset  size  field
//   0       4     sender id
//   4       8     counter (strictly increasing per sender)
//   12      16    nonce
//   28      2     ciphertext length L
//   30      L     ciphertext
//   30+L    16    tag = CMAC(session, sender | counter | nonce | ciphertext)
struct SealedMessage {
  NodeId sender;
  std::uint64_t counter = 0;
  Block nonce{};
  crypto::Bytes ciphertext;
  Block tag{};

  bool operator==(const SealedMessage&) const = default;
};

inline constexpr std::size_t kSealedOverhead = 4 + 8 + 16 + 2 + 16;

crypto::Bytes serialize(const SealedMessage& msg);
// nullopt on truncated, oversized or trailing bytes.
std::optional<SealedMessage> parse_sealed(crypto::ByteView wire);

using NonceSource = std::function<Block(const Key& session, std::uint64_t counter)>;

// CMAC(session, counter | 0x02): unique per (session, counter).
Block derive_nonce(const Key& session, std::uint64_t counter);

// Encrypt-then-MAC under the session key. Throws NoSession when `session` is
// empty and LengthError for payloads over crypto::kMaxPayload.
SealedMessage seal(const std::optional<Key>& session, NodeId sender, std::uint64_t counter,
                   crypto::ByteView plaintext, const NonceSource& nonce_source = derive_nonce);

// Highest accepted counter per sender.
class FreshnessWindow {
 public:
  bool is_fresh(NodeId sender, std::uint64_t counter) const;
  void advance(NodeId sender, std::uint64_t counter);
  std::optional<std::uint64_t> highest(NodeId sender) const;

 private:
  std::map<NodeId, std::uint64_t> highest_;
};

enum class OpenStatus { accepted, unknown_sender, bad_tag, replay };

const char* to_string(OpenStatus s);

struct OpenMetrics {
  std::uint64_t accepted = 0;
  std::uint64_t unknown_sender = 0;
  std::uint64_t bad_tag = 0;
  std::uint64_t replay = 0;

  bool operator==(const OpenMetrics&) const = default;
};

struct OpenResult {
  OpenStatus status = OpenStatus::bad_tag;
  crypto::Bytes plaintext;  // empty unless accepted

  bool ok() const { return status == OpenStatus::accepted; }
};

// Station-side session keys, by node.
using SessionTable = std::map<NodeId, Key>;

// Verifies the tag, then freshness, then decrypts. Only an accepted message
// advances the window. Each outcome bumps its own metrics counter.
OpenResult open(const SessionTable& sessions, const SealedMessage& msg, FreshnessWindow& window,
                OpenMetrics& metrics);

// Reading payload: t as 8-byte big-endian two's complement, then the IEEE-754
// double bit pattern big-endian.
struct ReadingPayload {
  TimeStep t = 0;
  double value = 0.0;
  bool operator==(const ReadingPayload&) const = default;
};

crypto::Bytes encode_reading(const ReadingPayload& r);
std::optional<ReadingPayload> decode_reading(crypto::ByteView bytes);

// Station -> node poll: authenticated, not encrypted.
struct Poll {
  StationId station;
  NodeId node;
  TimeStep t = 0;
  Block tag{};
};

Poll make_poll(const Key& session, StationId station, NodeId node, TimeStep t);
bool verify_poll(const Key& session, const Poll& poll);

}  // namespace wsn
