#include "wsn/wire.hpp"

#include <bit>
#include <cstring>

#include "wsn/errors.hpp"

namespace wsn {

namespace {

void put_be(crypto::Bytes& out, std::uint64_t v, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_be(crypto::ByteView in, std::size_t off, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 8) | in[off + i];
  return v;
}

crypto::Bytes mac_input(NodeId sender, std::uint64_t counter, const Block& nonce, crypto::ByteView ct) {
  crypto::Bytes m;
  m.reserve(4 + 8 + 16 + ct.size());
  put_be(m, sender.value, 4);
  put_be(m, counter, 8);
  m.insert(m.end(), nonce.begin(), nonce.end());
  m.insert(m.end(), ct.begin(), ct.end());
  return m;
}

crypto::Bytes poll_mac_input(StationId station, NodeId node, TimeStep t) {
  crypto::Bytes m{'P'};
  put_be(m, station.value, 4);
  put_be(m, node.value, 4);
  put_be(m, static_cast<std::uint64_t>(t), 8);
  return m;
}

}  // namespace

crypto::Bytes serialize(const SealedMessage& msg) {
  if (msg.ciphertext.size() > crypto::kMaxPayload) throw LengthError("ciphertext too long for the wire");
  crypto::Bytes out;
  out.reserve(kSealedOverhead + msg.ciphertext.size());
  put_be(out, msg.sender.value, 4);
  put_be(out, msg.counter, 8);
  out.insert(out.end(), msg.nonce.begin(), msg.nonce.end());
  put_be(out, msg.ciphertext.size(), 2);
  out.insert(out.end(), msg.ciphertext.begin(), msg.ciphertext.end());
  out.insert(out.end(), msg.tag.begin(), msg.tag.end());
  return out;
}

std::optional<SealedMessage> parse_sealed(crypto::ByteView wire) {
  if (wire.size() < kSealedOverhead) return std::nullopt;
  const std::size_t len = get_be(wire, 28, 2);
  if (wire.size() != kSealedOverhead + len) return std::nullopt;
  SealedMessage msg;
  msg.sender = NodeId{static_cast<std::uint32_t>(get_be(wire, 0, 4))};
  msg.counter = get_be(wire, 4, 8);
  std::memcpy(msg.nonce.data(), wire.data() + 12, 16);
  msg.ciphertext.assign(wire.begin() + 30, wire.begin() + 30 + static_cast<std::ptrdiff_t>(len));
  std::memcpy(msg.tag.data(), wire.data() + 30 + len, 16);
  return msg;
}

Block derive_nonce(const Key& session, std::uint64_t counter) {
  crypto::Bytes in;
  put_be(in, counter, 8);
  in.push_back(0x02);
  return crypto::cmac(session, in);
}

SealedMessage seal(const std::optional<Key>& session, NodeId sender, std::uint64_t counter,
                   crypto::ByteView plaintext, const NonceSource& nonce_source) {
  if (!session) throw NoSession("node " + std::to_string(sender.value) + " has no session key");
  SealedMessage msg;
  msg.sender = sender;
  msg.counter = counter;
  msg.nonce = nonce_source(*session, counter);
  msg.ciphertext = crypto::ctr_encrypt(*session, msg.nonce, plaintext);
  msg.tag = crypto::cmac(*session, mac_input(sender, counter, msg.nonce, msg.ciphertext));
  return msg;
}

bool FreshnessWindow::is_fresh(NodeId sender, std::uint64_t counter) const {
  auto it = highest_.find(sender);
  return it == highest_.end() || counter > it->second;
}

void FreshnessWindow::advance(NodeId sender, std::uint64_t counter) {
  auto [it, inserted] = highest_.try_emplace(sender, counter);
  if (!inserted && counter > it->second) it->second = counter;
}

std::optional<std::uint64_t> FreshnessWindow::highest(NodeId sender) const {
  auto it = highest_.find(sender);
  if (it == highest_.end()) return std::nullopt;
  return it->second;
}

const char* to_string(OpenStatus s) {
  switch (s) {
    case OpenStatus::accepted: return "accepted";
    case OpenStatus::unknown_sender: return "unknown_sender";
    case OpenStatus::bad_tag: return "bad_tag";
    case OpenStatus::replay: return "replay";
  }
  return "?";
}

OpenResult open(const SessionTable& sessions, const SealedMessage& msg, FreshnessWindow& window,
                OpenMetrics& metrics) {
  auto it = sessions.find(msg.sender);
  if (it == sessions.end()) {
    ++metrics.unknown_sender;
    return {OpenStatus::unknown_sender, {}};
  }
  const Key& key = it->second;
  const Block expected = crypto::cmac(key, mac_input(msg.sender, msg.counter, msg.nonce, msg.ciphertext));
  if (!crypto::equal_constant_shape(expected, msg.tag)) {
    ++metrics.bad_tag;
    return {OpenStatus::bad_tag, {}};
  }
  if (!window.is_fresh(msg.sender, msg.counter)) {
    ++metrics.replay;
    return {OpenStatus::replay, {}};
  }
  window.advance(msg.sender, msg.counter);
  ++metrics.accepted;
  return {OpenStatus::accepted, crypto::ctr_encrypt(key, msg.nonce, msg.ciphertext)};
}

crypto::Bytes encode_reading(const ReadingPayload& r) {
  crypto::Bytes out;
  out.reserve(16);
  put_be(out, static_cast<std::uint64_t>(r.t), 8);
  put_be(out, std::bit_cast<std::uint64_t>(r.value), 8);
  return out;
}

std::optional<ReadingPayload> decode_reading(crypto::ByteView bytes) {
  if (bytes.size() != 16) return std::nullopt;
  return ReadingPayload{static_cast<TimeStep>(get_be(bytes, 0, 8)), std::bit_cast<double>(get_be(bytes, 8, 8))};
}

Poll make_poll(const Key& session, StationId station, NodeId node, TimeStep t) {
  return {station, node, t, crypto::cmac(session, poll_mac_input(station, node, t))};
}

bool verify_poll(const Key& session, const Poll& poll) {
  return crypto::equal_constant_shape(crypto::cmac(session, poll_mac_input(poll.station, poll.node, poll.t)),
                                      poll.tag);
}

}  // namespace wsn
