#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "wsn/types.hpp"

namespace wsn::crypto {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// AES-128 with the key schedule expanded once (11 round keys).
class Aes128 {
 public:
  explicit Aes128(const Key& key);

  Block encrypt(const Block& in) const;
  Block decrypt(const Block& in) const;

 private:
  std::array<std::array<std::uint8_t, 16>, 11> round_keys_;
};

Block aes128_encrypt_block(const Key& key, const Block& pt);
Block aes128_decrypt_block(const Key& key, const Block& ct);

// Longest payload the sealed-message length prefix can carry.
inline constexpr std::size_t kMaxPayload = 0xFFFF;

// CTR mode. Keystream block j is E(key, nonce + j mod 2^128), the nonce read
// as a big-endian counter. Encryption and decryption are the same call.
// Throws LengthError when data.size() > kMaxPayload.
Bytes ctr_encrypt(const Key& key, const Block& nonce, ByteView data);

// AES-CMAC (NIST SP 800-38B / RFC 4493).
Block cmac(const Key& key, ByteView data);

// Comparison whose running time does not depend on where inputs differ.
bool equal_constant_shape(ByteView a, ByteView b);

}  // namespace wsn::crypto
