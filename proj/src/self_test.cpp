#include "wsn/self_test.hpp"

#include <algorithm>
#include <stdexcept>

#include "wsn/crypto.hpp"

namespace wsn::crypto {

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xf];
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit");
  };
  if (hex.size() % 2) throw std::invalid_argument("odd hex length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

namespace {

Block block_from_hex(std::string_view hex) {
  const auto bytes = from_hex(hex);
  Block b{};
  std::copy(bytes.begin(), bytes.end(), b.begin());
  return b;
}

constexpr std::string_view kRfcKey = "2b7e151628aed2a6abf7158809cf4f3c";
constexpr std::string_view kRfcMessage =
    "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51"
    "30c81c46a35ce411e5fbc1191a0a52eff69f2445df4f9b17ad2b417be66c3710";

}  // namespace

std::vector<VectorResult> run_reference_vectors() {
  std::vector<VectorResult> out;
  auto add = [&](std::string name, std::string expected, const Block& actual) {
    std::string got = to_hex(actual);
    const bool pass = got == expected;
    out.push_back({std::move(name), std::move(expected), std::move(got), pass});
  };

  add("AES-128 FIPS-197 C.1",
      "69c4e0d86a7b0430d8cdb78070b4c55a",
      aes128_encrypt_block(block_from_hex("000102030405060708090a0b0c0d0e0f"),
                           block_from_hex("00112233445566778899aabbccddeeff")));
  add("AES-128 SP800-38A F.1.1 block 1",
      "3ad77bb40d7a3660a89ecaf32466ef97",
      aes128_encrypt_block(block_from_hex(kRfcKey), block_from_hex(kRfcMessage.substr(0, 32))));
  add("AES-128 FIPS-197 C.1 inverse",
      "00112233445566778899aabbccddeeff",
      aes128_decrypt_block(block_from_hex("000102030405060708090a0b0c0d0e0f"),
                           block_from_hex("69c4e0d86a7b0430d8cdb78070b4c55a")));

  const Key key = block_from_hex(kRfcKey);
  const auto msg = from_hex(kRfcMessage);
  const ByteView all(msg);
  add("AES-CMAC RFC 4493 example 1 (0 bytes)", "bb1d6929e95937287fa37d129b756746", cmac(key, all.first(0)));
  add("AES-CMAC RFC 4493 example 2 (16 bytes)", "070a16b46b4d4144f79bdd9dd04a287c", cmac(key, all.first(16)));
  add("AES-CMAC RFC 4493 example 3 (40 bytes)", "dfa66747de9ae63030ca32611497c827", cmac(key, all.first(40)));
  add("AES-CMAC RFC 4493 example 4 (64 bytes)", "51f0bebf7e3b9d92fc49741779363cfe", cmac(key, all));
  return out;
}

}  // namespace wsn::crypto
