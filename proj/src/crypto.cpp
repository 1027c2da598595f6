#include "wsn/crypto.hpp"

#include "wsn/errors.hpp"

namespace wsn::crypto {

namespace {

constexpr std::uint8_t xtime(std::uint8_t a) {
  return static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? 0x1b : 0x00));
}

constexpr std::uint8_t gmul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t p = 0;
  while (b) {
    if (b & 1) p ^= a;
    a = xtime(a);
    b >>= 1;
  }
  return p;
}

constexpr std::uint8_t rotl8(std::uint8_t x, int s) {
  return static_cast<std::uint8_t>((x << s) | (x >> (8 - s)));
}

// S-box built from its definition: multiplicative inverse in GF(2^8)
// followed by the affine map.
constexpr std::array<std::uint8_t, 256> make_sbox() {
  std::array<std::uint8_t, 256> s{};
  for (int x = 0; x < 256; ++x) {
    std::uint8_t inv = 0;
    if (x != 0) {
      for (int y = 1; y < 256; ++y) {
        if (gmul(static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y)) == 1) {
          inv = static_cast<std::uint8_t>(y);
          break;
        }
      }
    }
    s[x] = static_cast<std::uint8_t>(inv ^ rotl8(inv, 1) ^ rotl8(inv, 2) ^ rotl8(inv, 3) ^ rotl8(inv, 4) ^ 0x63);
  }
  return s;
}

constexpr std::array<std::uint8_t, 256> make_inv_sbox(const std::array<std::uint8_t, 256>& s) {
  std::array<std::uint8_t, 256> inv{};
  for (int x = 0; x < 256; ++x) inv[s[x]] = static_cast<std::uint8_t>(x);
  return inv;
}

constexpr auto kSbox = make_sbox();
constexpr auto kInvSbox = make_inv_sbox(kSbox);

static_assert(kSbox[0x00] == 0x63 && kSbox[0x53] == 0xed && kSbox[0xff] == 0x16);

using State = std::array<std::uint8_t, 16>;  // column-major, as in the standard

void add_round_key(State& s, const std::array<std::uint8_t, 16>& rk) {
  for (int i = 0; i < 16; ++i) s[i] ^= rk[i];
}

void sub_bytes(State& s) {
  for (auto& b : s) b = kSbox[b];
}

void inv_sub_bytes(State& s) {
  for (auto& b : s) b = kInvSbox[b];
}

// Row r is rotated left by r; byte (r, c) lives at index r + 4c.
void shift_rows(State& s) {
  State t = s;
  for (int r = 1; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) s[r + 4 * c] = t[r + 4 * ((c + r) % 4)];
  }
}

void inv_shift_rows(State& s) {
  State t = s;
  for (int r = 1; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) s[r + 4 * ((c + r) % 4)] = t[r + 4 * c];
  }
}

void mix_columns(State& s) {
  for (int c = 0; c < 4; ++c) {
    std::uint8_t* col = &s[4 * c];
    const std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
    col[0] = static_cast<std::uint8_t>(xtime(a0) ^ (xtime(a1) ^ a1) ^ a2 ^ a3);
    col[1] = static_cast<std::uint8_t>(a0 ^ xtime(a1) ^ (xtime(a2) ^ a2) ^ a3);
    col[2] = static_cast<std::uint8_t>(a0 ^ a1 ^ xtime(a2) ^ (xtime(a3) ^ a3));
    col[3] = static_cast<std::uint8_t>((xtime(a0) ^ a0) ^ a1 ^ a2 ^ xtime(a3));
  }
}

void inv_mix_columns(State& s) {
  for (int c = 0; c < 4; ++c) {
    std::uint8_t* col = &s[4 * c];
    const std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
    col[0] = gmul(a0, 0x0e) ^ gmul(a1, 0x0b) ^ gmul(a2, 0x0d) ^ gmul(a3, 0x09);
    col[1] = gmul(a0, 0x09) ^ gmul(a1, 0x0e) ^ gmul(a2, 0x0b) ^ gmul(a3, 0x0d);
    col[2] = gmul(a0, 0x0d) ^ gmul(a1, 0x09) ^ gmul(a2, 0x0e) ^ gmul(a3, 0x0b);
    col[3] = gmul(a0, 0x0b) ^ gmul(a1, 0x0d) ^ gmul(a2, 0x09) ^ gmul(a3, 0x0e);
  }
}

// CMAC subkey derivation: doubling in GF(2^128), Rb = 0x87.
Block dbl(const Block& in) {
  Block out{};
  const bool carry = in[0] & 0x80;
  for (int i = 0; i < 15; ++i) out[i] = static_cast<std::uint8_t>((in[i] << 1) | (in[i + 1] >> 7));
  out[15] = static_cast<std::uint8_t>(in[15] << 1);
  if (carry) out[15] ^= 0x87;
  return out;
}

}  // namespace

Aes128::Aes128(const Key& key) {
  // 44 words w[0..43], grouped four at a time into round keys.
  std::array<std::array<std::uint8_t, 4>, 44> w{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) w[i][j] = key[4 * i + j];
  }
  std::uint8_t rcon = 0x01;
  for (int i = 4; i < 44; ++i) {
    auto temp = w[i - 1];
    if (i % 4 == 0) {
      temp = {kSbox[temp[1]], kSbox[temp[2]], kSbox[temp[3]], kSbox[temp[0]]};
      temp[0] ^= rcon;
      rcon = xtime(rcon);
    }
    for (int j = 0; j < 4; ++j) w[i][j] = w[i - 4][j] ^ temp[j];
  }
  for (int r = 0; r < 11; ++r) {
    for (int c = 0; c < 4; ++c) {
      for (int j = 0; j < 4; ++j) round_keys_[r][4 * c + j] = w[4 * r + c][j];
    }
  }
}

Block Aes128::encrypt(const Block& in) const {
  State s = in;
  add_round_key(s, round_keys_[0]);
  for (int round = 1; round < 10; ++round) {
    sub_bytes(s);
    shift_rows(s);
    mix_columns(s);
    add_round_key(s, round_keys_[round]);
  }
  sub_bytes(s);
  shift_rows(s);
  add_round_key(s, round_keys_[10]);
  return s;
}

Block Aes128::decrypt(const Block& in) const {
  State s = in;
  add_round_key(s, round_keys_[10]);
  for (int round = 9; round >= 1; --round) {
    inv_shift_rows(s);
    inv_sub_bytes(s);
    add_round_key(s, round_keys_[round]);
    inv_mix_columns(s);
  }
  inv_shift_rows(s);
  inv_sub_bytes(s);
  add_round_key(s, round_keys_[0]);
  return s;
}

Block aes128_encrypt_block(const Key& key, const Block& pt) { return Aes128(key).encrypt(pt); }

Block aes128_decrypt_block(const Key& key, const Block& ct) { return Aes128(key).decrypt(ct); }

Bytes ctr_encrypt(const Key& key, const Block& nonce, ByteView data) {
  if (data.size() > kMaxPayload) {
    throw LengthError("CTR payload of " + std::to_string(data.size()) + " bytes exceeds " +
                      std::to_string(kMaxPayload));
  }
  const Aes128 aes(key);
  Bytes out(data.begin(), data.end());
  Block counter = nonce;
  for (std::size_t off = 0; off < out.size(); off += 16) {
    const Block ks = aes.encrypt(counter);
    const std::size_t n = std::min<std::size_t>(16, out.size() - off);
    for (std::size_t i = 0; i < n; ++i) out[off + i] ^= ks[i];
    for (int i = 15; i >= 0; --i) {
      if (++counter[i] != 0) break;
    }
  }
  return out;
}

Block cmac(const Key& key, ByteView data) {
  const Aes128 aes(key);
  const Block l = aes.encrypt(Block{});
  const Block k1 = dbl(l);
  const Block k2 = dbl(k1);

  const std::size_t n = data.empty() ? 1 : (data.size() + 15) / 16;
  const bool complete = !data.empty() && data.size() % 16 == 0;

  Block x{};
  for (std::size_t b = 0; b + 1 < n; ++b) {
    for (int i = 0; i < 16; ++i) x[i] ^= data[16 * b + i];
    x = aes.encrypt(x);
  }
  Block last{};
  const std::size_t tail = data.size() - 16 * (n - 1);
  for (std::size_t i = 0; i < tail; ++i) last[i] = data[16 * (n - 1) + i];
  if (complete) {
    for (int i = 0; i < 16; ++i) last[i] ^= k1[i];
  } else {
    last[tail] = 0x80;
    for (int i = 0; i < 16; ++i) last[i] ^= k2[i];
  }
  for (int i = 0; i < 16; ++i) x[i] ^= last[i];
  return aes.encrypt(x);
}

bool equal_constant_shape(ByteView a, ByteView b) {
  if (a.size() != b.size()) return false;
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff |= static_cast<std::uint8_t>(a[i] ^ b[i]);
  return diff == 0;
}

}  // namespace wsn::crypto
