#pragma once

// Keccak-256 as used by the EVM (original Keccak padding 0x01, rate 136).
// Note this is not NIST SHA3-256, which pads with 0x06.

#include "storlift/word.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>

namespace storlift {

namespace detail {

inline constexpr std::array<std::uint64_t, 24> kKeccakRC = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

inline constexpr std::array<unsigned, 25> kKeccakRho = {
    0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43,
    25, 39, 41, 45, 15, 21, 8, 18, 2, 61, 56, 14};

inline std::uint64_t rotl64(std::uint64_t x, unsigned n) {
  return n == 0 ? x : (x << n) | (x >> (64 - n));
}

inline void keccak_f1600(std::array<std::uint64_t, 25>& a) {
  for (unsigned round = 0; round < 24; ++round) {
    std::uint64_t c[5], d[5];
    for (unsigned x = 0; x < 5; ++x)
      c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
    for (unsigned x = 0; x < 5; ++x) {
      d[x] = c[(x + 4) % 5] ^ rotl64(c[(x + 1) % 5], 1);
      for (unsigned y = 0; y < 5; ++y) a[x + 5 * y] ^= d[x];
    }
    std::uint64_t b[25];
    for (unsigned x = 0; x < 5; ++x)
      for (unsigned y = 0; y < 5; ++y)
        b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl64(a[x + 5 * y], kKeccakRho[x + 5 * y]);
    for (unsigned x = 0; x < 5; ++x)
      for (unsigned y = 0; y < 5; ++y)
        a[x + 5 * y] = b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
    a[0] ^= kKeccakRC[round];
  }
}

}  // namespace detail

inline std::array<std::uint8_t, 32> keccak256(std::span<const std::uint8_t> data) {
  constexpr std::size_t rate = 136;
  std::array<std::uint64_t, 25> state{};
  std::array<std::uint8_t, rate> block{};

  std::size_t off = 0;
  auto absorb = [&](const std::uint8_t* p) {
    for (unsigned i = 0; i < rate / 8; ++i) {
      std::uint64_t lane;
      std::memcpy(&lane, p + 8 * i, 8);  // little-endian lanes
      state[i] ^= lane;
    }
    detail::keccak_f1600(state);
  };
  while (data.size() - off >= rate) {
    absorb(data.data() + off);
    off += rate;
  }
  block.fill(0);
  std::memcpy(block.data(), data.data() + off, data.size() - off);
  block[data.size() - off] ^= 0x01;
  block[rate - 1] ^= 0x80;
  absorb(block.data());

  std::array<std::uint8_t, 32> out;
  std::memcpy(out.data(), state.data(), 32);
  return out;
}

inline std::array<std::uint8_t, 32> keccak256(std::string_view s) {
  return keccak256(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

inline Word keccak256_word(std::span<const std::uint8_t> data) {
  return from_bytes32(keccak256(data).data());
}

inline Word keccak256_word(std::string_view s) { return from_bytes32(keccak256(s).data()); }

}  // namespace storlift
