#pragma once

// 256-bit EVM machine word and the arithmetic the VM defines on it.
// Plain +,-,* on Word already wrap modulo 2^256 (fixed-width unchecked
// backend); the functions here cover the operations whose EVM semantics
// differ from the C++ operators (division by zero, signed variants,
// word-sized shift counts, ...).

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace storlift {

using Word = boost::multiprecision::uint256_t;
using Word512 = boost::multiprecision::uint512_t;

inline constexpr unsigned kWordBits = 256;
inline constexpr unsigned kWordBytes = 32;

inline bool sign_bit(const Word& x) { return boost::multiprecision::bit_test(x, kWordBits - 1); }

inline Word evm_not(const Word& x) { return ~x; }

inline Word evm_neg(const Word& x) { return Word(0) - x; }

inline Word evm_div(const Word& a, const Word& b) { return b == 0 ? Word(0) : Word(a / b); }

inline Word evm_mod(const Word& a, const Word& b) { return b == 0 ? Word(0) : Word(a % b); }

inline Word evm_sdiv(const Word& a, const Word& b) {
  if (b == 0) return 0;
  bool na = sign_bit(a), nb = sign_bit(b);
  Word ua = na ? evm_neg(a) : a;
  Word ub = nb ? evm_neg(b) : b;
  Word q = ua / ub;
  return na != nb ? evm_neg(q) : q;
}

inline Word evm_smod(const Word& a, const Word& b) {
  if (b == 0) return 0;
  bool na = sign_bit(a);
  Word ua = na ? evm_neg(a) : a;
  Word ub = sign_bit(b) ? evm_neg(b) : b;
  Word r = ua % ub;
  return na ? evm_neg(r) : r;
}

inline Word evm_addmod(const Word& a, const Word& b, const Word& m) {
  if (m == 0) return 0;
  return Word((Word512(a) + Word512(b)) % Word512(m));
}

inline Word evm_mulmod(const Word& a, const Word& b, const Word& m) {
  if (m == 0) return 0;
  return Word((Word512(a) * Word512(b)) % Word512(m));
}

inline Word evm_exp(const Word& base, const Word& exponent) {
  Word result = 1, b = base, e = exponent;
  while (e != 0) {
    if (boost::multiprecision::bit_test(e, 0)) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

// SIGNEXTEND: b selects the byte position of the sign bit (0 = lowest byte).
inline Word evm_signextend(const Word& b, const Word& x) {
  if (b >= 31) return x;
  unsigned bit = 8 * static_cast<unsigned>(b) + 7;
  Word mask = (Word(1) << (bit + 1)) - 1;
  if (boost::multiprecision::bit_test(x, bit)) return x | ~mask;
  return x & mask;
}

// BYTE: i counts from the most significant byte (i = 0 -> MSB).
inline Word evm_byte(const Word& i, const Word& x) {
  if (i >= 32) return 0;
  unsigned shift = 8 * (31 - static_cast<unsigned>(i));
  return (x >> shift) & 0xff;
}

inline Word evm_shl(const Word& shift, const Word& x) {
  if (shift >= kWordBits) return 0;
  return x << static_cast<unsigned>(shift);
}

inline Word evm_shr(const Word& shift, const Word& x) {
  if (shift >= kWordBits) return 0;
  return x >> static_cast<unsigned>(shift);
}

inline Word evm_sar(const Word& shift, const Word& x) {
  bool neg = sign_bit(x);
  if (shift >= kWordBits) return neg ? evm_not(Word(0)) : Word(0);
  unsigned s = static_cast<unsigned>(shift);
  Word r = x >> s;
  if (neg && s > 0) r |= ~((Word(1) << (kWordBits - s)) - 1);
  return r;
}

inline bool evm_slt(const Word& a, const Word& b) {
  bool na = sign_bit(a), nb = sign_bit(b);
  if (na != nb) return na;
  return a < b;
}

inline bool evm_sgt(const Word& a, const Word& b) { return evm_slt(b, a); }

// --- formatting -----------------------------------------------------------

inline std::string to_hex(const Word& x, bool pad64 = false) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  Word v = x;
  if (v == 0) out = "0";
  while (v != 0) {
    out += digits[static_cast<unsigned>(v & 0xf)];
    v >>= 4;
  }
  while (pad64 && out.size() < 64) out += '0';
  out += "x0";
  return std::string(out.rbegin(), out.rend());
}

inline std::string to_dec(const Word& x) { return x.str(); }

inline std::optional<Word> try_parse_hex(std::string_view s) {
  if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
  if (s.empty() || s.size() > 64) return std::nullopt;
  Word v = 0;
  for (char c : s) {
    unsigned d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = 10 + (c - 'a');
    else if (c >= 'A' && c <= 'F') d = 10 + (c - 'A');
    else return std::nullopt;
    v = (v << 4) | d;
  }
  return v;
}

// Accepts 0x-prefixed hex or plain decimal.
inline std::optional<Word> try_parse_word(std::string_view s) {
  if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) return try_parse_hex(s);
  if (s.empty()) return std::nullopt;
  Word v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    Word next = v * 10 + (c - '0');
    if (next < v) return std::nullopt;
    v = next;
  }
  return v;
}

inline Word parse_word(std::string_view s) {
  auto v = try_parse_word(s);
  if (!v) throw std::invalid_argument("not a 256-bit word: " + std::string(s));
  return *v;
}

inline std::array<std::uint8_t, 32> to_bytes32(const Word& x) {
  std::array<std::uint8_t, 32> out{};
  Word v = x;
  for (int i = 31; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
  return out;
}

inline Word from_bytes32(const std::uint8_t* p) {
  Word v = 0;
  for (unsigned i = 0; i < 32; ++i) v = (v << 8) | p[i];
  return v;
}

// Number of bytes needed to represent x (0 -> 0).
inline unsigned byte_width(const Word& x) {
  unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(x | 1)) + 1;
  return x == 0 ? 0 : (bits + 7) / 8;
}

// Hex text (optional 0x prefix, whitespace tolerated) to raw bytes.
// Odd digit counts and non-hex characters yield nullopt.
inline std::optional<std::vector<std::uint8_t>> parse_hex_bytes(
    std::string_view text) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return 10 + (c - 'a');
    if (c >= 'A' && c <= 'F') return 10 + (c - 'A');
    return -1;
  };
  std::string digits;
  digits.reserve(text.size());
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    digits += c;
  }
  std::string_view d = digits;
  if (d.size() >= 2 && d[0] == '0' && (d[1] == 'x' || d[1] == 'X'))
    d.remove_prefix(2);
  if (d.size() % 2 != 0) return std::nullopt;
  std::vector<std::uint8_t> out;
  out.reserve(d.size() / 2);
  for (std::size_t i = 0; i < d.size(); i += 2) {
    int hi = nibble(d[i]), lo = nibble(d[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

// True iff x == 2^(8n) - 1 for n in [1,32]; reports n.
inline bool is_low_byte_mask(const Word& x, unsigned& n) {
  if (x == 0) return false;
  Word v = x + 1;                       // power of two (or 0 when x is all-ones)
  if (v == 0) { n = 32; return true; }
  if ((v & (v - 1)) != 0) return false;
  unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(v));
  if (bits % 8 != 0) return false;
  n = bits / 8;
  return n >= 1 && n <= 32;
}

}  // namespace storlift
