#pragma once

// Linear disassembly of EVM bytecode and extraction of the deployed runtime
// segment from creation code.

#include "storlift/opcode.hpp"
#include "storlift/word.hpp"

#include <cctype>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace storlift {

struct Instruction {
  std::uint32_t pc = 0;
  std::uint8_t op = 0;
  std::uint8_t imm_size = 0;  // nonzero only for PUSH1..PUSH32
  Word imm = 0;               // push immediate, zero-extended if truncated
};

// Hex string (optionally 0x-prefixed, whitespace tolerated) to bytes.
inline std::vector<std::uint8_t> decode_hex_bytes(std::string_view text) {
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 2);
  int hi = -1;
  std::size_t i = 0;
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) i = 2;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = 10 + (c - 'a');
    else if (c >= 'A' && c <= 'F') d = 10 + (c - 'A');
    else throw std::invalid_argument("invalid hex character in bytecode");
    if (hi < 0) {
      hi = d;
    } else {
      out.push_back(static_cast<std::uint8_t>(hi << 4 | d));
      hi = -1;
    }
  }
  if (hi >= 0) throw std::invalid_argument("odd number of hex digits in bytecode");
  return out;
}

// One pass over the byte stream. Push immediates that run past the end of
// the code read as zero, matching the machine's virtual zero padding.
inline std::vector<Instruction> disassemble(std::span<const std::uint8_t> code) {
  std::vector<Instruction> out;
  out.reserve(code.size());
  std::size_t pc = 0;
  while (pc < code.size()) {
    Instruction ins;
    ins.pc = static_cast<std::uint32_t>(pc);
    ins.op = code[pc];
    if (is_push(ins.op)) {
      unsigned n = push_size(ins.op);
      ins.imm_size = static_cast<std::uint8_t>(n);
      Word imm = 0;
      for (unsigned i = 0; i < n; ++i) {
        std::size_t at = pc + 1 + i;
        imm = (imm << 8) | (at < code.size() ? code[at] : 0);
      }
      ins.imm = imm;
      pc += 1 + n;
    } else {
      pc += 1;
    }
    out.push_back(ins);
  }
  return out;
}

// Detects the constructor epilogue (CODECOPY of a later code segment to
// memory offset 0 followed by RETURN of that segment) and returns the copied
// runtime bytes. Input that has no such epilogue is already runtime code and
// is returned unchanged.
inline std::vector<std::uint8_t> extract_runtime(std::span<const std::uint8_t> code) {
  auto instructions = disassemble(code);
  std::optional<std::pair<std::size_t, std::size_t>> segment;  // offset, length

  // Simulate only constants within a straight-line run; anything else
  // clears the tracked stack.
  std::vector<std::optional<Word>> stack;
  std::optional<std::pair<std::size_t, std::size_t>> pending;  // copy awaiting RETURN
  auto arg = [&](std::size_t i) -> std::optional<Word> {
    return i < stack.size() ? stack[stack.size() - 1 - i] : std::nullopt;
  };
  for (const auto& ins : instructions) {
    if (is_push(ins.op)) {
      stack.push_back(ins.imm);
    } else if (ins.op == OP_PUSH0) {
      stack.push_back(Word(0));
    } else if (is_dup(ins.op)) {
      unsigned n = ins.op - OP_DUP1 + 1;
      stack.push_back(arg(n - 1));
    } else if (is_swap(ins.op)) {
      unsigned n = ins.op - OP_SWAP1 + 1;
      if (stack.size() > n) std::swap(stack.back(), stack[stack.size() - 1 - n]);
      else stack.clear();
    } else if (ins.op == OP_POP) {
      if (!stack.empty()) stack.pop_back();
    } else if (ins.op == OP_CODECOPY) {
      auto dest = arg(0), off = arg(1), len = arg(2);
      if (dest && *dest == 0 && off && len && *len > 0 && *off + *len <= code.size() &&
          *off > 0) {
        pending = {static_cast<std::size_t>(*off), static_cast<std::size_t>(*len)};
      }
      stack.clear();
    } else if (ins.op == OP_RETURN) {
      auto off = arg(0), len = arg(1);
      if (pending && (!off || *off == 0) && (!len || *len == pending->second))
        segment = pending;
      stack.clear();
      pending.reset();
    } else if (ins.op == OP_JUMPDEST || is_terminator(ins.op) || ins.op == OP_JUMPI) {
      stack.clear();
      pending.reset();
    } else {
      // Any other instruction produces unknown values / consumes operands.
      const auto& info = op_info(ins.op);
      for (unsigned i = 0; i < info.pops && !stack.empty(); ++i) stack.pop_back();
      for (unsigned i = 0; i < info.pushes; ++i) stack.push_back(std::nullopt);
    }
  }
  if (segment)
    return std::vector<std::uint8_t>(code.begin() + segment->first,
                                     code.begin() + segment->first + segment->second);
  return std::vector<std::uint8_t>(code.begin(), code.end());
}

}  // namespace storlift
