// Validates the concrete-interpreter test oracle and uses it to check that
// constant folding never disagrees with real execution.

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "storlift/cfg.hpp"
#include "storlift/instruction.hpp"
#include "storlift/lifter.hpp"
#include "support/asm.hpp"
#include "support/interp.hpp"

using namespace storlift;
using tsup::Asm;
using tsup::Interp;

namespace {

Program lift_bytes(const std::vector<std::uint8_t>& code) {
  auto ins = disassemble(code);
  auto cfg = build_cfg(ins);
  return lift_to_ssa(cfg);
}

// Random straight-line program over a chosen operator set, ending in STOP.
// Tracks stack depth so every emitted instruction is well-formed.
std::vector<std::uint8_t> random_program(std::mt19937_64& rng, bool wide_ops) {
  static const std::vector<std::pair<std::uint8_t, int>> kFoldable = {
      {OP_ADD, 2}, {OP_SUB, 2}, {OP_MUL, 2}, {OP_DIV, 2}, {OP_EXP, 2},
      {OP_SHL, 2}, {OP_SHR, 2}, {OP_AND, 2}, {OP_OR, 2},  {OP_XOR, 2},
      {OP_NOT, 1},
  };
  static const std::vector<std::pair<std::uint8_t, int>> kExtra = {
      {OP_MOD, 2},  {OP_SDIV, 2},   {OP_SMOD, 2}, {OP_ADDMOD, 3},
      {OP_MULMOD, 3}, {OP_SIGNEXTEND, 2}, {OP_LT, 2},   {OP_GT, 2},
      {OP_SLT, 2},  {OP_SGT, 2},    {OP_EQ, 2},   {OP_ISZERO, 1},
      {OP_BYTE, 2}, {OP_SAR, 2},
  };

  Asm a;
  int depth = 0;
  auto push_random = [&] {
    unsigned width = 1 + rng() % 32;
    Word v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 8) | Word(rng() & 0xff);
    a.push_n(width, v);
    ++depth;
  };
  std::size_t len = 20 + rng() % 40;
  for (std::size_t i = 0; i < len; ++i) {
    int roll = static_cast<int>(rng() % 10);
    if (depth < 3 || roll < 3) {
      push_random();
    } else if (roll < 4 && depth >= 1) {
      unsigned n = 1 + rng() % std::min(depth, 16);
      a.op(static_cast<std::uint8_t>(OP_DUP1 + n - 1));
      ++depth;
    } else if (roll < 5 && depth >= 2) {
      unsigned n = 1 + rng() % std::min(depth - 1, 16);
      a.op(static_cast<std::uint8_t>(OP_SWAP1 + n - 1));
    } else {
      const auto& table = (wide_ops && rng() % 2) ? kExtra : kFoldable;
      for (int tries = 0; tries < 8; ++tries) {
        auto [op, arity] = table[rng() % table.size()];
        if (depth >= arity) {
          a.op(op);
          depth += 1 - arity;
          break;
        }
      }
    }
  }
  a.op(OP_STOP);
  return a.build();
}

}  // namespace

TEST_CASE("interpreter executes arithmetic and stack ops") {
  Asm a;
  a.push(5).push(3).op(OP_ADD);               // 8
  a.push(2).op(OP_DUP1 + 1).op(OP_MUL);       // DUP2: 16, under it 8
  a.op(OP_SWAP1).op(OP_POP).op(OP_STOP);      // leaves [16]
  Interp it;
  it.code = a.build();
  auto res = it.run();
  REQUIRE(res.status == tsup::ExecResult::Status::Stopped);
  REQUIRE(res.stack.size() == 1);
  REQUIRE(res.stack[0] == 16);
}

TEST_CASE("interpreter storage and hashing agree with direct keccak") {
  Asm a;
  // storage[1] = 7, then hash the 64-byte buffer [pad32(7) || pad32(1)].
  a.push(7).push(1).op(OP_SSTORE);
  a.push(1).op(OP_SLOAD);                    // loads 7
  a.push(0).op(OP_MSTORE);                   // mem[0..32) = 7
  a.push(1).push(0x20).op(OP_MSTORE);        // mem[32..64) = 1
  a.push(0x40).push(0).op(OP_SHA3);
  a.op(OP_STOP);
  Interp it;
  it.code = a.build();
  auto res = it.run();
  REQUIRE(res.status == tsup::ExecResult::Status::Stopped);

  std::uint8_t buf[64] = {};
  auto k = to_bytes32(Word(7)), s = to_bytes32(Word(1));
  std::copy(k.begin(), k.end(), buf);
  std::copy(s.begin(), s.end(), buf + 32);
  REQUIRE(res.stack.size() == 1);
  REQUIRE(res.stack[0] == keccak256_word(std::span<const std::uint8_t>(buf, 64)));

  REQUIRE(res.storage_ops.size() == 2);
  REQUIRE(res.storage_ops[0].is_store);
  REQUIRE(res.storage_ops[0].slot == 1);
  REQUIRE(res.storage_ops[1].value == 7);
}

TEST_CASE("interpreter follows conditional jumps") {
  Asm a;
  a.push(1).push_label("then").op(OP_JUMPI);
  a.push(0xbad).op(OP_STOP);
  a.jumpdest("then");
  a.push(0x600d).op(OP_STOP);
  Interp it;
  it.code = a.build();
  auto res = it.run();
  REQUIRE(res.status == tsup::ExecResult::Status::Stopped);
  REQUIRE(res.stack.size() == 1);
  REQUIRE(res.stack[0] == 0x600d);
}

TEST_CASE("constant folding fully covers and matches execution on constant programs") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    auto code = random_program(rng, /*wide_ops=*/false);
    INFO("seed " << seed);

    Interp it;
    it.code = code;
    auto res = it.run();
    REQUIRE(res.status == tsup::ExecResult::Status::Stopped);
    std::map<std::uint32_t, Word> pushed_at;
    for (const auto& r : res.trace)
      if (r.pushed) pushed_at[r.pc] = *r.pushed;

    auto p = lift_bytes(code);
    fold_constants(p);
    for (const auto& s : p.stmts) {
      if (s.dead || s.def == kNoVar) continue;
      INFO("stmt " << op_name(s.op) << " at pc " << s.pc);
      REQUIRE(p.var_const[s.def].has_value());
      REQUIRE(pushed_at.count(s.pc) == 1);
      REQUIRE(*p.var_const[s.def] == pushed_at.at(s.pc));
    }
  }
}

TEST_CASE("constant folding stays sound when unfolded operators interleave") {
  std::size_t folded = 0, unfolded = 0;
  for (std::uint64_t seed = 1000; seed < 1200; ++seed) {
    std::mt19937_64 rng(seed);
    auto code = random_program(rng, /*wide_ops=*/true);
    INFO("seed " << seed);

    Interp it;
    it.code = code;
    auto res = it.run();
    REQUIRE(res.status == tsup::ExecResult::Status::Stopped);
    std::map<std::uint32_t, Word> pushed_at;
    for (const auto& r : res.trace)
      if (r.pushed) pushed_at[r.pc] = *r.pushed;

    auto p = lift_bytes(code);
    fold_constants(p);
    for (const auto& s : p.stmts) {
      if (s.dead || s.def == kNoVar) continue;
      if (!p.var_const[s.def]) {
        ++unfolded;
        continue;
      }
      ++folded;
      INFO("stmt " << op_name(s.op) << " at pc " << s.pc);
      REQUIRE(pushed_at.count(s.pc) == 1);
      REQUIRE(*p.var_const[s.def] == pushed_at.at(s.pc));
    }
  }
  // The mixed generator must exercise both sides of the property.
  REQUIRE(folded > 1000);
  REQUIRE(unfolded > 100);
}
