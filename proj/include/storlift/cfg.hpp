#pragma once

// Control-flow graph construction over disassembled bytecode. Jump targets
// are resolved by an abstract constant-stack interpretation; dynamic jumps
// that stay unresolved over-approximate their successors to every JUMPDEST
// block (kept as a flag plus one shared list, never materialized as edges).

#include "storlift/errors.hpp"
#include "storlift/instruction.hpp"
#include "storlift/opcode.hpp"
#include "storlift/word.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

namespace storlift {

inline constexpr unsigned kEvmStackLimit = 1024;

struct CfgBlock {
  std::uint32_t id = 0;
  std::uint32_t first = 0;  // index range into Cfg::instructions
  std::uint32_t end = 0;    // one past the last instruction
  std::vector<std::uint32_t> succs;
  bool starts_at_jumpdest = false;
  bool unresolved_jump = false;  // ends in a jump whose target never folded
  bool reachable = false;
  // Entry precision. An opaque entry (reachable through some unresolved
  // jump, directly or transitively) carries no abstract stack at all; a
  // height mismatch means predecessors disagreed and the recorded entry was
  // truncated to the common top.
  bool opaque_entry = false;
  bool height_mismatch = false;
  std::vector<std::optional<Word>> entry_stack;  // bottom first
  bool entry_seen = false;
};

struct Cfg {
  std::vector<Instruction> instructions;
  std::vector<CfgBlock> blocks;
  std::vector<std::uint32_t> jumpdest_blocks;  // shared over-approximation set
  bool imprecise = false;                      // any unresolved jump exists
};

namespace detail {

// Result of abstractly executing one block from a given entry stack. Pops
// past the entry produce unknowns (possible only for opaque or truncated
// entries). `halted` marks in-block execution aborts (undefined opcode or
// stack overflow): such blocks get no successors.
struct BlockExit {
  std::vector<std::optional<Word>> stack;
  std::optional<Word> jump_target;  // set if the block ends in JUMP/JUMPI
  bool halted = false;
};

inline BlockExit abstract_run(const Cfg& cfg, const CfgBlock& b,
                              std::vector<std::optional<Word>> stack) {
  BlockExit exit;
  auto pop = [&]() -> std::optional<Word> {
    if (stack.empty()) return std::nullopt;
    auto v = stack.back();
    stack.pop_back();
    return v;
  };
  auto push = [&](std::optional<Word> v) {
    if (stack.size() >= kEvmStackLimit) {
      exit.halted = true;
      return;
    }
    stack.push_back(std::move(v));
  };
  for (std::uint32_t i = b.first; i < b.end && !exit.halted; ++i) {
    const Instruction& ins = cfg.instructions[i];
    std::uint8_t op = ins.op;
    if (is_push(op)) {
      push(ins.imm);
    } else if (op == OP_PUSH0) {
      push(Word(0));
    } else if (is_dup(op)) {
      unsigned n = op - OP_DUP1 + 1;
      push(n <= stack.size() ? stack[stack.size() - n] : std::nullopt);
    } else if (is_swap(op)) {
      unsigned n = op - OP_SWAP1 + 1;
      if (n < stack.size()) {
        std::swap(stack.back(), stack[stack.size() - 1 - n]);
      } else if (!stack.empty()) {
        stack.back() = std::nullopt;  // counterpart lies below the known entry
      }
    } else if (op == OP_JUMP || op == OP_JUMPI) {
      exit.jump_target = pop();
      if (op == OP_JUMPI) pop();  // condition
    } else {
      const OpInfo& info = op_info(op);
      if (!info.name) {
        exit.halted = true;  // undefined opcode aborts execution
        break;
      }
      std::optional<Word> a[2];
      for (unsigned k = 0; k < info.pops; ++k) {
        auto v = pop();
        if (k < 2) a[k] = v;
      }
      std::optional<Word> r;
      if (info.pushes == 1 && a[0] && (info.pops < 2 || a[1])) {
        switch (op) {
          case OP_ADD: r = *a[0] + *a[1]; break;
          case OP_SUB: r = *a[0] - *a[1]; break;
          case OP_MUL: r = *a[0] * *a[1]; break;
          case OP_DIV: r = evm_div(*a[0], *a[1]); break;
          case OP_EXP: r = evm_exp(*a[0], *a[1]); break;
          case OP_SHL: r = evm_shl(*a[0], *a[1]); break;
          case OP_SHR: r = evm_shr(*a[0], *a[1]); break;
          case OP_AND: r = *a[0] & *a[1]; break;
          case OP_OR: r = *a[0] | *a[1]; break;
          case OP_XOR: r = *a[0] ^ *a[1]; break;
          case OP_NOT: r = evm_not(*a[0]); break;
          default: break;
        }
      }
      for (unsigned k = 0; k < info.pushes; ++k) push(k == 0 ? r : std::nullopt);
    }
  }
  exit.stack = std::move(stack);
  return exit;
}

}  // namespace detail

inline Cfg build_cfg(std::vector<Instruction> instructions, const Deadline& deadline = {}) {
  Cfg cfg;
  cfg.instructions = std::move(instructions);

  // Block boundaries: instruction 0, every JUMPDEST, and after every
  // terminator or JUMPI.
  std::vector<std::uint32_t> starts;
  bool boundary = true;
  for (std::uint32_t i = 0; i < cfg.instructions.size(); ++i) {
    std::uint8_t op = cfg.instructions[i].op;
    if (boundary || op == OP_JUMPDEST) starts.push_back(i);
    boundary = is_terminator(op) || op == OP_JUMPI;
  }
  std::unordered_map<std::uint32_t, std::uint32_t> block_at_pc;  // entry pc -> block
  for (std::uint32_t b = 0; b < starts.size(); ++b) {
    CfgBlock blk;
    blk.id = b;
    blk.first = starts[b];
    blk.end = b + 1 < starts.size() ? starts[b + 1]
                                    : static_cast<std::uint32_t>(cfg.instructions.size());
    blk.starts_at_jumpdest = cfg.instructions[blk.first].op == OP_JUMPDEST;
    block_at_pc.emplace(cfg.instructions[blk.first].pc, b);
    if (blk.starts_at_jumpdest) cfg.jumpdest_blocks.push_back(b);
    cfg.blocks.push_back(std::move(blk));
  }
  if (cfg.blocks.empty()) return cfg;

  auto target_block = [&](const Word& pc) -> std::optional<std::uint32_t> {
    if (pc > std::numeric_limits<std::uint32_t>::max()) return std::nullopt;
    auto it = block_at_pc.find(static_cast<std::uint32_t>(pc));
    if (it == block_at_pc.end() || !cfg.blocks[it->second].starts_at_jumpdest)
      return std::nullopt;
    return it->second;
  };

  std::deque<std::uint32_t> work;
  std::vector<bool> queued(cfg.blocks.size(), false);
  auto enqueue = [&](std::uint32_t b) {
    if (!queued[b]) {
      queued[b] = true;
      work.push_back(b);
    }
  };
  auto add_edge = [&](std::uint32_t from, std::uint32_t to) {
    auto& s = cfg.blocks[from].succs;
    if (std::find(s.begin(), s.end(), to) == s.end()) s.push_back(to);
  };

  // Join an incoming abstract state into b's recorded entry; returns true if
  // the recorded state (or reachability) changed. Opaque is the lattice top:
  // it absorbs precise states and never improves.
  auto join_entry = [&](std::uint32_t bid, const std::vector<std::optional<Word>>& incoming,
                        bool opaque) -> bool {
    CfgBlock& b = cfg.blocks[bid];
    bool changed = !b.reachable;
    b.reachable = true;
    if (opaque) {
      if (!b.opaque_entry) {
        b.opaque_entry = true;
        b.entry_stack.clear();
        changed = true;
      }
      return changed;
    }
    if (b.opaque_entry) return changed;
    if (!b.entry_seen) {
      b.entry_seen = true;
      b.entry_stack = incoming;
      return true;
    }
    // Top-aligned join: keep the common top, drop the excess bottom.
    std::size_t keep = std::min(b.entry_stack.size(), incoming.size());
    if (keep < b.entry_stack.size()) {
      b.entry_stack.erase(b.entry_stack.begin(),
                          b.entry_stack.begin() + (b.entry_stack.size() - keep));
      b.height_mismatch = true;
      changed = true;
    }
    if (keep < incoming.size() && !b.height_mismatch) {
      b.height_mismatch = true;
      changed = true;
    }
    for (std::size_t k = 0; k < keep; ++k) {
      auto& mine = b.entry_stack[b.entry_stack.size() - 1 - k];
      const auto& theirs = incoming[incoming.size() - 1 - k];
      if (mine && (!theirs || *mine != *theirs)) {
        mine.reset();
        changed = true;
      }
    }
    return changed;
  };

  cfg.blocks[0].reachable = true;
  cfg.blocks[0].entry_seen = true;
  enqueue(0);
  bool jumpdests_poisoned = false;
  while (!work.empty()) {
    deadline.check();
    std::uint32_t bid = work.front();
    work.pop_front();
    queued[bid] = false;
    CfgBlock& b = cfg.blocks[bid];
    std::vector<std::optional<Word>> entry =
        b.opaque_entry ? std::vector<std::optional<Word>>{} : b.entry_stack;
    auto exit = detail::abstract_run(cfg, b, std::move(entry));
    if (exit.halted) continue;  // aborts in-block: no successors

    // An opaque entry taints everything flowing out of the block: the exit
    // stack's height is unknown even where its top values are not.
    bool out_opaque = b.opaque_entry;
    std::uint8_t last = cfg.instructions[b.end - 1].op;
    auto propagate = [&](std::uint32_t to) {
      add_edge(bid, to);
      if (join_entry(to, exit.stack, out_opaque)) enqueue(to);
    };
    if (last == OP_JUMP || last == OP_JUMPI) {
      if (exit.jump_target) {
        // A constant target that is not a JUMPDEST aborts execution: no edge.
        if (auto t = target_block(*exit.jump_target)) propagate(*t);
      } else {
        b.unresolved_jump = true;
        cfg.imprecise = true;
        if (!jumpdests_poisoned) {
          jumpdests_poisoned = true;
          for (std::uint32_t t : cfg.jumpdest_blocks)
            if (join_entry(t, {}, true)) enqueue(t);
        }
      }
      if (last == OP_JUMPI && b.end < cfg.instructions.size()) propagate(bid + 1);
    } else if (!is_terminator(last) && b.end < cfg.instructions.size()) {
      propagate(bid + 1);  // fallthrough into the next block
    }
  }
  return cfg;
}

}  // namespace storlift
