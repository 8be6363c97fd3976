#pragma once

// Phase B of the frontend: lift the stack machine onto SSA registers using
// the entry heights and resolved edges from build_cfg, then fold constants.
//
// Merge blocks get one PHI per abstract entry slot, filled in after every
// block's exit stack is known; trivially redundant PHIs are pruned to a
// fixpoint afterwards. Blocks reachable only through unresolved jumps start
// from an opaque stack: operands below the entry materialize as fresh UNDEF
// variables instead of PHIs. A block that pops below an exactly-known entry
// height is a genuine stack underflow: it is kept but marked unanalyzable,
// and every downstream consumer skips its statements.

#include "storlift/cfg.hpp"
#include "storlift/errors.hpp"
#include "storlift/ir.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <vector>

namespace storlift {

inline Program lift_to_ssa(const Cfg& cfg, const Deadline& deadline = {}) {
  Program p;
  p.has_cfg = true;
  p.cfg_imprecise = cfg.imprecise;
  p.blocks.resize(cfg.blocks.size());

  std::vector<std::vector<VarId>> exit_stacks(cfg.blocks.size());
  // PHI defs per merge block, bottom first, paired with their stmt ids.
  std::vector<std::vector<StmtId>> phi_stmts(cfg.blocks.size());

  // Mirror the structural CFG first.
  for (std::uint32_t b = 0; b < cfg.blocks.size(); ++b) {
    auto& pb = p.blocks[b];
    pb.entry_pc = cfg.instructions.empty() ? 0 : cfg.instructions[cfg.blocks[b].first].pc;
    pb.succs = cfg.blocks[b].succs;
    pb.reachable = cfg.blocks[b].reachable;
    pb.opaque_entry = cfg.blocks[b].opaque_entry;
    pb.starts_at_jumpdest = cfg.blocks[b].starts_at_jumpdest;
    for (std::uint32_t s : pb.succs) p.blocks[s].preds.push_back(b);
  }

  // Reverse postorder over resolved edges so that every reachable
  // single-predecessor block is processed after its predecessor.
  std::vector<std::uint32_t> rpo;
  {
    std::vector<int> state(cfg.blocks.size(), 0);
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0u, 0u}};
    state[0] = 1;
    while (!stack.empty()) {
      auto& [b, i] = stack.back();
      if (i < p.blocks[b].succs.size()) {
        std::uint32_t s = p.blocks[b].succs[i++];
        if (state[s] == 0) {
          state[s] = 1;
          stack.push_back({s, 0});
        }
      } else {
        rpo.push_back(b);
        stack.pop_back();
      }
    }
    std::reverse(rpo.begin(), rpo.end());
    // Opaque-entry blocks may be reachable only through unresolved jumps
    // (no recorded edge): append any reachable block the DFS missed.
    std::vector<bool> seen(cfg.blocks.size(), false);
    for (std::uint32_t b : rpo) seen[b] = true;
    for (std::uint32_t b = 0; b < cfg.blocks.size(); ++b)
      if (!seen[b] && cfg.blocks[b].reachable) rpo.push_back(b);
  }

  // Pre-create PHIs for every reachable non-opaque merge block.
  for (std::uint32_t b : rpo) {
    const CfgBlock& cb = cfg.blocks[b];
    if (cb.opaque_entry || p.blocks[b].preds.size() < 2) continue;
    for (std::size_t slot = 0; slot < cb.entry_stack.size(); ++slot) {
      VarId v = p.add_var();
      StmtId s = p.add_stmt(OP_PHI, {}, v, p.blocks[b].entry_pc, b);
      p.blocks[b].stmts.push_back(s);
      phi_stmts[b].push_back(s);
    }
  }

  // Simulate each block over variable ids.
  for (std::uint32_t b : rpo) {
    deadline.check();
    const CfgBlock& cb = cfg.blocks[b];
    auto& pb = p.blocks[b];
    std::vector<VarId> stack;
    if (cb.opaque_entry || p.blocks[b].preds.empty()) {
      // entry block or opaque: start empty, borrow below
    } else if (p.blocks[b].preds.size() == 1) {
      const auto& pred_exit = exit_stacks[p.blocks[b].preds[0]];
      std::size_t h = cb.entry_stack.size();
      stack.assign(pred_exit.end() - std::min(h, pred_exit.size()), pred_exit.end());
    } else {
      for (StmtId s : phi_stmts[b]) stack.push_back(p.stmts[s].def);
    }

    bool exact_height = !cb.opaque_entry && !cb.height_mismatch;
    auto borrow = [&]() {
      VarId v = p.add_var();
      p.add_stmt(OP_UNDEF, {}, v, pb.entry_pc, b);
      // UNDEF defs need no position in the block's statement order, but they
      // must still be registered for index rebuilds.
      pb.stmts.push_back(static_cast<StmtId>(p.stmts.size() - 1));
      stack.insert(stack.begin(), v);
      if (exact_height) pb.unanalyzable = true;
      return v;
    };
    auto ensure = [&](std::size_t depth) {
      while (stack.size() < depth) borrow();
    };
    auto pop = [&]() {
      ensure(1);
      VarId v = stack.back();
      stack.pop_back();
      return v;
    };
    auto emit = [&](std::uint16_t op, std::vector<VarId> uses, bool defs,
                    std::uint32_t pc) -> VarId {
      VarId def = defs ? p.add_var() : kNoVar;
      StmtId s = p.add_stmt(op, std::move(uses), def, pc, b);
      pb.stmts.push_back(s);
      return def;
    };

    for (std::uint32_t i = cb.first; i < cb.end; ++i) {
      const Instruction& ins = cfg.instructions[i];
      std::uint8_t op = ins.op;
      if (is_push(op) || op == OP_PUSH0) {
        VarId v = emit(OP_CONST, {}, true, ins.pc);
        p.var_const[v] = is_push(op) ? ins.imm : Word(0);
        stack.push_back(v);
      } else if (is_dup(op)) {
        unsigned n = op - OP_DUP1 + 1;
        ensure(n);
        stack.push_back(stack[stack.size() - n]);
      } else if (is_swap(op)) {
        unsigned n = op - OP_SWAP1 + 1;
        ensure(n + 1);
        std::swap(stack.back(), stack[stack.size() - 1 - n]);
      } else if (op == OP_POP) {
        pop();
      } else if (op == OP_JUMPDEST) {
        // no statement
      } else if (!op_defined(op)) {
        break;  // undefined opcode: rest of the block is unreachable
      } else {
        const OpInfo& info = op_info(op);
        std::vector<VarId> uses;
        uses.reserve(info.pops);
        for (unsigned k = 0; k < info.pops; ++k) uses.push_back(pop());
        VarId def = emit(op, std::move(uses), info.pushes == 1, ins.pc);
        if (info.pushes == 1) stack.push_back(def);
        if (stack.size() > kEvmStackLimit) break;
      }
    }
    exit_stacks[b] = std::move(stack);
  }

  // Fill PHI uses from predecessor exit stacks, top-aligned.
  for (std::uint32_t b = 0; b < cfg.blocks.size(); ++b) {
    if (phi_stmts[b].empty()) continue;
    std::size_t h = phi_stmts[b].size();
    for (std::uint32_t pred : p.blocks[b].preds) {
      const auto& pe = exit_stacks[pred];
      for (std::size_t slot = 0; slot < h; ++slot) {
        // slot 0 is the bottom of the entry stack (depth h-1 from the top)
        std::size_t from_top = h - 1 - slot;
        VarId u;
        if (from_top < pe.size()) {
          u = pe[pe.size() - 1 - from_top];
        } else {
          // Predecessor's exit was shorter than the merged height (it was
          // itself truncated); feed an explicit undefined value.
          u = p.add_var();
          p.add_stmt(OP_UNDEF, {}, u, p.blocks[pred].entry_pc, pred);
          p.blocks[pred].stmts.push_back(static_cast<StmtId>(p.stmts.size() - 1));
        }
        p.stmts[phi_stmts[b][slot]].uses.push_back(u);
      }
    }
  }

  // Prune trivial PHIs (all non-self uses identical) to a fixpoint.
  {
    std::vector<VarId> alias(p.var_names.size());
    for (VarId v = 0; v < alias.size(); ++v) alias[v] = v;
    auto resolve = [&](VarId v) {
      while (alias[v] != v) v = alias[v] = alias[alias[v]];
      return v;
    };
    bool changed = true;
    while (changed) {
      deadline.check();
      changed = false;
      for (auto& s : p.stmts) {
        if (s.op != OP_PHI || s.dead) continue;
        VarId self = resolve(s.def);
        VarId unique = kNoVar;
        bool trivial = true;
        for (VarId u : s.uses) {
          VarId r = resolve(u);
          if (r == self) continue;
          if (unique == kNoVar) unique = r;
          else if (unique != r) {
            trivial = false;
            break;
          }
        }
        if (trivial && unique != kNoVar) {
          alias[self] = unique;
          s.dead = true;
          changed = true;
        }
      }
    }
    for (auto& s : p.stmts) {
      if (s.dead) continue;
      for (auto& u : s.uses) u = resolve(u);
    }
  }

  p.rebuild_uses();
  return p;
}

// Flow-insensitive constant folding to a fixpoint: CONST statements seed,
// the listed pure operators evaluate when all operands are constant, PHIs
// fold only when every input agrees.
inline bool fold_constants(Program& p, const Deadline& deadline = {}) {
  std::deque<StmtId> work;
  std::vector<bool> queued(p.stmts.size(), false);
  auto enqueue_uses_of = [&](VarId v) {
    for (StmtId s : p.var_uses[v])
      if (!queued[s]) {
        queued[s] = true;
        work.push_back(s);
      }
  };
  bool any = false;
  for (StmtId i = 0; i < p.stmts.size(); ++i) {
    const auto& s = p.stmts[i];
    if (!s.dead && s.def != kNoVar && p.var_const[s.def]) enqueue_uses_of(s.def);
    // Imported programs can carry constants on def-less variables too.
  }
  for (VarId v = 0; v < p.var_names.size(); ++v)
    if (p.var_const[v] && p.var_def[v] == kNoStmt) enqueue_uses_of(v);

  auto fold_stmt = [&](const IrStatement& s) -> std::optional<Word> {
    auto c = [&](std::size_t i) -> const std::optional<Word>& { return p.var_const[s.uses[i]]; };
    if (s.op == OP_PHI) {
      if (s.uses.empty()) return std::nullopt;
      auto first = c(0);
      if (!first) return std::nullopt;
      for (std::size_t i = 1; i < s.uses.size(); ++i)
        if (!c(i) || *c(i) != *first) return std::nullopt;
      return first;
    }
    if (s.op == OP_NOT) return c(0) ? std::optional<Word>(evm_not(*c(0))) : std::nullopt;
    if (s.uses.size() != 2 || !c(0) || !c(1)) return std::nullopt;
    const Word &a = *c(0), &b = *c(1);  // a = top of stack (first popped)
    switch (s.op) {
      case OP_ADD: return a + b;
      case OP_SUB: return a - b;
      case OP_MUL: return a * b;
      case OP_DIV: return evm_div(a, b);
      case OP_EXP: return evm_exp(a, b);
      case OP_SHL: return evm_shl(a, b);
      case OP_SHR: return evm_shr(a, b);
      case OP_AND: return a & b;
      case OP_OR: return a | b;
      case OP_XOR: return a ^ b;
      default: return std::nullopt;
    }
  };

  while (!work.empty()) {
    deadline.check();
    StmtId sid = work.front();
    work.pop_front();
    queued[sid] = false;
    const auto& s = p.stmts[sid];
    if (s.dead || s.def == kNoVar || p.var_const[s.def]) continue;
    if (auto v = fold_stmt(s)) {
      p.var_const[s.def] = *v;
      any = true;
      enqueue_uses_of(s.def);
    }
  }
  return any;
}

}  // namespace storlift
