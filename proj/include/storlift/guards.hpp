#pragma once

// Mutex-variable detection. A storage leaf acts as a reentrancy guard when
// a load of it is compared against a constant that gates a revert, the
// surviving path overwrites the leaf with a different constant (lock), and
// some later path restores the compared constant (unlock):
//
//   require(status == UNLOCKED);   // check: revert unless A
//   status = LOCKED;               // lock: B != A
//   ...
//   status = UNLOCKED;             // unlock: A again
//
// Both constant conventions are recognized: false/true (0/1) and the
// pre-set uint encoding (1/2). Guards living in packed slots are handled
// by normalizing stored and compared constants into the cell's own frame.

#include "storlift/constructs.hpp"
#include "storlift/ir.hpp"
#include "storlift/word.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace storlift {

struct GuardReport {
  CId guard_var = kNoConstruct;
  StmtId check_stmt = kNoStmt;   // the gating load
  StmtId lock_stmt = kNoStmt;    // store of the locked value
  StmtId unlock_stmt = kNoStmt;  // store restoring the unlocked value
  Word locked_value = 0;
  Word unlocked_value = 0;

  bool operator==(const GuardReport&) const = default;
};

namespace detail {

inline constexpr std::uint32_t kNoBlock =
    std::numeric_limits<std::uint32_t>::max();

// Immediate dominators over reachable blocks, entry = block 0.
struct Dominators {
  std::vector<std::uint32_t> idom;
  std::vector<std::uint32_t> rpo_index;

  explicit Dominators(const Program& p)
      : idom(p.blocks.size(), kNoBlock), rpo_index(p.blocks.size(), kNoBlock) {
    if (p.blocks.empty()) return;
    // iterative DFS post-order from the entry, reversed
    std::vector<std::uint32_t> order;
    std::vector<std::uint8_t> state(p.blocks.size(), 0);
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
    state[0] = 1;
    while (!stack.empty()) {
      auto& [b, next] = stack.back();
      const auto& succs = p.blocks[b].succs;
      if (next < succs.size()) {
        std::uint32_t s = succs[next++];
        if (s < p.blocks.size() && !state[s]) {
          state[s] = 1;
          stack.emplace_back(s, 0);
        }
      } else {
        order.push_back(b);
        stack.pop_back();
      }
    }
    std::reverse(order.begin(), order.end());
    for (std::uint32_t i = 0; i < order.size(); ++i) rpo_index[order[i]] = i;

    idom[0] = 0;
    auto intersect = [&](std::uint32_t a, std::uint32_t b) {
      while (a != b) {
        while (rpo_index[a] > rpo_index[b]) a = idom[a];
        while (rpo_index[b] > rpo_index[a]) b = idom[b];
      }
      return a;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t b : order) {
        if (b == 0) continue;
        std::uint32_t best = kNoBlock;
        for (std::uint32_t pr : p.blocks[b].preds) {
          if (pr >= idom.size() || idom[pr] == kNoBlock) continue;
          best = best == kNoBlock ? pr : intersect(best, pr);
        }
        if (best != kNoBlock && idom[b] != best) {
          idom[b] = best;
          changed = true;
        }
      }
    }
  }

  bool dominates(std::uint32_t a, std::uint32_t b) const {
    if (a >= idom.size() || b >= idom.size()) return false;
    if (idom[b] == kNoBlock || idom[a] == kNoBlock) return false;
    while (true) {
      if (a == b) return true;
      if (b == 0) return false;
      b = idom[b];
    }
  }
};

inline Word cell_mask_of(unsigned width_bytes) {
  if (width_bytes >= 32) return evm_not(Word(0));
  return (Word(1) << (8 * width_bytes)) - 1;
}

// Shift a constant into the cell's own frame: `pos` is the bit index the
// cell's low byte occupies in the value the constant was compared against
// or stored as.
inline Word cell_frame(const Word& c, int pos, const Word& mask) {
  if (pos >= 256 || pos <= -256) return 0;
  Word x = pos >= 0 ? Word(c >> pos) : Word(c << -pos);
  return x & mask;
}

}  // namespace detail

// Detect guard variables. Requires lifted control flow: without blocks no
// revert gating can be established, so fact-imported programs yield none.
inline std::vector<GuardReport> detect_guards(const Program& p,
                                              const StmtToVar& stv,
                                              const Constructs& cons) {
  std::vector<GuardReport> out;
  if (!p.has_cfg || p.blocks.empty()) return out;
  detail::Dominators doms(p);

  // per-leaf loads and constant stores (store values in cell frame)
  std::map<CId, std::vector<StmtId>> loads;
  std::map<CId, std::vector<std::pair<StmtId, Word>>> stores;

  auto leaf_geometry = [&](CId leaf) {
    const ConTerm& t = cons.arena.term(leaf);
    unsigned lo = t.kind == ConKind::Packed ? t.lo : 0;
    unsigned hi = t.kind == ConKind::Packed ? t.hi : 31;
    return std::pair<unsigned, unsigned>(lo, hi);
  };

  // The constant a store writes into the leaf's cell, if recognizable:
  // a folded constant value, a read-modify-write inserting a constant, or
  // a mask-only clear of the cell.
  auto stored_cell_const = [&](StmtId store, CId leaf,
                               unsigned lo, const Word& mask)
      -> std::optional<Word> {
    VarId value = p.stmts[store].uses[1];
    if (p.var_const[value])
      return detail::cell_frame(*p.var_const[value], int(8 * lo), mask);
    StmtId def = p.var_def[value];
    if (def == kNoStmt) return std::nullopt;
    const IrStatement& ds = p.stmts[def];
    auto is_load_of_leaf = [&](VarId v) {
      StmtId d = p.var_def[v];
      if (d == kNoStmt || p.stmts[d].op != OP_SLOAD) return false;
      auto it = stv.map.find(d);
      return it != stv.map.end() &&
             std::find(it->second.begin(), it->second.end(), leaf) !=
                 it->second.end();
    };
    // keep side: load of the same leaf, possibly under a clearing mask
    auto is_keep_side = [&](VarId v) {
      if (is_load_of_leaf(v)) return true;
      StmtId d = p.var_def[v];
      if (d == kNoStmt || p.stmts[d].op != OP_AND) return false;
      const auto& uses = p.stmts[d].uses;
      if (p.var_const[uses[0]] && is_load_of_leaf(uses[1])) return true;
      if (p.var_const[uses[1]] && is_load_of_leaf(uses[0])) return true;
      return false;
    };
    if (ds.op == OP_OR) {
      for (int side = 0; side < 2; ++side) {
        VarId ins = ds.uses[side];
        VarId keep = ds.uses[1 - side];
        if (p.var_const[ins] && is_keep_side(keep))
          return detail::cell_frame(*p.var_const[ins], int(8 * lo), mask);
      }
      return std::nullopt;
    }
    if (ds.op == OP_AND) {
      // mask-only write: the cell is cleared to zero
      for (int side = 0; side < 2; ++side) {
        VarId c = ds.uses[side];
        VarId rest = ds.uses[1 - side];
        if (p.var_const[c] && is_load_of_leaf(rest) &&
            detail::cell_frame(*p.var_const[c], int(8 * lo), mask) == 0)
          return Word(0);
      }
    }
    return std::nullopt;
  };

  for (const auto& [stmt, leaves] : stv.map) {
    const IrStatement& s = p.stmts[stmt];
    if (s.op == OP_SLOAD) {
      for (CId leaf : leaves) loads[leaf].push_back(stmt);
      continue;
    }
    for (CId leaf : leaves) {
      auto [lo, hi] = leaf_geometry(leaf);
      Word mask = detail::cell_mask_of(hi - lo + 1);
      if (auto c = stored_cell_const(stmt, leaf, lo, mask))
        stores[leaf].emplace_back(stmt, *c);
    }
  }

  // comparisons a load feeds: compared constant (cell frame) plus the block
  // of the JUMPI the comparison result reaches
  struct Candidate {
    Word compared = 0;
    std::uint32_t jumpi_block = detail::kNoBlock;
    StmtId jumpi = kNoStmt;
  };

  auto jumpi_blocks_of = [&](VarId cmp) {
    std::vector<std::pair<std::uint32_t, StmtId>> blocks;
    std::set<VarId> seen;
    std::vector<VarId> work{cmp};
    while (!work.empty()) {
      VarId v = work.back();
      work.pop_back();
      if (!seen.insert(v).second) continue;
      if (seen.size() > 64) break;
      for (StmtId u : p.var_uses[v]) {
        const IrStatement& us = p.stmts[u];
        if (us.op == OP_JUMPI && us.uses.size() == 2 && us.uses[1] == v)
          blocks.emplace_back(us.block, u);
        else if (us.op == OP_ISZERO)
          work.push_back(us.def);
      }
    }
    return blocks;
  };

  auto candidates_of = [&](StmtId load, CId leaf) {
    std::vector<Candidate> cands;
    auto [lo, hi] = leaf_geometry(leaf);
    Word mask = detail::cell_mask_of(hi - lo + 1);
    struct Item {
      VarId v;
      int pos;
    };
    std::vector<Item> work{{p.stmts[load].def, int(8 * lo)}};
    std::set<VarId> seen;
    while (!work.empty()) {
      auto [v, pos] = work.back();
      work.pop_back();
      if (!seen.insert(v).second) continue;
      for (StmtId u : p.var_uses[v]) {
        const IrStatement& us = p.stmts[u];
        switch (us.op) {
          case OP_AND:
            work.push_back({us.def, pos});
            break;
          case OP_SHR:
            if (us.uses[1] == v && p.var_const[us.uses[0]] &&
                *p.var_const[us.uses[0]] < 256)
              work.push_back(
                  {us.def, pos - int(p.var_const[us.uses[0]]->convert_to<unsigned>())});
            break;
          case OP_SHL:
            if (us.uses[1] == v && p.var_const[us.uses[0]] &&
                *p.var_const[us.uses[0]] < 256)
              work.push_back(
                  {us.def, pos + int(p.var_const[us.uses[0]]->convert_to<unsigned>())});
            break;
          case OP_EQ: {
            VarId other = us.uses[0] == v ? us.uses[1] : us.uses[0];
            if (p.var_const[other])
              for (auto [blk, js] : jumpi_blocks_of(us.def))
                cands.push_back(
                    {detail::cell_frame(*p.var_const[other], pos, mask), blk,
                     js});
            break;
          }
          case OP_ISZERO:
            for (auto [blk, js] : jumpi_blocks_of(us.def))
              cands.push_back({Word(0), blk, js});
            break;
          default:
            break;
        }
      }
    }
    return cands;
  };

  auto has_reverting_successor = [&](std::uint32_t blk) {
    if (blk >= p.blocks.size()) return false;
    for (std::uint32_t s : p.blocks[blk].succs) {
      if (s >= p.blocks.size()) continue;
      for (StmtId st : p.blocks[s].stmts) {
        std::uint16_t op = p.stmts[st].op;
        if (op == OP_REVERT || op == OP_INVALID) return true;
      }
    }
    return false;
  };

  auto reaches = [&](std::uint32_t from, std::uint32_t to) {
    std::set<std::uint32_t> seen;
    std::vector<std::uint32_t> work(p.blocks[from].succs.begin(),
                                    p.blocks[from].succs.end());
    while (!work.empty()) {
      std::uint32_t b = work.back();
      work.pop_back();
      if (b >= p.blocks.size() || !seen.insert(b).second) continue;
      if (b == to) return true;
      for (std::uint32_t s : p.blocks[b].succs) work.push_back(s);
    }
    return false;
  };

  // one report per guard leaf: the smallest qualifying triple
  for (const auto& [leaf, leaf_loads] : loads) {
    auto sit = stores.find(leaf);
    if (sit == stores.end()) continue;
    auto leaf_stores = sit->second;
    std::sort(leaf_stores.begin(), leaf_stores.end());

    std::optional<GuardReport> found;
    for (StmtId load : leaf_loads) {
      if (found) break;
      for (const Candidate& cand : candidates_of(load, leaf)) {
        if (found) break;
        if (!has_reverting_successor(cand.jumpi_block)) continue;
        for (const auto& [lock, locked] : leaf_stores) {
          if (found) break;
          if (locked == cand.compared) continue;
          if (!doms.dominates(cand.jumpi_block, p.stmts[lock].block)) continue;
          for (const auto& [unlock, restored] : leaf_stores) {
            if (restored != cand.compared || unlock == lock) continue;
            std::uint32_t lb = p.stmts[lock].block;
            std::uint32_t ub = p.stmts[unlock].block;
            bool after = lb == ub ? unlock > lock : reaches(lb, ub);
            if (!after) continue;
            found = GuardReport{leaf, load, lock, unlock, locked, restored};
            break;
          }
        }
      }
    }
    if (found) out.push_back(*found);
  }
  return out;
}

inline nlohmann::ordered_json guards_to_json(
    const std::vector<GuardReport>& reports, const Constructs& cons) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& g : reports) {
    nlohmann::ordered_json jg;
    jg["guardVar"] = dump_construct(cons.arena, g.guard_var);
    jg["checkStmt"] = g.check_stmt;
    jg["lockStmt"] = g.lock_stmt;
    jg["unlockStmt"] = g.unlock_stmt;
    jg["lockedValue"] = to_dec(g.locked_value);
    jg["unlockedValue"] = to_dec(g.unlocked_value);
    doc.push_back(std::move(jg));
  }
  return doc;
}

}  // namespace storlift
