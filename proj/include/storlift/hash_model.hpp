#pragma once

// Recovers keccak256 slot-derivation from the compiler's scratch-space
// hashing idiom: the 32-byte words fed to SHA3 are located by scanning
// backward from the SHA3 for the stores that define them, conservatively
// giving up on anything that might clobber the hashed region.
//
//   MSTORE(0x0, k); MSTORE(0x20, slot); r := SHA3(0x0, 0x40)   -> HASH(k, slot) = r
//   MSTORE(0x0, slot);                  r := SHA3(0x0, 0x20)   -> HASH(slot)    = r
//
// The same backward scan also folds MLOADs of locally-stored constants
// (notably the free-memory pointer at 0x40), so SHA3 offsets expressed
// through the pointer still fold to constants.

#include "storlift/errors.hpp"
#include "storlift/ir.hpp"
#include "storlift/lifter.hpp"
#include "storlift/opcode.hpp"
#include "storlift/word.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace storlift {

namespace detail {

// One memory-affecting statement, as seen by the backward scan.
struct MemEvent {
  enum class Kind { None, Store, ClobberAll } kind = Kind::None;
  std::optional<Word> addr;  // empty = unresolved address
  unsigned width = 0;        // bytes written (32 or 1)
  VarId value = kNoVar;
};

inline MemEvent classify_mem(const Program& p, const IrStatement& s) {
  switch (s.op) {
    case OP_MSTORE:
      return {MemEvent::Kind::Store, p.var_const[s.uses[0]], 32, s.uses[1]};
    case OP_MSTORE8:
      return {MemEvent::Kind::Store, p.var_const[s.uses[0]], 1, s.uses[1]};
    case OP_MCOPY:
    case OP_CALLDATACOPY:
    case OP_CODECOPY:
    case OP_EXTCODECOPY:
    case OP_RETURNDATACOPY:
    case OP_CALL:
    case OP_CALLCODE:
    case OP_DELEGATECALL:
    case OP_STATICCALL:
      return {MemEvent::Kind::ClobberAll, std::nullopt, 0, kNoVar};
    default:
      return {};
  }
}

// Addresses this large cannot belong to real memory traffic; refusing them
// keeps the wrap-around-free overlap arithmetic below honest.
inline bool plausible_addr(const Word& a) { return a < (Word(1) << 64); }

inline bool regions_overlap(const Word& a, unsigned aw, const Word& b,
                            unsigned bw) {
  return a < b + bw && b < a + aw;
}

// Iterates statements strictly before a starting point, walking back through
// unique predecessors. When any jump target is unresolved, blocks that start
// at a JUMPDEST may have unknown extra predecessors, so the walk refuses to
// extend past their entry.
class BackwardScan {
 public:
  BackwardScan(const Program& p, std::uint32_t block, std::size_t index,
               const Deadline& deadline)
      : p_(p), deadline_(deadline), block_(block), index_(index) {
    visited_.insert(block);
  }

  // Yields the previous live statement, or kNoStmt when the walk ends.
  StmtId next() {
    while (true) {
      if ((++steps_ & 0xff) == 0) deadline_.check();
      while (index_ == 0) {
        if (!can_extend(block_)) return kNoStmt;
        std::uint32_t pred = p_.blocks[block_].preds[0];
        if (!visited_.insert(pred).second) return kNoStmt;
        block_ = pred;
        index_ = p_.blocks[pred].stmts.size();
      }
      StmtId s = p_.blocks[block_].stmts[--index_];
      if (!p_.stmts[s].dead) return s;
    }
  }

 private:
  bool can_extend(std::uint32_t b) const {
    const auto& blk = p_.blocks[b];
    if (blk.preds.size() != 1) return false;
    if (p_.cfg_imprecise && blk.starts_at_jumpdest) return false;
    return true;
  }

  const Program& p_;
  const Deadline& deadline_;
  std::uint32_t block_;
  std::size_t index_;
  std::set<std::uint32_t> visited_;
  std::size_t steps_ = 0;
};

// Finds the variables stored to each 32-byte word of [base, base+32*n) as of
// the scan start, or nothing if any store in range is unresolved/misaligned.
inline std::optional<std::vector<VarId>> scan_stored_words(
    const Program& p, std::uint32_t block, std::size_t index, const Word& base,
    unsigned nwords, const Deadline& deadline) {
  if (!plausible_addr(base)) return std::nullopt;
  std::vector<VarId> found(nwords, kNoVar);
  unsigned remaining = nwords;
  BackwardScan scan(p, block, index, deadline);
  for (StmtId s = scan.next(); s != kNoStmt; s = scan.next()) {
    MemEvent e = classify_mem(p, p.stmts[s]);
    if (e.kind == MemEvent::Kind::None) continue;
    if (e.kind == MemEvent::Kind::ClobberAll) return std::nullopt;
    if (!e.addr || !plausible_addr(*e.addr)) return std::nullopt;
    for (unsigned i = 0; i < nwords; ++i) {
      Word wi = base + 32 * i;
      if (!regions_overlap(*e.addr, e.width, wi, 32)) continue;
      if (found[i] != kNoVar) continue;  // shadowed by a later store
      if (e.width != 32 || *e.addr != wi) return std::nullopt;
      found[i] = e.value;
      --remaining;
    }
    if (remaining == 0) return found;
  }
  return std::nullopt;
}

}  // namespace detail

// Folds MLOADs whose address and (transitively) stored value are constant,
// e.g. reads of the free-memory pointer. Returns whether anything changed.
inline bool fold_memory_loads(Program& p, const Deadline& deadline = {}) {
  if (!p.has_cfg) return false;
  bool changed = false;
  for (const auto& blk : p.blocks) {
    if (!blk.reachable || blk.unanalyzable) continue;
    for (std::size_t i = 0; i < blk.stmts.size(); ++i) {
      const auto& s = p.stmts[blk.stmts[i]];
      if (s.dead || s.op != OP_MLOAD || s.def == kNoVar) continue;
      if (p.var_const[s.def]) continue;
      const auto& addr = p.var_const[s.uses[0]];
      if (!addr) continue;
      auto words = detail::scan_stored_words(p, s.block, i, *addr, 1, deadline);
      if (!words) continue;
      const auto& stored = p.var_const[(*words)[0]];
      if (!stored) continue;
      p.var_const[s.def] = *stored;
      changed = true;
    }
  }
  return changed;
}

// Constant folding to a joint fixpoint of the register and memory passes.
inline void fold_all(Program& p, const Deadline& deadline = {}) {
  fold_constants(p, deadline);
  while (fold_memory_loads(p, deadline)) fold_constants(p, deadline);
}

// Emits a HashFact for every SHA3 of a fully-resolved one- or two-word
// region. Two-word facts carry [key, slot], one-word facts [slot]. Anything
// ambiguous is skipped: a missed hash costs recall downstream, a wrong one
// would cost precision.
inline std::vector<HashFact> detect_hashes(const Program& p,
                                           const Deadline& deadline = {}) {
  std::vector<HashFact> out;
  if (!p.has_cfg) return out;
  for (const auto& blk : p.blocks) {
    if (!blk.reachable || blk.unanalyzable) continue;
    for (std::size_t i = 0; i < blk.stmts.size(); ++i) {
      StmtId id = blk.stmts[i];
      const auto& s = p.stmts[id];
      if (s.dead || s.op != OP_SHA3 || s.def == kNoVar) continue;
      const auto& off = p.var_const[s.uses[0]];
      const auto& len = p.var_const[s.uses[1]];
      if (!off || !len || (*len != 0x20 && *len != 0x40)) continue;
      unsigned nwords = *len == 0x40 ? 2 : 1;
      auto words =
          detail::scan_stored_words(p, s.block, i, *off, nwords, deadline);
      if (!words) continue;
      out.push_back({id, s.def, std::move(*words)});
    }
  }
  return out;
}

}  // namespace storlift
