#pragma once

// Register-based SSA program representation shared by the native frontend
// and the fact importer, plus the PHI-transitive-closure helper used by the
// storage analyses.

#include "storlift/opcode.hpp"
#include "storlift/word.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace storlift {

using VarId = std::uint32_t;
using StmtId = std::uint32_t;
inline constexpr VarId kNoVar = std::numeric_limits<VarId>::max();
inline constexpr StmtId kNoStmt = std::numeric_limits<StmtId>::max();

struct IrStatement {
  std::uint16_t op = OP_UNDEF;
  VarId def = kNoVar;
  std::vector<VarId> uses;
  std::uint32_t pc = 0;        // native frontend only
  std::uint32_t block = 0;     // native frontend only
  bool dead = false;           // tombstone from PHI pruning
};

// Per-basic-block view of the lifted program (native frontend only; a
// fact-imported program has no control-flow structure).
struct ProgramBlock {
  std::uint32_t entry_pc = 0;
  std::vector<StmtId> stmts;
  std::vector<std::uint32_t> succs;
  std::vector<std::uint32_t> preds;
  bool reachable = false;
  bool opaque_entry = false;        // reached via an unresolved dynamic jump
  bool unanalyzable = false;        // stack underflow; excluded from facts
  bool starts_at_jumpdest = false;  // a possible target of unresolved jumps
};

// A recognized keccak256 of storage-shaped input: two-word hashes carry
// args = [key, slot], one-word hashes args = [slot].
struct HashFact {
  StmtId stmt = kNoStmt;
  VarId result = kNoVar;
  std::vector<VarId> args;
};

struct Program {
  std::vector<IrStatement> stmts;
  std::vector<std::string> stmt_names;          // sparse; fact-file identifiers
  std::vector<std::string> var_names;
  std::vector<std::optional<Word>> var_const;   // the VarValue relation
  std::vector<StmtId> var_def;                  // kNoStmt for undefined operands
  std::vector<std::vector<StmtId>> var_uses;    // rebuilt by rebuild_uses()

  bool has_cfg = false;
  bool cfg_imprecise = false;  // some dynamic jump never resolved
  std::vector<ProgramBlock> blocks;

  // Statements in underflowing blocks are kept for structure but must not
  // contribute facts to any downstream analysis.
  bool stmt_excluded(StmtId s) const {
    return has_cfg && blocks[stmts[s].block].unanalyzable;
  }

  VarId add_var(std::string name) {
    var_names.push_back(std::move(name));
    var_const.emplace_back();
    var_def.push_back(kNoStmt);
    var_uses.emplace_back();
    return static_cast<VarId>(var_names.size() - 1);
  }

  VarId add_var() { return add_var("v" + std::to_string(var_names.size())); }

  StmtId add_stmt(std::uint16_t op, std::vector<VarId> uses, VarId def,
                  std::uint32_t pc = 0, std::uint32_t block = 0) {
    IrStatement s;
    s.op = op;
    s.uses = std::move(uses);
    s.def = def;
    s.pc = pc;
    s.block = block;
    stmts.push_back(std::move(s));
    StmtId id = static_cast<StmtId>(stmts.size() - 1);
    if (def != kNoVar) var_def[def] = id;
    return id;
  }

  std::string stmt_name(StmtId s) const {
    if (s < stmt_names.size() && !stmt_names[s].empty()) return stmt_names[s];
    return "s" + std::to_string(s);
  }

  std::size_t live_stmt_count() const {
    std::size_t n = 0;
    for (const auto& s : stmts)
      if (!s.dead) ++n;
    return n;
  }

  bool is_phi_def(VarId v) const {
    return var_def[v] != kNoStmt && stmts[var_def[v]].op == OP_PHI;
  }

  void rebuild_uses() {
    for (auto& u : var_uses) u.clear();
    var_uses.resize(var_names.size());
    for (StmtId i = 0; i < stmts.size(); ++i) {
      if (stmts[i].dead) continue;
      for (VarId v : stmts[i].uses) var_uses[v].push_back(i);
    }
  }
};

// phi_sources(v): the non-PHI-defined variables whose values can flow into v
// through chains of PHI copies. A variable not defined by a PHI is its own
// only source. Cyclic PHI webs terminate through the visited set.
class PhiClosure {
 public:
  explicit PhiClosure(const Program& p) : p_(p) {}

  const std::vector<VarId>& sources(VarId v) {
    auto it = memo_.find(v);
    if (it != memo_.end()) return it->second;
    std::vector<VarId> out;
    std::vector<bool> seen(p_.var_names.size(), false);
    std::vector<VarId> stack{v};
    seen[v] = true;
    while (!stack.empty()) {
      VarId cur = stack.back();
      stack.pop_back();
      if (!p_.is_phi_def(cur)) {
        out.push_back(cur);
        continue;
      }
      for (VarId u : p_.stmts[p_.var_def[cur]].uses) {
        if (!seen[u]) {
          seen[u] = true;
          stack.push_back(u);
        }
      }
    }
    return memo_.emplace(v, std::move(out)).first->second;
  }

 private:
  const Program& p_;
  std::unordered_map<VarId, std::vector<VarId>> memo_;
};

}  // namespace storlift
