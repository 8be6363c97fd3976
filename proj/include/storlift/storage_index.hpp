#pragma once

// Storage-index recovery. Phase one over-approximates which symbolic index
// expressions every variable may hold (constants, mapping hashes, array data
// starts, array element arithmetic, struct-field offsets); phase two keeps
// only expressions that actually reach an SLOAD/SSTORE, directly or through
// PHI merges, and closes that set over parents.
//
// Index terms never grow through a PHI: a PHI-defined variable holds no
// terms of its own, which keeps the fixpoint finite even for loops that
// advance a storage pointer, at the cost of tracking those flows separately
// when filtering (the phi-closure step below).

#include "storlift/errors.hpp"
#include "storlift/ir.hpp"
#include "storlift/opcode.hpp"
#include "storlift/word.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace storlift {

using SIndId = std::uint32_t;
inline constexpr SIndId kNoSInd = std::numeric_limits<SIndId>::max();

enum class SIndKind : std::uint8_t {
  Const,           // literal slot c
  ArrayDataStart,  // keccak256(par): first slot of a dynamic array's data
  ArrayAccess,     // keccak256(par) + stride*iv: element indexed by iv
  Mapping,         // keccak256(pad32(kv) ++ par): value keyed by kv
  Offset,          // par + of: struct member at small relative slot of
};

struct SIndTerm {
  SIndKind kind = SIndKind::Const;
  Word constant = 0;            // Const
  SIndId par = kNoSInd;         // all composites
  VarId var = kNoVar;           // ArrayAccess index var / Mapping key var
  std::uint32_t offset = 0;     // Offset, 1..0xffff
};

// Interning arena: structurally equal terms share one id, so set membership
// and parent navigation are id comparisons.
class SIndArena {
 public:
  SIndId const_index(const Word& c) {
    auto it = consts_.find(c);
    if (it != consts_.end()) return it->second;
    SIndTerm t;
    t.kind = SIndKind::Const;
    t.constant = c;
    SIndId id = push(t);
    consts_.emplace(c, id);
    return id;
  }

  SIndId array_data_start(SIndId par) {
    return composite(SIndKind::ArrayDataStart, par, 0);
  }
  SIndId array_access(SIndId par, VarId iv) {
    return composite(SIndKind::ArrayAccess, par, iv);
  }
  SIndId mapping(SIndId par, VarId kv) {
    return composite(SIndKind::Mapping, par, kv);
  }
  SIndId offset(SIndId par, std::uint32_t of) {
    return composite(SIndKind::Offset, par, of);
  }

  const SIndTerm& term(SIndId id) const { return terms_[id]; }
  std::size_t size() const { return terms_.size(); }

 private:
  SIndId push(const SIndTerm& t) {
    terms_.push_back(t);
    return static_cast<SIndId>(terms_.size() - 1);
  }

  SIndId composite(SIndKind kind, SIndId par, std::uint64_t aux) {
    auto key = std::make_tuple(static_cast<std::uint8_t>(kind), par, aux);
    auto it = composites_.find(key);
    if (it != composites_.end()) return it->second;
    SIndTerm t;
    t.kind = kind;
    t.par = par;
    if (kind == SIndKind::Offset)
      t.offset = static_cast<std::uint32_t>(aux);
    else if (kind != SIndKind::ArrayDataStart)
      t.var = static_cast<VarId>(aux);
    SIndId id = push(t);
    composites_.emplace(key, id);
    return id;
  }

  std::vector<SIndTerm> terms_;
  std::map<Word, SIndId> consts_;
  std::map<std::tuple<std::uint8_t, SIndId, std::uint64_t>, SIndId> composites_;
};

// Renders a term in constructor syntax, e.g. MapI(ConstI(0x3), v17).
// Variables print as "_" when elided, so structurally equal results compare
// independently of SSA numbering.
inline std::string dump_sind(const SIndArena& a, SIndId id,
                             const Program* p = nullptr,
                             bool elide_vars = false) {
  const SIndTerm& t = a.term(id);
  auto var = [&](VarId v) -> std::string {
    if (elide_vars) return "_";
    if (p) return p->var_names[v];
    return "v" + std::to_string(v);
  };
  switch (t.kind) {
    case SIndKind::Const:
      return "ConstI(" + to_hex(t.constant) + ")";
    case SIndKind::ArrayDataStart:
      return "ArrayDataStartI(" + dump_sind(a, t.par, p, elide_vars) + ")";
    case SIndKind::ArrayAccess:
      return "ArrayAI(" + dump_sind(a, t.par, p, elide_vars) + ", " +
             var(t.var) + ")";
    case SIndKind::Mapping:
      return "MapI(" + dump_sind(a, t.par, p, elide_vars) + ", " + var(t.var) +
             ")";
    case SIndKind::Offset:
      return "OffsI(" + dump_sind(a, t.par, p, elide_vars) + ", " +
             std::to_string(t.offset) + ")";
  }
  return "?";
}

struct VarStorIndex {
  SIndArena arena;
  std::vector<std::vector<SIndId>> per_var;  // sorted unique term ids

  bool has(VarId v, SIndId t) const {
    const auto& xs = per_var[v];
    return std::binary_search(xs.begin(), xs.end(), t);
  }
};

inline constexpr std::uint32_t kMaxStructOffset = 0xffff;

// Least fixpoint of the index-construction rules over the SSA program.
inline VarStorIndex compute_var_stor_index(const Program& p,
                                           const std::vector<HashFact>& hashes,
                                           const Deadline& deadline = {}) {
  VarStorIndex r;
  r.per_var.resize(p.var_names.size());

  // Defensive fixpoint bound: term growth follows PHI-free def-use chains,
  // so anything near this is a rule bug, not a big contract.
  const std::size_t bound = 64 * (p.live_stmt_count() + 16);
  std::size_t facts = 0;

  std::vector<std::vector<const HashFact*>> hash_by_pv(p.var_names.size());
  for (const auto& h : hashes) {
    if (h.stmt < p.stmts.size() &&
        (p.stmts[h.stmt].dead || p.stmt_excluded(h.stmt)))
      continue;
    if (h.args.empty() || h.result == kNoVar) continue;
    hash_by_pv[h.args.back()].push_back(&h);
  }

  std::deque<std::pair<VarId, SIndId>> work;
  auto add = [&](VarId v, SIndId t) {
    if (v == kNoVar || p.is_phi_def(v)) return;
    if (p.var_def[v] != kNoStmt && p.stmts[p.var_def[v]].dead) return;
    auto& xs = r.per_var[v];
    auto it = std::lower_bound(xs.begin(), xs.end(), t);
    if (it != xs.end() && *it == t) return;
    xs.insert(it, t);
    if (++facts > bound || r.arena.size() > bound)
      throw AnalysisError("storage index fixpoint exceeded its term bound");
    work.emplace_back(v, t);
  };

  for (VarId v = 0; v < p.var_names.size(); ++v) {
    if (!p.var_const[v]) continue;
    if (p.var_def[v] != kNoStmt && p.stmt_excluded(p.var_def[v])) continue;
    add(v, r.arena.const_index(*p.var_const[v]));
  }

  // Matches i := MUL(iv, c) with exactly one constant operand.
  auto strided_index_var = [&](VarId i) -> VarId {
    if (p.var_def[i] == kNoStmt) return kNoVar;
    const auto& m = p.stmts[p.var_def[i]];
    if (m.op != OP_MUL || m.uses.size() != 2) return kNoVar;
    bool c0 = p.var_const[m.uses[0]].has_value();
    bool c1 = p.var_const[m.uses[1]].has_value();
    if (c0 == c1) return kNoVar;
    return c0 ? m.uses[1] : m.uses[0];
  };

  while (!work.empty()) {
    deadline.check();
    auto [pv, si] = work.front();
    work.pop_front();

    for (const HashFact* h : hash_by_pv[pv]) {
      if (h->args.size() == 2)
        add(h->result, r.arena.mapping(si, h->args[0]));
      else
        add(h->result, r.arena.array_data_start(si));
    }

    for (StmtId sid : p.var_uses[pv]) {
      const auto& s = p.stmts[sid];
      if (s.dead || p.stmt_excluded(sid)) continue;
      if (s.op != OP_ADD || s.uses.size() != 2 || s.def == kNoVar) continue;
      VarId other = s.uses[0] == pv ? s.uses[1] : s.uses[0];
      // By value: add() below can grow the arena and invalidate references.
      const SIndTerm t = r.arena.term(si);
      const auto& oc = p.var_const[other];
      if (oc) {
        bool small = *oc >= 1 && *oc <= kMaxStructOffset;
        auto ov = static_cast<std::uint32_t>(*oc & 0xffff);
        if (small && (t.kind == SIndKind::ArrayAccess ||
                      t.kind == SIndKind::Mapping)) {
          add(s.def, r.arena.offset(si, ov));
        } else if (small && t.kind == SIndKind::Offset &&
                   t.offset + ov <= kMaxStructOffset) {
          add(s.def, r.arena.offset(t.par, t.offset + ov));
        } else if (t.kind == SIndKind::ArrayDataStart) {
          // Element access at a literal index (stride-one, no MUL emitted).
          add(s.def, r.arena.array_access(t.par, other));
        }
      } else if (t.kind == SIndKind::ArrayDataStart) {
        VarId iv = strided_index_var(other);
        add(s.def, r.arena.array_access(t.par, iv != kNoVar ? iv : other));
      }
    }
  }
  return r;
}

struct ActualIndex {
  std::vector<SIndId> terms;  // sorted
  std::vector<char> member;   // indexed by SIndId

  bool has(SIndId t) const { return t < member.size() && member[t]; }
};

// Filters to the terms whose variables reach a storage operation, walking
// through PHI merges, then closes the set over term parents.
inline ActualIndex compute_actual_index(const Program& p,
                                        const VarStorIndex& vsi) {
  ActualIndex a;
  a.member.assign(vsi.arena.size(), 0);
  PhiClosure phis(p);
  std::deque<SIndId> work;
  auto mark = [&](SIndId t) {
    if (!a.member[t]) {
      a.member[t] = 1;
      work.push_back(t);
    }
  };

  for (StmtId i = 0; i < p.stmts.size(); ++i) {
    const auto& s = p.stmts[i];
    if (s.dead || p.stmt_excluded(i)) continue;
    if (s.op != OP_SLOAD && s.op != OP_SSTORE) continue;
    for (VarId sv : phis.sources(s.uses[0]))
      for (SIndId t : vsi.per_var[sv]) mark(t);
  }

  while (!work.empty()) {
    SIndId t = work.front();
    work.pop_front();
    if (vsi.arena.term(t).kind != SIndKind::Const) mark(vsi.arena.term(t).par);
  }

  for (SIndId t = 0; t < a.member.size(); ++t)
    if (a.member[t]) a.terms.push_back(t);
  return a;
}

}  // namespace storlift
