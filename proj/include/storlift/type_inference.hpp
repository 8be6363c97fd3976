#pragma once

// Value type recovery by elimination: each Variable/PackedVariable leaf gets
// its width from partitioning and its type family from the operations the
// program applies to its loaded values and stored operands. Extraction and
// re-insertion plumbing (shifts, width masks, read-modify-write assembly)
// contributes alignment only, never operation evidence.

#include "storlift/constructs.hpp"
#include "storlift/ir.hpp"
#include "storlift/opcode.hpp"
#include "storlift/storage_index.hpp"
#include "storlift/word.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace storlift {

struct ValueType {
  enum class Family : std::uint8_t { UInt, Int, Address, Bool, Bytes };
  Family family = Family::UInt;
  unsigned bytes = 32;  // storage width

  static ValueType uint_of(unsigned bytes) { return {Family::UInt, bytes}; }
  static ValueType int_of(unsigned bytes) { return {Family::Int, bytes}; }
  static ValueType address() { return {Family::Address, 20}; }
  static ValueType boolean() { return {Family::Bool, 1}; }
  static ValueType bytes_of(unsigned bytes) { return {Family::Bytes, bytes}; }

  bool operator==(const ValueType&) const = default;
  auto operator<=>(const ValueType&) const = default;

  std::string name() const {
    switch (family) {
      case Family::UInt:
        return "uint" + std::to_string(bytes * 8);
      case Family::Int:
        return "int" + std::to_string(bytes * 8);
      case Family::Address:
        return "address";
      case Family::Bool:
        return "bool";
      case Family::Bytes:
        return "bytes" + std::to_string(bytes);
    }
    return "uint256";
  }
};

// Operation-kind evidence tags, one per compatibility row plus the padding
// and normalization signals that rows alone cannot carry.
enum class Ev : std::uint8_t {
  Equal,
  Logical,
  CompSigned,
  CompUnsigned,
  Bitwise,
  Shifts,
  ArithSigned,
  ArithUnsigned,
  ByteIndex,
  RightPadded,
  SignExtended,
  IszeroNormalized,
};

using Evidence = std::set<Ev>;

namespace detail {

inline bool is_pow2(const Word& c) { return c != 0 && (c & (c - 1)) == 0; }

// SUB implements both `!=` (result only ever truth-tested) and subtraction.
inline bool sub_is_equality(const Program& p, const IrStatement& s) {
  if (s.def == kNoVar || p.var_uses[s.def].empty()) return false;
  for (StmtId uid : p.var_uses[s.def]) {
    auto op = p.stmts[uid].op;
    if (op != OP_ISZERO && op != OP_JUMPI && op != OP_EQ) return false;
  }
  return true;
}

struct LeafTaint {
  const Program& p;
  const std::set<StmtId>& plumbing;  // shared RMW/positioning statements
  Evidence ev;
  std::set<VarId> visited;
  bool reached_jumpi = false;
  bool reached_phi01 = false;

  LeafTaint(const Program& prog, const std::set<StmtId>& plumb)
      : p(prog), plumbing(plumb) {}

  void tag(Ev e) { ev.insert(e); }

  // One consumer of a tainted value contributes its compatibility row;
  // arithmetic, bitwise, sign extension, and merges stay transparent so
  // later consumers still count.
  void forward_use(StmtId uid, VarId v, int depth) {
    const auto& u = p.stmts[uid];
    if (u.dead || p.stmt_excluded(uid) || plumbing.count(uid)) return;
    switch (u.op) {
      case OP_EQ:
        tag(Ev::Equal);
        break;
      case OP_SUB:
        if (sub_is_equality(p, u)) {
          tag(Ev::Equal);
        } else {
          tag(Ev::ArithUnsigned);
          forward(u.def, depth + 1);
        }
        break;
      case OP_LT:
      case OP_GT:
        tag(Ev::CompUnsigned);
        break;
      case OP_SLT:
      case OP_SGT:
        tag(Ev::CompSigned);
        break;
      case OP_ISZERO:
        tag(Ev::Logical);
        if (u.def != kNoVar)
          for (StmtId n : p.var_uses[u.def])
            if (p.stmts[n].op == OP_ISZERO) tag(Ev::IszeroNormalized);
        break;
      case OP_AND: {
        VarId other = u.uses[0] == v ? u.uses[1] : u.uses[0];
        const auto& m = p.var_const[other];
        if (m && mask_byte_run(*m)) {
          forward(u.def, depth + 1);  // width adjustment, not an operation
        } else {
          tag(Ev::Bitwise);
          forward(u.def, depth + 1);
        }
        break;
      }
      case OP_OR:
      case OP_XOR:
      case OP_NOT:
        tag(Ev::Bitwise);
        forward(u.def, depth + 1);
        break;
      case OP_SHL:
      case OP_SHR:
        if (u.uses.size() == 2 && u.uses[1] == v) {
          tag(Ev::Shifts);
          forward(u.def, depth + 1);
        } else {
          tag(Ev::ArithUnsigned);  // used as a shift count
        }
        break;
      case OP_MUL:
      case OP_DIV: {
        VarId other = u.uses[0] == v ? u.uses[1] : u.uses[0];
        const auto& c = p.var_const[other];
        tag(c && is_pow2(*c) ? Ev::Shifts : Ev::ArithUnsigned);
        forward(u.def, depth + 1);
        break;
      }
      case OP_ADD:
      case OP_MOD:
      case OP_EXP:
      case OP_ADDMOD:
      case OP_MULMOD:
        tag(Ev::ArithUnsigned);
        forward(u.def, depth + 1);
        break;
      case OP_SDIV:
      case OP_SMOD:
        tag(Ev::ArithSigned);
        forward(u.def, depth + 1);
        break;
      case OP_SAR:
        if (u.uses.size() == 2 && u.uses[1] == v) {
          tag(Ev::ArithSigned);
          forward(u.def, depth + 1);
        } else {
          tag(Ev::ArithUnsigned);
        }
        break;
      case OP_SIGNEXTEND:
        if (u.uses.size() == 2 && u.uses[1] == v) {
          tag(Ev::SignExtended);
          forward(u.def, depth + 1);
        }
        break;
      case OP_BYTE:
        if (u.uses.size() == 2 && u.uses[1] == v) tag(Ev::ByteIndex);
        break;
      case OP_PHI:
        for (VarId w : u.uses)
          if (w != v && p.var_const[w] &&
              (*p.var_const[w] == 0 || *p.var_const[w] == 1))
            reached_phi01 = true;
        forward(u.def, depth + 1);
        break;
      case OP_JUMPI:
        if (u.uses.size() == 2 && u.uses[1] == v) reached_jumpi = true;
        break;
      default:
        break;  // memory, hashing, calls, stores: value escapes untyped
    }
  }

  void forward(VarId v, int depth = 0) {
    if (v == kNoVar || depth > 64 || !visited.insert(v).second) return;
    for (StmtId uid : p.var_uses[v]) forward_use(uid, v, depth);
  }

  // Backward taint from a stored operand: the instructions producing the
  // value carry the same rows.
  void backward(VarId v, int depth = 0) {
    if (v == kNoVar || depth > 64 || !visited.insert(v).second) return;
    if (p.var_const[v] || p.var_def[v] == kNoStmt) return;
    StmtId did = p.var_def[v];
    if (plumbing.count(did)) return;
    const auto& s = p.stmts[did];
    switch (s.op) {
      case OP_ADD:
      case OP_SUB:
      case OP_MOD:
      case OP_EXP:
      case OP_ADDMOD:
      case OP_MULMOD:
        tag(Ev::ArithUnsigned);
        for (VarId w : s.uses) backward(w, depth + 1);
        break;
      case OP_MUL:
      case OP_DIV: {
        const auto& c0 = p.var_const[s.uses[0]];
        const auto& c1 = p.var_const[s.uses[1]];
        bool pow2 = (c0 && is_pow2(*c0)) || (c1 && is_pow2(*c1));
        tag(pow2 ? Ev::Shifts : Ev::ArithUnsigned);
        for (VarId w : s.uses) backward(w, depth + 1);
        break;
      }
      case OP_SDIV:
      case OP_SMOD:
        tag(Ev::ArithSigned);
        for (VarId w : s.uses) backward(w, depth + 1);
        break;
      case OP_SAR:
        tag(Ev::ArithSigned);
        backward(s.uses[1], depth + 1);
        break;
      case OP_SHL:
      case OP_SHR:
        tag(Ev::Shifts);
        backward(s.uses[1], depth + 1);
        break;
      case OP_AND: {
        const auto& c0 = p.var_const[s.uses[0]];
        const auto& c1 = p.var_const[s.uses[1]];
        const auto& m = c0 ? c0 : c1;
        if (!m || !mask_byte_run(*m)) tag(Ev::Bitwise);
        for (VarId w : s.uses) backward(w, depth + 1);
        break;
      }
      case OP_OR:
      case OP_XOR:
      case OP_NOT:
        tag(Ev::Bitwise);
        for (VarId w : s.uses) backward(w, depth + 1);
        break;
      case OP_EQ:
      case OP_LT:
      case OP_GT:
      case OP_SLT:
      case OP_SGT:
        tag(Ev::Logical);  // a stored comparison result is a boolean
        break;
      case OP_ISZERO: {
        tag(Ev::Logical);
        VarId inner = s.uses[0];
        if (p.var_def[inner] != kNoStmt &&
            p.stmts[p.var_def[inner]].op == OP_ISZERO)
          tag(Ev::IszeroNormalized);
        break;
      }
      case OP_SIGNEXTEND:
        tag(Ev::SignExtended);
        backward(s.uses[1], depth + 1);
        break;
      case OP_PHI:
        for (VarId w : s.uses) backward(w, depth + 1);
        break;
      default:
        break;  // environment reads, loads of other slots: untyped source
    }
  }
};

}  // namespace detail

// Taints each leaf's loaded values forward and stored operands backward,
// mapping every genuine consumer/producer onto its compatibility row. The
// write recognition pass runs for all leaves first so that one variable's
// re-insertion assembly never counts as operations on another variable
// whose value flows into it.
inline std::map<CId, Evidence> collect_evidence(const Program& p,
                                                const StmtToVar& stv,
                                                const Constructs& cons) {
  std::map<CId, std::vector<StmtId>> stmts_of;
  for (const auto& [stmt, leaves] : stv.map)
    for (CId leaf : leaves) stmts_of[leaf].push_back(stmt);

  std::vector<CId> leaves;
  for (CId leaf : cons.items) {
    auto k = cons.arena.term(leaf).kind;
    if (k == ConKind::Variable || k == ConKind::Packed) leaves.push_back(leaf);
  }

  auto cell_of = [&](CId leaf) -> std::pair<int, int> {
    const ConTerm& t = cons.arena.term(leaf);
    if (t.kind == ConKind::Packed) return {t.lo, t.hi};
    return {0, 31};
  };

  // Pass 1: recognize every store's shape. Re-insertion and positioning
  // statements go into one shared plumbing set; what remains of each stored
  // value is a taint root for its leaf.
  struct WriteRoot {
    CId leaf;
    VarId root;
    bool right_padded;
  };
  std::set<StmtId> plumbing;
  std::vector<WriteRoot> roots;

  for (CId leaf : leaves) {
    auto it = stmts_of.find(leaf);
    if (it == stmts_of.end()) continue;
    auto [cell_lo, cell_hi] = cell_of(leaf);

    auto is_load_of_leaf = [&](VarId v) {
      if (v == kNoVar || p.var_def[v] == kNoStmt ||
          p.stmts[p.var_def[v]].op != OP_SLOAD)
        return false;
      auto mit = stv.map.find(p.var_def[v]);
      return mit != stv.map.end() &&
             std::find(mit->second.begin(), mit->second.end(), leaf) !=
                 mit->second.end();
    };

    for (StmtId sid : it->second) {
      const auto& s = p.stmts[sid];
      if (s.op != OP_SSTORE) continue;
      VarId val = s.uses[1];
      if (p.var_const[val]) continue;  // constants carry no operation rows
      if (p.var_def[val] == kNoStmt) {
        roots.push_back({leaf, val, false});
        continue;
      }
      const auto& d = p.stmts[p.var_def[val]];
      VarId insert = val;
      bool clear_only = false;
      if (d.op == OP_OR && d.uses.size() == 2) {
        bool recognized = false;
        for (int side = 0; side < 2 && !recognized; ++side) {
          VarId keep = d.uses[side];
          if (p.var_const[keep] || p.var_def[keep] == kNoStmt) continue;
          const auto& k = p.stmts[p.var_def[keep]];
          if (k.op != OP_AND || k.uses.size() != 2) continue;
          for (int ks = 0; ks < 2; ++ks) {
            const auto& mask = p.var_const[k.uses[1 - ks]];
            if (mask && is_load_of_leaf(k.uses[ks]) &&
                detail::cleared_byte_run(*mask)) {
              insert = d.uses[1 - side];
              plumbing.insert(p.var_def[keep]);
              plumbing.insert(p.var_def[val]);
              recognized = true;
              break;
            }
          }
        }
        if (!recognized) {
          for (int side = 0; side < 2; ++side)
            if (is_load_of_leaf(d.uses[side])) {
              insert = d.uses[1 - side];
              plumbing.insert(p.var_def[val]);
              break;
            }
        }
      } else if (d.op == OP_AND && d.uses.size() == 2) {
        for (int side = 0; side < 2; ++side) {
          const auto& mask = p.var_const[d.uses[1 - side]];
          if (mask && is_load_of_leaf(d.uses[side]) &&
              detail::cleared_byte_run(*mask)) {
            clear_only = true;  // stores a constant zero into the cell
            plumbing.insert(p.var_def[val]);
            break;
          }
        }
      }

      if (clear_only || insert == kNoVar || p.var_const[insert]) continue;
      // Strip the positioning of the inserted value. Left shifts mean it
      // arrived right-aligned; right shifts mean it arrived left-aligned
      // (right-padded); a mask-only insert into a top-anchored sub-word
      // cell means the same.
      VarId x = insert;
      bool saw_left = false, saw_right = false;
      for (int guard = 0; guard < 8; ++guard) {
        if (x == kNoVar || p.var_const[x] || p.var_def[x] == kNoStmt) break;
        const auto& ds = p.stmts[p.var_def[x]];
        if ((ds.op == OP_SHL || ds.op == OP_SHR) && ds.uses.size() == 2 &&
            p.var_const[ds.uses[0]] &&
            detail::byte_shift(*p.var_const[ds.uses[0]])) {
          (ds.op == OP_SHL ? saw_left : saw_right) = true;
          plumbing.insert(p.var_def[x]);
          x = ds.uses[1];
          continue;
        }
        if (ds.op == OP_MUL && ds.uses.size() == 2) {
          int cs = p.var_const[ds.uses[0]] ? 0 : 1;
          if (p.var_const[ds.uses[cs]] &&
              detail::pow2_byte_shift(*p.var_const[ds.uses[cs]])) {
            saw_left = true;
            plumbing.insert(p.var_def[x]);
            x = ds.uses[1 - cs];
            continue;
          }
        }
        if (ds.op == OP_AND && ds.uses.size() == 2) {
          int cs = p.var_const[ds.uses[0]] ? 0 : 1;
          const auto& m = p.var_const[ds.uses[cs]];
          if (m && detail::mask_byte_run(*m)) {
            plumbing.insert(p.var_def[x]);
            x = ds.uses[1 - cs];
            continue;
          }
        }
        break;
      }
      bool rp = saw_right || (!saw_left && cell_hi == 31 && cell_lo > 0);
      roots.push_back({leaf, x, rp});
    }
  }

  // Pass 2: per-leaf taint against the shared plumbing set.
  std::map<CId, Evidence> out;
  for (CId leaf : leaves) {
    detail::LeafTaint t(p, plumbing);
    auto [cell_lo, cell_hi] = cell_of(leaf);

    for (const auto& r : roots) {
      if (r.leaf != leaf) continue;
      if (r.right_padded) t.tag(Ev::RightPadded);
      t.backward(r.root);
    }

    // Read side: walk the extraction plumbing from each load with a signed
    // byte-shift accumulator, then taint forward from the extracted value.
    // A high-anchored mask or a surviving left shift marks the value as
    // left-aligned in its consumed form.
    auto extract = [&](auto&& self, VarId v, int sh, int depth) -> void {
      if (depth > 64) return;
      for (StmtId uid : p.var_uses[v]) {
        const auto& u = p.stmts[uid];
        if (u.dead || p.stmt_excluded(uid) || plumbing.count(uid)) continue;
        if (u.op == OP_SHR && u.uses.size() == 2 && u.uses[1] == v) {
          if (const auto& c = p.var_const[u.uses[0]]) {
            if (auto k = detail::byte_shift(*c)) {
              self(self, u.def, sh + static_cast<int>(*k), depth + 1);
              continue;
            }
          }
        }
        if (u.op == OP_SHL && u.uses.size() == 2 && u.uses[1] == v) {
          if (const auto& c = p.var_const[u.uses[0]]) {
            if (auto k = detail::byte_shift(*c)) {
              self(self, u.def, sh - static_cast<int>(*k), depth + 1);
              continue;
            }
          }
        }
        if (u.op == OP_DIV && u.uses.size() == 2 && u.uses[0] == v) {
          if (const auto& c = p.var_const[u.uses[1]]) {
            if (auto k = detail::pow2_byte_shift(*c)) {
              self(self, u.def, sh + static_cast<int>(*k), depth + 1);
              continue;
            }
          }
        }
        if (u.op == OP_MUL && u.uses.size() == 2) {
          VarId other = u.uses[0] == v ? u.uses[1] : u.uses[0];
          if (const auto& c = p.var_const[other]) {
            if (auto k = detail::pow2_byte_shift(*c)) {
              self(self, u.def, sh - static_cast<int>(*k), depth + 1);
              continue;
            }
          }
        }
        if (u.op == OP_AND && u.uses.size() == 2) {
          VarId other = u.uses[0] == v ? u.uses[1] : u.uses[0];
          if (const auto& m = p.var_const[other]) {
            if (auto run = detail::mask_byte_run(*m)) {
              if (run->second == 31 && run->first > 0) t.tag(Ev::RightPadded);
              t.forward(u.def);
              continue;
            }
          }
        }
        if (u.op == OP_SIGNEXTEND && u.uses.size() == 2 && u.uses[1] == v) {
          if (const auto& c = p.var_const[u.uses[0]]; c && *c <= 30) {
            t.tag(Ev::SignExtended);
            t.forward(u.def);
            continue;
          }
        }
        // Unextracted consumer: the value reaches it as-is.
        if (sh < 0) t.tag(Ev::RightPadded);
        if (sh == 0 && cell_lo > 0 && cell_hi == 31) t.tag(Ev::RightPadded);
        t.forward_use(uid, v, 0);
      }
    };
    if (auto it = stmts_of.find(leaf); it != stmts_of.end()) {
      for (StmtId sid : it->second) {
        const auto& s = p.stmts[sid];
        if (s.op == OP_SLOAD && s.def != kNoVar) extract(extract, s.def, 0, 0);
      }
    }
    if (t.reached_jumpi && t.reached_phi01) t.tag(Ev::Logical);

    out[leaf] = std::move(t.ev);
  }
  return out;
}

struct TypeResult {
  std::map<CId, ValueType> types;         // every Variable/Packed leaf
  std::map<CId, ValueType> mapping_keys;  // every Mapping construct
  std::vector<std::string> diagnostics;
};

// Elimination with ambiguity resolution: restricted one-width families
// first (bool, address), upgraded to integers by arithmetic evidence;
// signed beats bytes beats unsigned; an undecided full slot is uint256.
inline TypeResult resolve_types(const std::map<CId, Evidence>& evidence,
                                const Constructs& cons) {
  TypeResult r;
  auto has = [](const Evidence& ev, Ev e) { return ev.count(e) != 0; };
  for (CId leaf : cons.items) {
    const ConTerm& t = cons.arena.term(leaf);
    if (t.kind != ConKind::Variable && t.kind != ConKind::Packed) continue;
    unsigned w = t.kind == ConKind::Packed ? unsigned(t.hi) - t.lo + 1 : 32;
    Evidence ev;
    if (auto it = evidence.find(leaf); it != evidence.end()) ev = it->second;

    bool sign = has(ev, Ev::SignExtended) || has(ev, Ev::ArithSigned) ||
                has(ev, Ev::CompSigned);
    bool bytes = has(ev, Ev::ByteIndex) || has(ev, Ev::RightPadded);
    bool arith = has(ev, Ev::Bitwise) || has(ev, Ev::Shifts) ||
                 has(ev, Ev::ArithUnsigned);

    ValueType vt = ValueType::uint_of(w);
    if (sign && has(ev, Ev::ByteIndex)) {
      r.diagnostics.push_back("leaf " + dump_construct(cons.arena, leaf) +
                              ": signed and byte-indexed evidence conflict; "
                              "kept uint" +
                              std::to_string(w * 8));
    } else if (sign) {
      vt = ValueType::int_of(w);
    } else if (bytes) {
      vt = ValueType::bytes_of(w);
    } else if (w == 1) {
      vt = (arith || has(ev, Ev::CompUnsigned)) ? ValueType::uint_of(1)
                                                : ValueType::boolean();
    } else if (w == 20) {
      vt = arith ? ValueType::uint_of(20) : ValueType::address();
    } else if (w == 32) {
      bool only_logical = has(ev, Ev::Logical);
      for (Ev e : ev)
        if (e != Ev::Logical && e != Ev::IszeroNormalized && e != Ev::Equal)
          only_logical = false;
      vt = only_logical ? ValueType::boolean() : ValueType::uint_of(32);
    }
    r.types.emplace(leaf, vt);
  }
  return r;
}

// Mapping key types from the provenance of the hashed key variables. Every
// access site of the same mapping contributes; positive identifications
// (address sources, sign extension, narrowing masks) beat the default.
inline std::map<CId, ValueType> type_mapping_keys(const Program& p,
                                                  const VarStorIndex& vsi,
                                                  const Constructs& cons) {
  auto classify = [&](auto&& self, VarId kv,
                      int depth) -> std::optional<ValueType> {
    if (depth > 8 || kv == kNoVar || p.var_const[kv] ||
        p.var_def[kv] == kNoStmt)
      return std::nullopt;
    const auto& s = p.stmts[p.var_def[kv]];
    switch (s.op) {
      case OP_CALLER:
      case OP_ORIGIN:
        return ValueType::address();
      case OP_SIGNEXTEND:
        if (s.uses.size() == 2 && p.var_const[s.uses[0]] &&
            *p.var_const[s.uses[0]] <= 30)
          return ValueType::int_of(
              static_cast<unsigned>(*p.var_const[s.uses[0]]) + 1);
        return std::nullopt;
      case OP_AND: {
        int cs = p.var_const[s.uses[0]] ? 0 : 1;
        const auto& m = p.var_const[s.uses[cs]];
        VarId inner = s.uses[1 - cs];
        if (m) {
          if (auto run = detail::mask_byte_run(*m)) {
            if (run->first == 0 && run->second < 31) {
              unsigned n = static_cast<unsigned>(run->second) + 1;
              if (n == 20) return ValueType::address();
              return ValueType::uint_of(n);
            }
            if (run->first > 0 && run->second == 31)
              return ValueType::bytes_of(
                  static_cast<unsigned>(32 - run->first));
            return self(self, inner, depth + 1);  // full-width cleanup
          }
        }
        return self(self, inner, depth + 1);
      }
      default:
        return std::nullopt;
    }
  };

  std::map<CId, std::vector<ValueType>> found;
  std::set<CId> seen;
  for (const auto& [si, cid] : cons.translation) {
    const SIndTerm& term = vsi.arena.term(si);
    if (term.kind != SIndKind::Mapping) continue;
    seen.insert(cid);
    if (auto vt = classify(classify, term.var, 0)) found[cid].push_back(*vt);
  }

  std::map<CId, ValueType> out;
  for (CId cid : seen) {
    ValueType vt = ValueType::uint_of(32);  // unconstrained key default
    if (auto it = found.find(cid); it != found.end()) {
      const auto& cands = it->second;
      auto widest = [&](ValueType::Family f) -> std::optional<ValueType> {
        std::optional<ValueType> best;
        for (const auto& c : cands)
          if (c.family == f && (!best || c.bytes > best->bytes)) best = c;
        return best;
      };
      if (auto a = widest(ValueType::Family::Address))
        vt = *a;
      else if (auto i = widest(ValueType::Family::Int))
        vt = *i;
      else if (auto b = widest(ValueType::Family::Bytes))
        vt = *b;
      else if (auto u = widest(ValueType::Family::UInt))
        vt = *u;
    }
    out.emplace(cid, vt);
  }
  return out;
}

inline TypeResult infer_types(const Program& p, const StmtToVar& stv,
                              const Constructs& cons,
                              const VarStorIndex& vsi) {
  auto ev = collect_evidence(p, stv, cons);
  TypeResult r = resolve_types(ev, cons);
  r.mapping_keys = type_mapping_keys(p, vsi, cons);
  return r;
}

}  // namespace storlift
