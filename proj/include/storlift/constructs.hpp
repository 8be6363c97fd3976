#pragma once

// From actual storage indexes to storage constructs: translate index terms
// into a construct tree (dropping key/index variables, so all accesses to
// one container share one construct), attach Variable leaves where values
// live, map each SLOAD/SSTORE to its leaf, and split slot-sized Variables
// into PackedVariable byte ranges when every observed access pattern agrees
// on a clean sub-word partition.

#include "storlift/ir.hpp"
#include "storlift/opcode.hpp"
#include "storlift/storage_index.hpp"
#include "storlift/word.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace storlift {

using CId = std::uint32_t;
inline constexpr CId kNoConstruct = std::numeric_limits<CId>::max();

enum class ConKind : std::uint8_t {
  Const,     // literal slot
  Array,     // dynamic array rooted at par
  Mapping,   // mapping rooted at par
  Offset,    // struct member slot par + of
  Variable,  // value cell occupying the whole slot of par
  Packed,    // value cell occupying bytes lo..hi (little-offset) of par
};

struct ConTerm {
  ConKind kind = ConKind::Const;
  Word constant = 0;         // Const
  CId par = kNoConstruct;    // everything else
  std::uint32_t of = 0;      // Offset
  std::uint8_t lo = 0, hi = 31;  // Packed
};

class ConstructArena {
 public:
  CId const_slot(const Word& c) {
    auto it = consts_.find(c);
    if (it != consts_.end()) return it->second;
    ConTerm t;
    t.kind = ConKind::Const;
    t.constant = c;
    CId id = push(t);
    consts_.emplace(c, id);
    return id;
  }
  CId array(CId par) { return composite(ConKind::Array, par, 0); }
  CId mapping(CId par) { return composite(ConKind::Mapping, par, 0); }
  CId offset(CId par, std::uint32_t of) {
    return composite(ConKind::Offset, par, of);
  }
  CId variable(CId par) { return composite(ConKind::Variable, par, 0); }
  CId packed(CId par, std::uint8_t lo, std::uint8_t hi) {
    return composite(ConKind::Packed, par, (std::uint64_t(lo) << 8) | hi);
  }

  const ConTerm& term(CId id) const { return terms_[id]; }
  std::size_t size() const { return terms_.size(); }

  // Lookup without interning, so read-only passes stay read-only.
  std::optional<CId> find(ConKind kind, CId par, std::uint64_t aux = 0) const {
    auto it = composites_.find(
        std::make_tuple(static_cast<std::uint8_t>(kind), par, aux));
    if (it == composites_.end()) return std::nullopt;
    return it->second;
  }

 private:
  CId push(const ConTerm& t) {
    terms_.push_back(t);
    return static_cast<CId>(terms_.size() - 1);
  }
  CId composite(ConKind kind, CId par, std::uint64_t aux) {
    auto key = std::make_tuple(static_cast<std::uint8_t>(kind), par, aux);
    auto it = composites_.find(key);
    if (it != composites_.end()) return it->second;
    ConTerm t;
    t.kind = kind;
    t.par = par;
    if (kind == ConKind::Offset) t.of = static_cast<std::uint32_t>(aux);
    if (kind == ConKind::Packed) {
      t.lo = static_cast<std::uint8_t>(aux >> 8);
      t.hi = static_cast<std::uint8_t>(aux & 0xff);
    }
    CId id = push(t);
    composites_.emplace(key, id);
    return id;
  }

  std::vector<ConTerm> terms_;
  std::map<Word, CId> consts_;
  std::map<std::tuple<std::uint8_t, CId, std::uint64_t>, CId> composites_;
};

// Constructor syntax used by the debug dumps, e.g. PVar(Const(0x1), 0, 19).
inline std::string dump_construct(const ConstructArena& a, CId id) {
  const ConTerm& t = a.term(id);
  switch (t.kind) {
    case ConKind::Const:
      return "Const(" + to_hex(t.constant) + ")";
    case ConKind::Array:
      return "Array(" + dump_construct(a, t.par) + ")";
    case ConKind::Mapping:
      return "Map(" + dump_construct(a, t.par) + ")";
    case ConKind::Offset:
      return "Offs(" + dump_construct(a, t.par) + ", " + std::to_string(t.of) +
             ")";
    case ConKind::Variable:
      return "Var(" + dump_construct(a, t.par) + ")";
    case ConKind::Packed:
      return "PVar(" + dump_construct(a, t.par) + ", " + std::to_string(t.lo) +
             ", " + std::to_string(t.hi) + ")";
  }
  return "?";
}

struct Constructs {
  ConstructArena arena;
  std::set<CId> items;
  std::map<SIndId, CId> translation;  // actual index term -> construct

  bool has(CId id) const { return items.count(id) != 0; }
};

// Base rule: syntactic translation of every actual index term (array data
// starts and element accesses collapse into one Array). Var rule: a
// construct gains a Variable leaf unless an actual Array or Mapping child
// sits on top of it.
inline Constructs build_constructs(const SIndArena& sinds,
                                   const ActualIndex& actual) {
  Constructs c;
  auto translate = [&](auto&& self, SIndId si) -> CId {
    auto it = c.translation.find(si);
    if (it != c.translation.end()) return it->second;
    const SIndTerm& t = sinds.term(si);
    CId out = kNoConstruct;
    switch (t.kind) {
      case SIndKind::Const:
        out = c.arena.const_slot(t.constant);
        break;
      case SIndKind::ArrayDataStart:
      case SIndKind::ArrayAccess:
        out = c.arena.array(self(self, t.par));
        break;
      case SIndKind::Mapping:
        out = c.arena.mapping(self(self, t.par));
        break;
      case SIndKind::Offset:
        out = c.arena.offset(self(self, t.par), t.offset);
        break;
    }
    c.translation.emplace(si, out);
    return out;
  };

  for (SIndId si : actual.terms) c.items.insert(translate(translate, si));

  std::vector<CId> translated(c.items.begin(), c.items.end());
  auto present = [&](ConKind kind, CId par) {
    auto id = c.arena.find(kind, par);
    return id && c.has(*id);
  };
  for (CId id : translated)
    if (!present(ConKind::Array, id) && !present(ConKind::Mapping, id))
      c.items.insert(c.arena.variable(id));
  return c;
}

struct StmtToVar {
  std::map<StmtId, std::vector<CId>> map;  // storage op -> value leaves
  std::vector<StmtId> unmapped;            // storage ops with no leaf
};

// Both mapping rules: direct (the address variable holds the index) and
// PHI-closed (the address variable merges index-holding sources).
inline StmtToVar map_statements(const Program& p, const VarStorIndex& vsi,
                                const Constructs& cons) {
  StmtToVar out;
  PhiClosure phis(p);
  for (StmtId i = 0; i < p.stmts.size(); ++i) {
    const auto& s = p.stmts[i];
    if (s.dead || p.stmt_excluded(i)) continue;
    if (s.op != OP_SLOAD && s.op != OP_SSTORE) continue;
    std::set<CId> leaves;
    for (VarId sv : phis.sources(s.uses[0]))
      for (SIndId si : vsi.per_var[sv]) {
        auto it = cons.translation.find(si);
        if (it == cons.translation.end()) continue;
        auto leaf = cons.arena.find(ConKind::Variable, it->second);
        if (leaf && cons.has(*leaf)) leaves.insert(*leaf);
      }
    if (leaves.empty())
      out.unmapped.push_back(i);
    else
      out.map.emplace(i, std::vector<CId>(leaves.begin(), leaves.end()));
  }
  return out;
}

namespace detail {

using ByteInterval = std::pair<int, int>;  // inclusive, little-offset bytes

// A mask whose bytes are each 0x00 or 0xff and whose 0xff bytes form one
// contiguous run: returns that run.
inline std::optional<ByteInterval> mask_byte_run(const Word& m) {
  int lo = -1, hi = -1;
  for (int i = 0; i < 32; ++i) {
    unsigned b = static_cast<unsigned>((m >> (8 * i)) & 0xff);
    if (b == 0xff) {
      if (lo == -1) lo = i;
      if (lo != -1 && hi != -1) return std::nullopt;  // second run started
    } else if (b == 0x00) {
      if (lo != -1 && hi == -1) hi = i - 1;
    } else {
      return std::nullopt;
    }
  }
  if (lo == -1) return std::nullopt;
  if (hi == -1) hi = 31;
  return ByteInterval{lo, hi};
}

// A clear mask keeps everything except one contiguous zero-byte run:
// returns the cleared run.
inline std::optional<ByteInterval> cleared_byte_run(const Word& m) {
  return mask_byte_run(evm_not(m));
}

// Smallest byte run covering every set bit of a written constant.
inline std::optional<ByteInterval> value_byte_span(const Word& v) {
  int lo = -1, hi = -1;
  for (int i = 0; i < 32; ++i) {
    if (((v >> (8 * i)) & 0xff) != 0) {
      if (lo == -1) lo = i;
      hi = i;
    }
  }
  if (lo == -1) return std::nullopt;  // zero: no span of its own
  return ByteInterval{lo, hi};
}

inline std::optional<unsigned> byte_shift(const Word& bits) {
  if (bits > 255 || (bits & 7) != 0) return std::nullopt;
  return static_cast<unsigned>(bits) / 8;
}

inline std::optional<unsigned> pow2_byte_shift(const Word& c) {
  if (c == 0) return std::nullopt;
  for (unsigned k = 0; k <= 255; ++k)
    if ((Word(1) << k) == c) return (k & 7) ? std::nullopt : std::optional(k / 8);
  return std::nullopt;
}

struct AccessProfile {
  std::vector<ByteInterval> intervals;  // one per recognized access
  bool full = false;                    // some access covers the whole word
  // Statement -> the intervals that statement touches, for remapping.
  std::map<StmtId, std::vector<ByteInterval>> by_stmt;

  void add(StmtId s, ByteInterval iv) {
    if (iv.first == 0 && iv.second == 31) {
      full = true;
      return;
    }
    intervals.push_back(iv);
    by_stmt[s].push_back(iv);
  }
};

// The byte range a written value was built for: a constant's span, or the
// range implied by shift-and-mask shaping of a variable.
inline std::optional<ByteInterval> insert_shape(const Program& p, VarId v,
                                                int depth = 0) {
  if (depth > 16) return std::nullopt;
  if (p.var_const[v]) return value_byte_span(*p.var_const[v]);
  if (p.var_def[v] == kNoStmt) return std::nullopt;
  const auto& s = p.stmts[p.var_def[v]];
  if (s.op == OP_AND && s.uses.size() == 2) {
    for (int side = 0; side < 2; ++side) {
      const auto& m = p.var_const[s.uses[side]];
      if (m)
        if (auto run = mask_byte_run(*m)) return run;
    }
    return std::nullopt;
  }
  if (s.op == OP_SHL && s.uses.size() == 2) {
    const auto& c = p.var_const[s.uses[0]];
    if (!c) return std::nullopt;
    auto sh = byte_shift(*c);
    if (!sh) return std::nullopt;
    auto inner = insert_shape(p, s.uses[1], depth + 1);
    if (!inner) return std::nullopt;
    int lo = inner->first + static_cast<int>(*sh);
    int hi = inner->second + static_cast<int>(*sh);
    if (hi > 31) return std::nullopt;
    return ByteInterval{lo, hi};
  }
  if (s.op == OP_MUL && s.uses.size() == 2) {
    for (int side = 0; side < 2; ++side) {
      const auto& c = p.var_const[s.uses[side]];
      if (!c) continue;
      auto sh = pow2_byte_shift(*c);
      if (!sh) return std::nullopt;
      auto inner = insert_shape(p, s.uses[1 - side], depth + 1);
      if (!inner) return std::nullopt;
      int lo = inner->first + static_cast<int>(*sh);
      int hi = inner->second + static_cast<int>(*sh);
      if (hi > 31) return std::nullopt;
      return ByteInterval{lo, hi};
    }
    return std::nullopt;
  }
  // Boolean normalization produces a 1-byte value wherever it lands.
  if (s.op == OP_ISZERO) return ByteInterval{0, 0};
  return std::nullopt;
}

}  // namespace detail

// Splits whole-slot Variable leaves into PackedVariable leaves when every
// mapped read and write touches sub-word byte ranges that tile without
// conflict. Anything unrecognized keeps the unpartitioned Variable, so a
// wrong split can never be introduced, and re-running is a no-op: Packed
// leaves are not candidates.
inline void partition_packed(const Program& p, Constructs& cons,
                             StmtToVar& stv) {
  using detail::ByteInterval;

  // Group storage ops by leaf.
  std::map<CId, std::vector<StmtId>> stmts_of;
  for (const auto& [stmt, leaves] : stv.map)
    for (CId leaf : leaves) stmts_of[leaf].push_back(stmt);

  for (auto& [leaf, ops] : stmts_of) {
    if (cons.arena.term(leaf).kind != ConKind::Variable) continue;
    detail::AccessProfile prof;
    // Load-result uses consumed by a recognized read-modify-write: they
    // re-assemble the slot rather than read it.
    std::set<StmtId> rmw_uses;

    auto is_load_of_leaf = [&](VarId v) {
      if (p.var_def[v] == kNoStmt) return false;
      StmtId d = p.var_def[v];
      if (p.stmts[d].op != OP_SLOAD) return false;
      auto it = stv.map.find(d);
      return it != stv.map.end() &&
             std::find(it->second.begin(), it->second.end(), leaf) !=
                 it->second.end();
    };

    // --- writes ---
    for (StmtId sid : ops) {
      const auto& s = p.stmts[sid];
      if (s.op != OP_SSTORE) continue;
      VarId val = s.uses[1];
      auto full = [&] { prof.add(sid, {0, 31}); };

      if (p.var_const[val] || p.var_def[val] == kNoStmt) {
        full();  // whole-word constant or opaque write
        continue;
      }
      const auto& d = p.stmts[p.var_def[val]];
      std::optional<ByteInterval> iv;
      StmtId inner_load = kNoStmt;  // the RMW's own reload of the slot
      if (d.op == OP_OR && d.uses.size() == 2) {
        for (int side = 0; side < 2 && !iv; ++side) {
          VarId keep = d.uses[side], insert = d.uses[1 - side];
          // keep = AND(loaded, clear-mask) over this same slot
          if (p.var_def[keep] == kNoStmt) continue;
          const auto& k = p.stmts[p.var_def[keep]];
          if (k.op != OP_AND || k.uses.size() != 2) continue;
          for (int ks = 0; ks < 2 && !iv; ++ks) {
            VarId loaded = k.uses[ks];
            const auto& mask = p.var_const[k.uses[1 - ks]];
            if (!mask || !is_load_of_leaf(loaded)) continue;
            auto run = detail::cleared_byte_run(*mask);
            if (!run) continue;
            // A constant insert must stay inside the cleared range; shaped
            // variable inserts are trusted to (the clear defines the cell).
            if (p.var_const[insert]) {
              auto span = detail::value_byte_span(*p.var_const[insert]);
              if (span && (span->first < run->first || span->second > run->second))
                continue;
            }
            iv = run;
            inner_load = p.var_def[loaded];
            rmw_uses.insert(p.var_def[keep]);  // the AND
            rmw_uses.insert(p.var_def[val]);   // the OR
          }
        }
        if (!iv) {
          // OR-only set: OR(loaded, constant or shaped value)
          for (int side = 0; side < 2 && !iv; ++side) {
            if (!is_load_of_leaf(d.uses[side])) continue;
            auto span = detail::insert_shape(p, d.uses[1 - side]);
            if (span) {
              iv = span;
              inner_load = p.var_def[d.uses[side]];
              rmw_uses.insert(p.var_def[val]);
            }
          }
        }
      } else if (d.op == OP_AND && d.uses.size() == 2) {
        // AND-only clear: zeroing one cell, keeping the rest.
        for (int side = 0; side < 2 && !iv; ++side) {
          const auto& mask = p.var_const[d.uses[1 - side]];
          if (!mask || !is_load_of_leaf(d.uses[side])) continue;
          if (auto run = detail::cleared_byte_run(*mask)) {
            iv = run;
            inner_load = p.var_def[d.uses[side]];
            rmw_uses.insert(p.var_def[val]);
          }
        }
      }
      // Plain store of a value shaped to one byte run: emitted when that
      // run is the slot's only occupied cell (the rest is zeroed, not
      // preserved), so the shape pins the cell just like a read mask does.
      if (!iv) iv = detail::insert_shape(p, val);
      if (iv) {
        prof.add(sid, *iv);
        // The reload belongs to the written cell, not to every cell.
        if (inner_load != kNoStmt) prof.add(inner_load, *iv);
      } else {
        full();
      }
    }

    // --- reads ---
    // Walks forward from a load result through shift/divide plumbing until a
    // mask or a consumer pins down which bytes the chain extracts. `shift` is
    // the net right-shift in bytes; left shifts (top-aligned extraction of
    // right-padded cells) drive it negative.
    auto clip = [&](StmtId load, int lo, int hi) {
      lo = std::max(lo, 0);
      hi = std::min(hi, 31);
      if (lo <= hi) prof.add(load, {lo, hi});
    };
    auto chase = [&](auto&& self, StmtId load, VarId v, int shift) -> void {
      for (StmtId uid : p.var_uses[v]) {
        if (p.stmts[uid].dead || p.stmt_excluded(uid)) continue;
        if (rmw_uses.count(uid)) continue;
        const auto& u = p.stmts[uid];
        if (u.op == OP_SHR && u.uses.size() == 2 && u.uses[1] == v) {
          const auto& c = p.var_const[u.uses[0]];
          if (auto sh = c ? detail::byte_shift(*c) : std::nullopt) {
            self(self, load, u.def, shift + static_cast<int>(*sh));
            continue;
          }
        }
        if (u.op == OP_SHL && u.uses.size() == 2 && u.uses[1] == v) {
          const auto& c = p.var_const[u.uses[0]];
          if (auto sh = c ? detail::byte_shift(*c) : std::nullopt) {
            self(self, load, u.def, shift - static_cast<int>(*sh));
            continue;
          }
        }
        if (u.op == OP_DIV && u.uses.size() == 2 && u.uses[0] == v) {
          const auto& c = p.var_const[u.uses[1]];
          if (auto sh = c ? detail::pow2_byte_shift(*c) : std::nullopt) {
            self(self, load, u.def, shift + static_cast<int>(*sh));
            continue;
          }
        }
        if (u.op == OP_MUL && u.uses.size() == 2) {
          VarId other = u.uses[0] == v ? u.uses[1] : u.uses[0];
          const auto& c = p.var_const[other];
          if (auto sh = c ? detail::pow2_byte_shift(*c) : std::nullopt) {
            self(self, load, u.def, shift - static_cast<int>(*sh));
            continue;
          }
        }
        if (u.op == OP_AND && u.uses.size() == 2) {
          VarId other = u.uses[0] == v ? u.uses[1] : u.uses[0];
          if (const auto& m = p.var_const[other]) {
            if (auto run = detail::mask_byte_run(*m)) {
              clip(load, run->first + shift, run->second + shift);
              continue;
            }
          }
        }
        if (u.op == OP_SIGNEXTEND && u.uses.size() == 2 && u.uses[1] == v) {
          const auto& c = p.var_const[u.uses[0]];
          if (c && *c <= 30 && shift >= 0) {
            clip(load, shift, shift + static_cast<int>(*c));
            continue;
          }
        }
        // Any other consumer sees whatever survived the net shift.
        clip(load, shift, 31 + shift);
      }
    };
    for (StmtId sid : ops) {
      const auto& s = p.stmts[sid];
      if (s.op == OP_SLOAD && s.def != kNoVar) chase(chase, sid, s.def, 0);
    }

    // --- decide ---
    if (prof.full || prof.intervals.empty()) continue;
    std::sort(prof.intervals.begin(), prof.intervals.end());
    prof.intervals.erase(
        std::unique(prof.intervals.begin(), prof.intervals.end()),
        prof.intervals.end());
    bool clean = true;
    for (std::size_t i = 1; i < prof.intervals.size() && clean; ++i)
      if (prof.intervals[i].first <= prof.intervals[i - 1].second) clean = false;
    if (!clean) continue;

    // Replace the Variable leaf with one PackedVariable per interval.
    CId par = cons.arena.term(leaf).par;
    std::map<ByteInterval, CId> cells;
    cons.items.erase(leaf);
    for (const auto& iv : prof.intervals) {
      CId pv = cons.arena.packed(par, static_cast<std::uint8_t>(iv.first),
                                 static_cast<std::uint8_t>(iv.second));
      cons.items.insert(pv);
      cells.emplace(iv, pv);
    }
    for (StmtId sid : ops) {
      auto& leaves = stv.map[sid];
      leaves.erase(std::remove(leaves.begin(), leaves.end(), leaf),
                   leaves.end());
      auto it = prof.by_stmt.find(sid);
      if (it != prof.by_stmt.end()) {
        std::set<CId> mine;
        for (const auto& iv : it->second) mine.insert(cells.at(iv));
        for (CId pv : mine) leaves.push_back(pv);
      } else {
        for (const auto& [iv, pv] : cells) leaves.push_back(pv);
      }
      std::sort(leaves.begin(), leaves.end());
      leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
    }
  }
}

}  // namespace storlift
