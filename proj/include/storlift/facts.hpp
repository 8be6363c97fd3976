#pragma once

// Textual fact-file interchange for the lifted IR. One relation per file,
// UTF-8, tab-separated; every row starts with its relation tag so files can
// also be concatenated into a single text. Words print as 0x-prefixed
// lowercase hex; statement and variable identifiers are opaque strings.
//
// Core relations (fixed schemas):
//   LOAD      I  iv  r         r := SLOAD(iv)
//   STORE     I  iv  u         SSTORE(iv) := u
//   ADD/SUB/MUL  I  a  b  r    r := op(a, b); a, b may be 0x-hex constants
//   PHI       l  u             one row per PHI input
//   HASH      I  r  a [b]      r := keccak256 over one or two word args
//   VarValue  v  c             v has constant value c
//
// Any other executable opcode exports under its own name with the uniform
// schema "OP I use... [def]" (uses in pop order, def last when the opcode
// pushes a result), so a fact-imported program carries everything the layout
// and type analyses consume. Stack shuffles, pushes of constants (VarValue
// covers them), memory traffic, and control-flow scaffolding are omitted:
// downstream analyses are statement-based and never consult those.

#include "storlift/errors.hpp"
#include "storlift/ir.hpp"
#include "storlift/opcode.hpp"
#include "storlift/word.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace storlift {

struct FactProgram {
  Program program;
  std::vector<HashFact> hashes;
};

namespace detail {

inline bool exported_as_extension(std::uint16_t op) {
  if (op > 0xff || !op_defined(static_cast<std::uint8_t>(op))) return false;
  auto o = static_cast<std::uint8_t>(op);
  if (is_push(o) || is_dup(o) || is_swap(o)) return false;
  switch (o) {
    // Covered by a core relation or meaningless outside the bytecode view.
    case OP_SLOAD:
    case OP_SSTORE:
    case OP_ADD:
    case OP_SUB:
    case OP_MUL:
    case OP_SHA3:
    case OP_PUSH0:
    case OP_POP:
    case OP_JUMP:
    case OP_JUMPDEST:
    case OP_STOP:
    case OP_RETURN:
    case OP_REVERT:
    case OP_INVALID:
    case OP_SELFDESTRUCT:
    case OP_MLOAD:
    case OP_MSTORE:
    case OP_MSTORE8:
    case OP_MCOPY:
    case OP_CALLDATACOPY:
    case OP_CODECOPY:
    case OP_EXTCODECOPY:
    case OP_RETURNDATACOPY:
    case OP_LOG0:
    case OP_LOG0 + 1:
    case OP_LOG0 + 2:
    case OP_LOG0 + 3:
    case OP_LOG0 + 4:
    case OP_PC:
    case OP_MSIZE:
      return false;
    default:
      return true;
  }
}

inline std::string join_row(const std::vector<std::string>& cols) {
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += '\t';
    out += cols[i];
  }
  out += '\n';
  return out;
}

}  // namespace detail

// Renders the program (plus recognized hashes) as relation files keyed by
// relation name. Rows are sorted per file so identical programs export
// byte-identical facts.
inline std::map<std::string, std::string> export_facts(
    const Program& p, const std::vector<HashFact>& hashes) {
  std::map<std::string, std::vector<std::vector<std::string>>> rows;
  std::set<VarId> referenced;

  auto var = [&](VarId v) { return p.var_names[v]; };
  auto touch = [&](VarId v) { referenced.insert(v); };

  std::vector<bool> is_hash_stmt(p.stmts.size(), false);
  for (const auto& h : hashes)
    if (h.stmt < p.stmts.size()) is_hash_stmt[h.stmt] = true;

  for (StmtId i = 0; i < p.stmts.size(); ++i) {
    const auto& s = p.stmts[i];
    if (s.dead || p.stmt_excluded(i)) continue;
    switch (s.op) {
      case OP_SLOAD:
        rows["LOAD"].push_back({p.stmt_name(i), var(s.uses[0]), var(s.def)});
        touch(s.uses[0]);
        touch(s.def);
        break;
      case OP_SSTORE:
        rows["STORE"].push_back({p.stmt_name(i), var(s.uses[0]), var(s.uses[1])});
        touch(s.uses[0]);
        touch(s.uses[1]);
        break;
      case OP_ADD:
      case OP_SUB:
      case OP_MUL:
        rows[op_name(s.op)].push_back(
            {p.stmt_name(i), var(s.uses[0]), var(s.uses[1]), var(s.def)});
        touch(s.uses[0]);
        touch(s.uses[1]);
        touch(s.def);
        break;
      case OP_PHI:
        for (VarId u : s.uses) {
          rows["PHI"].push_back({var(s.def), var(u)});
          touch(u);
        }
        touch(s.def);
        break;
      case OP_SHA3:
        // The raw memory-offset form carries no information downstream; the
        // value form is emitted from the recognized-hash list below.
        break;
      default:
        if (s.op == OP_CONST || s.op == OP_UNDEF) break;
        if (!detail::exported_as_extension(s.op)) break;
        {
          std::vector<std::string> cols{p.stmt_name(i)};
          for (VarId u : s.uses) {
            cols.push_back(var(u));
            touch(u);
          }
          if (s.def != kNoVar) {
            cols.push_back(var(s.def));
            touch(s.def);
          }
          rows[op_name(s.op)].push_back(std::move(cols));
        }
        break;
    }
  }

  for (const auto& h : hashes) {
    if (h.stmt < p.stmts.size() &&
        (p.stmts[h.stmt].dead || p.stmt_excluded(h.stmt)))
      continue;
    std::vector<std::string> cols{p.stmt_name(h.stmt), var(h.result)};
    touch(h.result);
    for (VarId a : h.args) {
      cols.push_back(var(a));
      touch(a);
    }
    rows["HASH"].push_back(std::move(cols));
  }

  for (VarId v : referenced)
    if (p.var_const[v])
      rows["VarValue"].push_back({var(v), to_hex(*p.var_const[v])});

  std::map<std::string, std::string> files;
  for (auto& [name, rs] : rows) {
    std::sort(rs.begin(), rs.end());
    std::string body;
    for (auto& r : rs) {
      std::vector<std::string> tagged;
      tagged.reserve(r.size() + 1);
      tagged.push_back(name);
      for (auto& c : r) tagged.push_back(std::move(c));
      body += detail::join_row(tagged);
    }
    files[name] = std::move(body);
  }
  return files;
}

namespace detail {

struct FactParser {
  FactProgram out;
  std::map<std::string, VarId, std::less<>> vars;
  std::map<Word, VarId> const_operands;
  std::string file = "facts";
  std::size_t line = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw MalformedFact(file, line, what);
  }

  Word word_of(std::string_view s) {
    if (s.size() < 3 || s[0] != '0' || s[1] != 'x')
      fail("expected 0x-prefixed hex word, got '" + std::string(s) + "'");
    auto w = try_parse_hex(s);
    if (!w) fail("non-hex word '" + std::string(s) + "'");
    return *w;
  }

  VarId var_of(std::string_view name) {
    auto it = vars.find(name);
    if (it != vars.end()) return it->second;
    VarId v = out.program.add_var(std::string(name));
    vars.emplace(std::string(name), v);
    return v;
  }

  // Operand position that admits an inline constant (a, b of arithmetic).
  VarId operand_of(std::string_view s) {
    if (s.size() >= 2 && s[0] == '0' && s[1] == 'x') {
      Word w = word_of(s);
      auto it = const_operands.find(w);
      if (it != const_operands.end()) return it->second;
      VarId v = var_of(s);
      out.program.var_const[v] = w;
      const_operands.emplace(w, v);
      return v;
    }
    return var_of(s);
  }

  VarId fresh_def(std::string_view name) {
    VarId v = var_of(name);
    if (out.program.var_def[v] != kNoStmt)
      fail("variable '" + std::string(name) + "' defined twice");
    return v;
  }

  void set_stmt_name(StmtId s, std::string_view name) {
    auto& names = out.program.stmt_names;
    if (names.size() <= s) names.resize(s + 1);
    names[s] = std::string(name);
  }

  void row(const std::vector<std::string>& f) {
    const std::string& tag = f[0];
    auto need = [&](std::size_t cols) {
      if (f.size() != cols + 1)
        fail(tag + " requires " + std::to_string(cols) + " columns, got " +
             std::to_string(f.size() - 1));
    };
    auto& p = out.program;
    if (tag == "LOAD") {
      need(3);
      VarId iv = var_of(f[2]), r = fresh_def(f[3]);
      set_stmt_name(p.add_stmt(OP_SLOAD, {iv}, r), f[1]);
    } else if (tag == "STORE") {
      need(3);
      VarId iv = var_of(f[2]), u = var_of(f[3]);
      set_stmt_name(p.add_stmt(OP_SSTORE, {iv, u}, kNoVar), f[1]);
    } else if (tag == "ADD" || tag == "SUB" || tag == "MUL") {
      need(4);
      std::uint16_t op = tag == "ADD" ? OP_ADD : tag == "SUB" ? OP_SUB : OP_MUL;
      VarId a = operand_of(f[2]), b = operand_of(f[3]), r = fresh_def(f[4]);
      set_stmt_name(p.add_stmt(op, {a, b}, r), f[1]);
    } else if (tag == "PHI") {
      need(2);
      VarId l = var_of(f[1]), u = var_of(f[2]);
      if (p.var_def[l] != kNoStmt) {
        if (p.stmts[p.var_def[l]].op != OP_PHI)
          fail("variable '" + f[1] + "' defined twice");
        p.stmts[p.var_def[l]].uses.push_back(u);
      } else {
        p.add_stmt(OP_PHI, {u}, l);
      }
    } else if (tag == "HASH") {
      if (f.size() != 4 && f.size() != 5)
        fail("HASH requires 3 or 4 columns, got " + std::to_string(f.size() - 1));
      VarId r = fresh_def(f[2]);
      std::vector<VarId> args;
      for (std::size_t i = 3; i < f.size(); ++i) args.push_back(var_of(f[i]));
      StmtId s = p.add_stmt(OP_SHA3, args, r);
      set_stmt_name(s, f[1]);
      out.hashes.push_back({s, r, std::move(args)});
    } else if (tag == "VarValue") {
      need(2);
      VarId v = var_of(f[1]);
      Word c = word_of(f[2]);
      if (p.var_const[v] && *p.var_const[v] != c)
        fail("conflicting constants for variable '" + f[1] + "'");
      p.var_const[v] = c;
    } else {
      auto op = op_from_name(tag);
      if (!op || !exported_as_extension(*op))
        fail("unknown relation '" + tag + "'");
      auto info = op_info(static_cast<std::uint8_t>(*op));
      std::size_t cols = 1 + info.pops + info.pushes;
      need(cols);
      std::vector<VarId> uses;
      for (std::size_t i = 0; i < info.pops; ++i)
        uses.push_back(operand_of(f[2 + i]));
      VarId def = info.pushes ? fresh_def(f.back()) : kNoVar;
      set_stmt_name(p.add_stmt(*op, std::move(uses), def), f[1]);
    }
  }

  void text(std::string_view body) {
    line = 0;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t nl = body.find('\n', pos);
      std::string_view ln = body.substr(
          pos, nl == std::string_view::npos ? body.size() - pos : nl - pos);
      ++line;
      pos = nl == std::string_view::npos ? body.size() + 1 : nl + 1;
      if (!ln.empty() && ln.back() == '\r') ln.remove_suffix(1);
      if (ln.empty()) continue;
      std::vector<std::string> fields;
      std::size_t fp = 0;
      while (true) {
        std::size_t tab = ln.find('\t', fp);
        fields.emplace_back(ln.substr(
            fp, tab == std::string_view::npos ? ln.size() - fp : tab - fp));
        if (tab == std::string_view::npos) break;
        fp = tab + 1;
      }
      row(fields);
    }
  }
};

}  // namespace detail

// Parses one or more concatenated relation files. Accepts the output of
// export_facts unchanged; aborts with MalformedFact on the first bad row.
inline FactProgram import_facts(std::string_view text,
                                std::string_view source_name = "facts") {
  detail::FactParser fp;
  fp.file = std::string(source_name);
  fp.text(text);
  fp.out.program.rebuild_uses();
  return std::move(fp.out);
}

// Parses a set of relation files (name -> content), tracking the file name
// for error reporting.
inline FactProgram import_facts(
    const std::map<std::string, std::string>& files) {
  detail::FactParser fp;
  for (const auto& [name, body] : files) {
    fp.file = name;
    fp.text(body);
  }
  fp.out.program.rebuild_uses();
  return std::move(fp.out);
}

}  // namespace storlift
