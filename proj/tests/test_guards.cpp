// Guard-variable detection: a leaf read and compared against a constant
// that gates a revert, overwritten with a different constant on the pass
// path, and restored afterwards.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "storlift/cfg.hpp"
#include "storlift/constructs.hpp"
#include "storlift/guards.hpp"
#include "storlift/hash_model.hpp"
#include "storlift/instruction.hpp"
#include "storlift/lifter.hpp"
#include "storlift/storage_index.hpp"
#include "support/asm.hpp"

using namespace storlift;
using tsup::Asm;

namespace {

struct Found {
  Program p;
  VarStorIndex vsi;
  ActualIndex actual;
  Constructs cons;
  StmtToVar stv;
  std::vector<GuardReport> reports;
};

Found detect(const std::vector<std::uint8_t>& code) {
  Found f;
  f.p = lift_to_ssa(build_cfg(disassemble(code)));
  fold_all(f.p);
  auto hashes = detect_hashes(f.p);
  f.vsi = compute_var_stor_index(f.p, hashes);
  f.actual = compute_actual_index(f.p, f.vsi);
  f.cons = build_constructs(f.vsi.arena, f.actual);
  f.stv = map_statements(f.p, f.vsi, f.cons);
  partition_packed(f.p, f.cons, f.stv);
  f.reports = detect_guards(f.p, f.stv, f.cons);
  return f;
}

// require(status == 1); status = 2; <body>; [status = 1]
std::vector<std::uint8_t> uint_guard(bool with_unlock) {
  Asm a;
  a.push(0).op(OP_SLOAD).push(1).op(OP_EQ);
  a.push_label("pass").op(OP_JUMPI);
  a.push(0).push(0).op(OP_REVERT);
  a.jumpdest("pass");
  a.push(2).push(0).op(OP_SSTORE);
  a.op(OP_CALLVALUE).op(OP_POP);  // stand-in for the protected body
  if (with_unlock) a.push(1).push(0).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

void check_mapped(const Found& f, StmtId stmt, CId leaf) {
  auto it = f.stv.map.find(stmt);
  REQUIRE(it != f.stv.map.end());
  CHECK(std::find(it->second.begin(), it->second.end(), leaf) !=
        it->second.end());
}

const Word kByte20 = Word(0xff) << 160;
const Word kClearByte20 = evm_not(kByte20);

}  // namespace

TEST_CASE("the standard guard modifier yields exactly one report") {
  Found f = detect(uint_guard(true));
  REQUIRE(f.reports.size() == 1);
  const GuardReport& g = f.reports[0];

  CHECK(dump_construct(f.cons.arena, g.guard_var) == "Var(Const(0x0))");
  CHECK(g.locked_value == 2);
  CHECK(g.unlocked_value == 1);
  CHECK(g.locked_value != g.unlocked_value);

  SECTION("the three statements are the leaf's own storage ops") {
    CHECK(f.p.stmts[g.check_stmt].op == OP_SLOAD);
    CHECK(f.p.stmts[g.lock_stmt].op == OP_SSTORE);
    CHECK(f.p.stmts[g.unlock_stmt].op == OP_SSTORE);
    check_mapped(f, g.check_stmt, g.guard_var);
    check_mapped(f, g.lock_stmt, g.guard_var);
    check_mapped(f, g.unlock_stmt, g.guard_var);
  }

  SECTION("the JSON report carries the construct and both constants") {
    auto doc = guards_to_json(f.reports, f.cons);
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["guardVar"] == "Var(Const(0x0))");
    CHECK(doc[0]["lockedValue"] == "2");
    CHECK(doc[0]["unlockedValue"] == "1");
  }
}

TEST_CASE("removing the unlock store removes the report") {
  Found f = detect(uint_guard(false));
  CHECK(f.reports.empty());
}

TEST_CASE("bool-style guards are recognized") {
  // require(!locked); locked = true; <body>; locked = false
  Asm a;
  a.push(0).op(OP_SLOAD).op(OP_ISZERO);
  a.push_label("pass").op(OP_JUMPI);
  a.push(0).push(0).op(OP_REVERT);
  a.jumpdest("pass");
  a.push(1).push(0).op(OP_SSTORE);
  a.op(OP_CALLVALUE).op(OP_POP);
  a.push(0).push(0).op(OP_SSTORE);
  a.op(OP_STOP);

  Found f = detect(a.build());
  REQUIRE(f.reports.size() == 1);
  CHECK(f.reports[0].locked_value == 1);
  CHECK(f.reports[0].unlocked_value == 0);
}

TEST_CASE("a status variable written but never checked yields nothing") {
  Asm a;
  a.push(0).op(OP_SLOAD).op(OP_POP);  // read without a gating comparison
  a.push(2).push(0).op(OP_SSTORE);
  a.push(1).push(0).op(OP_SSTORE);
  a.op(OP_STOP);
  CHECK(detect(a.build()).reports.empty());
}

TEST_CASE("a contract with no storage writes yields nothing") {
  Asm a;
  a.push(0).op(OP_SLOAD).push(1).op(OP_EQ);
  a.push_label("pass").op(OP_JUMPI);
  a.push(0).push(0).op(OP_REVERT);
  a.jumpdest("pass");
  a.op(OP_STOP);
  CHECK(detect(a.build()).reports.empty());
}

TEST_CASE("a check that can be bypassed is not a guard") {
  // a second entry path reaches the lock without passing the check
  Asm a;
  a.op(OP_CALLVALUE).push_label("skip").op(OP_JUMPI);
  a.push(0).op(OP_SLOAD).push(1).op(OP_EQ);
  a.push_label("lock").op(OP_JUMPI);
  a.push(0).push(0).op(OP_REVERT);
  a.jumpdest("skip");
  a.push_label("lock").op(OP_JUMP);
  a.jumpdest("lock");
  a.push(2).push(0).op(OP_SSTORE);
  a.push(1).push(0).op(OP_SSTORE);
  a.op(OP_STOP);
  CHECK(detect(a.build()).reports.empty());
}

TEST_CASE("a guard living in a packed byte is recognized") {
  Asm a;
  // check: require(byte 20 of slot 1 is clear)
  a.push(1).op(OP_SLOAD).push(0xa0).op(OP_SHR).push(0xff).op(OP_AND);
  a.op(OP_ISZERO).push_label("pass").op(OP_JUMPI);
  a.push(0).push(0).op(OP_REVERT);
  a.jumpdest("pass");
  // lock: insert 1 into byte 20 via read-modify-write
  a.push(1).op(OP_SLOAD).push(kClearByte20).op(OP_AND);
  a.push(Word(1) << 160).op(OP_OR).push(1).op(OP_SSTORE);
  a.op(OP_CALLVALUE).op(OP_POP);
  // unlock: clear byte 20
  a.push(1).op(OP_SLOAD).push(kClearByte20).op(OP_AND).push(1).op(OP_SSTORE);
  a.op(OP_STOP);

  Found f = detect(a.build());
  REQUIRE(f.reports.size() == 1);
  const GuardReport& g = f.reports[0];
  CHECK(dump_construct(f.cons.arena, g.guard_var) == "PVar(Const(0x1), 20, 20)");
  CHECK(g.locked_value == 1);
  CHECK(g.unlocked_value == 0);
}

TEST_CASE("lock and unlock must write distinct constants") {
  // the gated store writes the compared value itself: no lock transition
  Asm a;
  a.push(0).op(OP_SLOAD).push(1).op(OP_EQ);
  a.push_label("pass").op(OP_JUMPI);
  a.push(0).push(0).op(OP_REVERT);
  a.jumpdest("pass");
  a.push(1).push(0).op(OP_SSTORE);
  a.push(1).push(0).op(OP_SSTORE);
  a.op(OP_STOP);
  CHECK(detect(a.build()).reports.empty());
}

TEST_CASE("without lifted control flow no gating can be established") {
  Found f = detect(uint_guard(true));
  REQUIRE_FALSE(f.reports.empty());
  Program q = f.p;
  q.has_cfg = false;
  CHECK(detect_guards(q, f.stv, f.cons).empty());
}
