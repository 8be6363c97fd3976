#pragma once

// Single-contract pipeline: runtime bytecode (or previously exported
// relation files) in; recovered storage layout, value types, and guard
// reports out. Every stage runs under one cooperative deadline so a
// contract exceeding its budget aborts cleanly without partial results.

#include "storlift/cfg.hpp"
#include "storlift/constructs.hpp"
#include "storlift/errors.hpp"
#include "storlift/facts.hpp"
#include "storlift/guards.hpp"
#include "storlift/hash_model.hpp"
#include "storlift/instruction.hpp"
#include "storlift/layout.hpp"
#include "storlift/lifter.hpp"
#include "storlift/storage_index.hpp"
#include "storlift/type_inference.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace storlift {

struct AnalysisResult {
  Program program;
  std::vector<HashFact> hashes;
  VarStorIndex storage_index;
  ActualIndex actual_index;
  Constructs constructs;
  StmtToVar stmt_to_var;
  TypeResult types;
  Layout layout;
  std::vector<GuardReport> guards;
};

// Shared back half: from a lifted (or imported) program with recognized
// hashes to layout and guards.
inline AnalysisResult analyze_lifted(Program p, std::vector<HashFact> hashes,
                                     const Deadline& deadline = {}) {
  AnalysisResult r;
  r.program = std::move(p);
  r.hashes = std::move(hashes);
  r.storage_index = compute_var_stor_index(r.program, r.hashes, deadline);
  r.actual_index = compute_actual_index(r.program, r.storage_index);
  deadline.check();
  r.constructs = build_constructs(r.storage_index.arena, r.actual_index);
  r.stmt_to_var = map_statements(r.program, r.storage_index, r.constructs);
  partition_packed(r.program, r.constructs, r.stmt_to_var);
  deadline.check();
  r.types =
      infer_types(r.program, r.stmt_to_var, r.constructs, r.storage_index);
  r.layout = build_layout(r.constructs, r.types);
  r.guards = detect_guards(r.program, r.stmt_to_var, r.constructs);
  deadline.check();
  return r;
}

inline AnalysisResult analyze_bytecode(const std::vector<std::uint8_t>& code,
                                       const Deadline& deadline = {}) {
  Program p = lift_to_ssa(build_cfg(disassemble(code), deadline), deadline);
  fold_all(p, deadline);
  auto hashes = detect_hashes(p, deadline);
  return analyze_lifted(std::move(p), std::move(hashes), deadline);
}

// Relation files carry constants and hash facts already materialized, so
// the imported program goes straight to the storage analyses.
inline AnalysisResult analyze_facts(
    const std::map<std::string, std::string>& files,
    const Deadline& deadline = {}) {
  FactProgram fp = import_facts(files);
  deadline.check();
  return analyze_lifted(std::move(fp.program), std::move(fp.hashes), deadline);
}

}  // namespace storlift
