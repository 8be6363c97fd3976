#pragma once

// Storage layout serialization and comparison. Recovered constructs plus
// value types become a compiler-artifact-compatible JSON document:
//   {"storage":[{"label","offset","slot","type"}...],"types":{...}}
// with decimal slot strings, recursive mapping/array/struct encodings, and
// deterministic generated labels. The comparator scores an inferred layout
// against compiler ground truth with slot-exact matching: a slot counts
// only when every ground-truth variable in it is matched at the same
// offset with the same width and (structurally) the same type.

#include "storlift/constructs.hpp"
#include "storlift/errors.hpp"
#include "storlift/type_inference.hpp"
#include "storlift/word.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace storlift {

struct LayoutMember {
  std::string label;
  Word slot = 0;  // relative to the struct base
  unsigned offset = 0;
  std::string type;

  bool operator==(const LayoutMember&) const = default;
};

struct LayoutType {
  std::string encoding;  // "inplace" | "mapping" | "dynamic_array"
  std::string label;
  unsigned number_of_bytes = 32;
  std::string key;    // mapping
  std::string value;  // mapping
  std::string base;   // dynamic array
  std::vector<LayoutMember> members;  // struct

  bool operator==(const LayoutType&) const = default;
};

struct LayoutEntry {
  std::string label;
  Word slot = 0;
  unsigned offset = 0;
  std::string type;

  bool operator==(const LayoutEntry&) const = default;
};

struct Layout {
  std::vector<LayoutEntry> storage;  // sorted by (slot, offset)
  std::map<std::string, LayoutType> types;

  bool operator==(const Layout&) const = default;
};

namespace detail {

inline std::string slot_tag(const Word& c) {
  // readable labels: small slots in decimal, assembly-style high slots in hex
  if (c <= Word(0xffffffffull)) return to_dec(c);
  return to_hex(c);
}

struct LayoutBuilder {
  const Constructs& cons;
  const TypeResult& tr;
  Layout out;
  std::map<CId, std::vector<CId>> kids;
  std::map<std::string, std::string> struct_ids;  // member signature -> id
  unsigned next_struct = 0;

  LayoutBuilder(const Constructs& c, const TypeResult& t) : cons(c), tr(t) {
    for (CId id : cons.items) {
      const ConTerm& term = cons.arena.term(id);
      if (term.kind != ConKind::Const) kids[term.par].push_back(id);
    }
  }

  const ConTerm& term(CId id) const { return cons.arena.term(id); }

  std::vector<CId> kids_of(CId node, ConKind kind) const {
    std::vector<CId> out_v;
    if (auto it = kids.find(node); it != kids.end())
      for (CId k : it->second)
        if (term(k).kind == kind) out_v.push_back(k);
    return out_v;
  }

  ValueType leaf_type(CId leaf) const {
    if (auto it = tr.types.find(leaf); it != tr.types.end()) return it->second;
    const ConTerm& t = term(leaf);
    unsigned w = t.kind == ConKind::Packed ? unsigned(t.hi) - t.lo + 1 : 32;
    return ValueType::uint_of(w);
  }

  std::string value_type_id(const ValueType& vt) {
    std::string id = "t_" + vt.name();
    if (!out.types.count(id)) {
      LayoutType t;
      t.encoding = "inplace";
      t.label = vt.name();
      t.number_of_bytes = vt.bytes;
      out.types.emplace(id, std::move(t));
    }
    return id;
  }

  std::string label_of(const std::string& type_id) const {
    auto it = out.types.find(type_id);
    return it != out.types.end() ? it->second.label : type_id;
  }

  // Members contributed by one node at one relative slot: its own leaves
  // and containers, in offset order.
  void append_members(std::vector<LayoutMember>& ms, CId node,
                      const Word& rel) {
    auto packed = kids_of(node, ConKind::Packed);
    std::sort(packed.begin(), packed.end(),
              [&](CId a, CId b) { return term(a).lo < term(b).lo; });
    for (CId pk : packed) {
      LayoutMember m;
      m.slot = rel;
      m.offset = term(pk).lo;
      m.type = value_type_id(leaf_type(pk));
      m.label = "member_slot" + to_dec(rel) + "_off" + std::to_string(m.offset);
      ms.push_back(std::move(m));
    }
    for (CId vk : kids_of(node, ConKind::Variable)) {
      LayoutMember m;
      m.slot = rel;
      m.type = value_type_id(leaf_type(vk));
      m.label = "member_slot" + to_dec(rel);
      ms.push_back(std::move(m));
    }
    for (CId mk : kids_of(node, ConKind::Mapping)) {
      LayoutMember m;
      m.slot = rel;
      m.type = mapping_type_id(mk);
      m.label = "member_slot" + to_dec(rel);
      ms.push_back(std::move(m));
    }
    for (CId ak : kids_of(node, ConKind::Array)) {
      LayoutMember m;
      m.slot = rel;
      m.type = array_type_id(ak);
      m.label = "member_slot" + to_dec(rel);
      ms.push_back(std::move(m));
    }
  }

  std::string struct_type_id(const std::vector<LayoutMember>& members,
                             unsigned slots) {
    std::string sig;
    for (const auto& m : members)
      sig += to_dec(m.slot) + ":" + std::to_string(m.offset) + ":" + m.type + ";";
    if (auto it = struct_ids.find(sig); it != struct_ids.end())
      return it->second;
    std::string name = "S" + std::to_string(next_struct++);
    std::string id = "t_struct(" + name + ")storage";
    LayoutType t;
    t.encoding = "inplace";
    t.label = "struct " + name;
    t.number_of_bytes = slots * 32;
    t.members = members;
    out.types.emplace(id, std::move(t));
    struct_ids.emplace(sig, id);
    return id;
  }

  std::string mapping_type_id(CId map_node) {
    ValueType key = ValueType::uint_of(32);
    if (auto it = tr.mapping_keys.find(map_node); it != tr.mapping_keys.end())
      key = it->second;
    std::string key_id = value_type_id(key);
    std::string value_id = content_type(map_node);
    std::string id = "t_mapping(" + key_id + "," + value_id + ")";
    if (!out.types.count(id)) {
      LayoutType t;
      t.encoding = "mapping";
      t.key = key_id;
      t.value = value_id;
      t.label =
          "mapping(" + label_of(key_id) + " => " + label_of(value_id) + ")";
      t.number_of_bytes = 32;
      out.types.emplace(id, std::move(t));
    }
    return id;
  }

  std::string array_type_id(CId array_node) {
    std::string elem_id = content_type(array_node);
    std::string id = "t_array(" + elem_id + ")dyn_storage";
    if (!out.types.count(id)) {
      LayoutType t;
      t.encoding = "dynamic_array";
      t.base = elem_id;
      t.label = label_of(elem_id) + "[]";
      t.number_of_bytes = 32;
      out.types.emplace(id, std::move(t));
    }
    return id;
  }

  // The type of the value stored at the location a construct denotes.
  std::string content_type(CId node) {
    auto offs = kids_of(node, ConKind::Offset);
    if (!offs.empty()) {
      std::sort(offs.begin(), offs.end(),
                [&](CId a, CId b) { return term(a).of < term(b).of; });
      std::vector<LayoutMember> members;
      append_members(members, node, Word(0));
      std::uint64_t max_rel = 0;
      for (CId ok : offs) {
        append_members(members, ok, Word(term(ok).of));
        max_rel = std::max<std::uint64_t>(max_rel, term(ok).of);
      }
      std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
        return a.slot != b.slot ? a.slot < b.slot : a.offset < b.offset;
      });
      return struct_type_id(members, static_cast<unsigned>(max_rel) + 1);
    }
    auto maps = kids_of(node, ConKind::Mapping);
    if (!maps.empty()) return mapping_type_id(maps.front());
    auto arrays = kids_of(node, ConKind::Array);
    if (!arrays.empty()) return array_type_id(arrays.front());
    auto vars = kids_of(node, ConKind::Variable);
    if (!vars.empty()) return value_type_id(leaf_type(vars.front()));
    auto packed = kids_of(node, ConKind::Packed);
    if (!packed.empty()) {
      std::sort(packed.begin(), packed.end(),
                [&](CId a, CId b) { return term(a).lo < term(b).lo; });
      // uniform cells describe one repeated sub-word type; mixed cells are
      // an implicit single-slot struct
      bool uniform = true;
      ValueType first = leaf_type(packed.front());
      unsigned w0 = unsigned(term(packed.front()).hi) - term(packed.front()).lo + 1;
      for (CId pk : packed) {
        unsigned w = unsigned(term(pk).hi) - term(pk).lo + 1;
        if (w != w0 || !(leaf_type(pk) == first)) uniform = false;
      }
      if (uniform) return value_type_id(first);
      std::vector<LayoutMember> members;
      append_members(members, node, Word(0));
      return struct_type_id(members, 1);
    }
    return value_type_id(ValueType::uint_of(32));  // untyped content
  }

  Layout build() {
    std::vector<CId> roots;
    for (CId id : cons.items)
      if (term(id).kind == ConKind::Const) roots.push_back(id);
    std::sort(roots.begin(), roots.end(), [&](CId a, CId b) {
      return term(a).constant < term(b).constant;
    });

    for (CId root : roots) {
      const Word& slot = term(root).constant;
      std::string tag = slot_tag(slot);
      auto maps = kids_of(root, ConKind::Mapping);
      auto arrays = kids_of(root, ConKind::Array);
      if (!maps.empty()) {
        out.storage.push_back(
            {"var_slot" + tag, slot, 0, mapping_type_id(maps.front())});
        continue;
      }
      if (!arrays.empty()) {
        out.storage.push_back(
            {"var_slot" + tag, slot, 0, array_type_id(arrays.front())});
        continue;
      }
      auto packed = kids_of(root, ConKind::Packed);
      std::sort(packed.begin(), packed.end(),
                [&](CId a, CId b) { return term(a).lo < term(b).lo; });
      for (CId pk : packed) {
        unsigned off = term(pk).lo;
        std::string label = "var_slot" + tag;
        if (off != 0) label += "_off" + std::to_string(off);
        out.storage.push_back(
            {label, slot, off, value_type_id(leaf_type(pk))});
      }
      for (CId vk : kids_of(root, ConKind::Variable)) {
        out.storage.push_back(
            {"var_slot" + tag, slot, 0, value_type_id(leaf_type(vk))});
      }
    }
    std::sort(out.storage.begin(), out.storage.end(),
              [](const LayoutEntry& a, const LayoutEntry& b) {
                return a.slot != b.slot ? a.slot < b.slot
                                        : a.offset < b.offset;
              });
    return std::move(out);
  }
};

}  // namespace detail

inline Layout build_layout(const Constructs& cons, const TypeResult& tr) {
  return detail::LayoutBuilder(cons, tr).build();
}

inline nlohmann::ordered_json layout_to_json(const Layout& layout) {
  nlohmann::ordered_json doc;
  doc["storage"] = nlohmann::ordered_json::array();
  for (const auto& e : layout.storage) {
    nlohmann::ordered_json je;
    je["label"] = e.label;
    je["offset"] = e.offset;
    je["slot"] = to_dec(e.slot);
    je["type"] = e.type;
    doc["storage"].push_back(std::move(je));
  }
  doc["types"] = nlohmann::ordered_json::object();
  for (const auto& [id, t] : layout.types) {
    nlohmann::ordered_json jt;
    jt["encoding"] = t.encoding;
    if (!t.base.empty()) jt["base"] = t.base;
    if (!t.key.empty()) {
      jt["key"] = t.key;
      jt["value"] = t.value;
    }
    jt["label"] = t.label;
    if (!t.members.empty()) {
      jt["members"] = nlohmann::ordered_json::array();
      for (const auto& m : t.members) {
        nlohmann::ordered_json jm;
        jm["label"] = m.label;
        jm["offset"] = m.offset;
        jm["slot"] = to_dec(m.slot);
        jm["type"] = m.type;
        jt["members"].push_back(std::move(jm));
      }
    }
    jt["numberOfBytes"] = std::to_string(t.number_of_bytes);
    doc["types"][id] = std::move(jt);
  }
  return doc;
}

// The operation named by the build contract: constructs + types -> JSON.
inline nlohmann::ordered_json emit_layout(const Constructs& cons,
                                          const TypeResult& tr) {
  return layout_to_json(build_layout(cons, tr));
}

namespace detail {

inline Word parse_slot_field(const nlohmann::json& v) {
  if (v.is_number_unsigned()) return Word(v.get<std::uint64_t>());
  if (v.is_string()) {
    if (auto w = try_parse_word(v.get<std::string>())) return *w;
    throw SchemaError("bad slot value: " + v.get<std::string>());
  }
  throw SchemaError("slot must be a string or unsigned number");
}

inline unsigned parse_bytes_field(const nlohmann::json& v) {
  if (v.is_number_unsigned()) return v.get<unsigned>();
  if (v.is_string()) {
    try {
      return static_cast<unsigned>(std::stoul(v.get<std::string>()));
    } catch (const std::exception&) {
      throw SchemaError("bad numberOfBytes: " + v.get<std::string>());
    }
  }
  throw SchemaError("numberOfBytes must be a string or number");
}

}  // namespace detail

// Accepts both this tool's output and the compiler's artifact (whose extra
// fields like astId/contract are ignored).
inline Layout parse_layout(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("storage") ||
      !doc["storage"].is_array())
    throw SchemaError("layout document must contain a storage array");
  Layout out;
  for (const auto& je : doc["storage"]) {
    if (!je.is_object() || !je.contains("slot") || !je.contains("type"))
      throw SchemaError("storage entry must have slot and type");
    LayoutEntry e;
    e.label = je.value("label", std::string{});
    e.slot = detail::parse_slot_field(je["slot"]);
    e.offset = je.value("offset", 0u);
    if (e.offset > 31) throw SchemaError("offset out of range");
    e.type = je["type"].get<std::string>();
    out.storage.push_back(std::move(e));
  }
  if (doc.contains("types") && doc["types"].is_object()) {
    for (const auto& [id, jt] : doc["types"].items()) {
      LayoutType t;
      t.encoding = jt.value("encoding", std::string{"inplace"});
      t.label = jt.value("label", std::string{});
      if (jt.contains("numberOfBytes"))
        t.number_of_bytes = detail::parse_bytes_field(jt["numberOfBytes"]);
      t.key = jt.value("key", std::string{});
      t.value = jt.value("value", std::string{});
      t.base = jt.value("base", std::string{});
      if (jt.contains("members") && jt["members"].is_array()) {
        for (const auto& jm : jt["members"]) {
          LayoutMember m;
          m.label = jm.value("label", std::string{});
          m.slot = jm.contains("slot") ? detail::parse_slot_field(jm["slot"])
                                       : Word(0);
          m.offset = jm.value("offset", 0u);
          m.type = jm.value("type", std::string{});
          t.members.push_back(std::move(m));
        }
      }
      out.types.emplace(id, std::move(t));
    }
  }
  std::sort(out.storage.begin(), out.storage.end(),
            [](const LayoutEntry& a, const LayoutEntry& b) {
              return a.slot != b.slot ? a.slot < b.slot : a.offset < b.offset;
            });
  return out;
}

struct SlotVerdict {
  Word slot = 0;
  std::string expected;
  std::string got;
  std::string verdict;  // "match" | "mismatch" | "missing" | "extra"
};

struct ComparisonReport {
  std::size_t ground_truth_count = 0;
  std::size_t report_count = 0;
  std::size_t success_count = 0;
  double precision = 1.0;
  double recall = 1.0;
  std::vector<SlotVerdict> per_slot;

  bool exact() const {
    return success_count == ground_truth_count &&
           report_count == ground_truth_count;
  }
};

namespace detail {

// Structural type equivalence across two documents' type tables: value
// types by identifier, containers recursively, structs by member shape
// (names and internal identifiers never matter).
inline bool type_equal(const Layout& a, const std::string& ida,
                       const Layout& b, const std::string& idb, int depth) {
  if (depth > 32) return false;
  auto ta = a.types.find(ida);
  auto tb = b.types.find(idb);
  if (ta == a.types.end() || tb == b.types.end()) return ida == idb;
  const LayoutType& x = ta->second;
  const LayoutType& y = tb->second;
  if (x.encoding != y.encoding) return false;
  if (x.encoding == "mapping")
    return type_equal(a, x.key, b, y.key, depth + 1) &&
           type_equal(a, x.value, b, y.value, depth + 1);
  if (x.encoding == "dynamic_array")
    return type_equal(a, x.base, b, y.base, depth + 1);
  if (!x.members.empty() || !y.members.empty()) {
    if (x.members.size() != y.members.size()) return false;
    if (x.number_of_bytes != y.number_of_bytes) return false;
    for (std::size_t i = 0; i < x.members.size(); ++i) {
      const auto& mx = x.members[i];
      const auto& my = y.members[i];
      if (mx.slot != my.slot || mx.offset != my.offset) return false;
      if (!type_equal(a, mx.type, b, my.type, depth + 1)) return false;
    }
    return true;
  }
  // plain value types: identifier carries family and width
  return ida == idb && x.number_of_bytes == y.number_of_bytes;
}

}  // namespace detail

// Slot-exact scoring. With exclude_unused, ground-truth variables in slots
// the analysis never saw at all are dropped before scoring (a variable the
// bytecode never touches leaves no trace to recover).
inline ComparisonReport compare_layouts(const Layout& inferred,
                                        const Layout& truth,
                                        bool exclude_unused = false) {
  std::map<Word, std::vector<const LayoutEntry*>> gt, inf;
  for (const auto& e : truth.storage) gt[e.slot].push_back(&e);
  for (const auto& e : inferred.storage) inf[e.slot].push_back(&e);

  if (exclude_unused) {
    for (auto it = gt.begin(); it != gt.end();)
      it = inf.count(it->first) ? std::next(it) : gt.erase(it);
  }

  ComparisonReport r;
  for (const auto& [slot, entries] : gt) r.ground_truth_count += entries.size();
  r.report_count = inferred.storage.size();
  if (exclude_unused) {
    r.report_count = 0;
    for (const auto& [slot, entries] : inf)
      if (gt.count(slot)) r.report_count += entries.size();
  }

  auto describe = [](const std::vector<const LayoutEntry*>* es) {
    std::string s;
    if (!es) return s;
    for (const auto* e : *es) {
      if (!s.empty()) s += ", ";
      s += "@" + std::to_string(e->offset) + ":" + e->type;
    }
    return s;
  };

  std::set<Word> slots;
  for (const auto& [s, _] : gt) slots.insert(s);
  for (const auto& [s, _] : inf) slots.insert(s);

  for (const Word& slot : slots) {
    auto git = gt.find(slot);
    auto iit = inf.find(slot);
    SlotVerdict v;
    v.slot = slot;
    v.expected = describe(git != gt.end() ? &git->second : nullptr);
    v.got = describe(iit != inf.end() ? &iit->second : nullptr);
    if (git == gt.end()) {
      v.verdict = "extra";
    } else if (iit == inf.end()) {
      v.verdict = "missing";
    } else {
      bool all = true;
      for (const auto* ge : git->second) {
        bool matched = false;
        for (const auto* ie : iit->second)
          if (ie->offset == ge->offset &&
              detail::type_equal(inferred, ie->type, truth, ge->type, 0)) {
            matched = true;
            break;
          }
        if (!matched) all = false;
      }
      v.verdict = all ? "match" : "mismatch";
      if (all) r.success_count += git->second.size();
    }
    r.per_slot.push_back(std::move(v));
  }

  r.precision = r.report_count
                    ? static_cast<double>(r.success_count) / r.report_count
                    : 1.0;
  r.recall = r.ground_truth_count ? static_cast<double>(r.success_count) /
                                        r.ground_truth_count
                                  : 1.0;
  return r;
}

inline nlohmann::ordered_json report_to_json(const ComparisonReport& r) {
  nlohmann::ordered_json doc;
  doc["groundTruthCount"] = r.ground_truth_count;
  doc["reportCount"] = r.report_count;
  doc["successCount"] = r.success_count;
  doc["precision"] = r.precision;
  doc["recall"] = r.recall;
  doc["exact"] = r.exact();
  doc["perSlot"] = nlohmann::ordered_json::array();
  for (const auto& v : r.per_slot) {
    nlohmann::ordered_json jv;
    jv["slot"] = to_dec(v.slot);
    jv["expected"] = v.expected;
    jv["got"] = v.got;
    jv["verdict"] = v.verdict;
    doc["perSlot"].push_back(std::move(jv));
  }
  return doc;
}

}  // namespace storlift
