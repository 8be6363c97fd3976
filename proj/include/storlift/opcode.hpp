#pragma once

// EVM opcode table (through Cancun) plus the synthetic operations used by
// the register IR. Stack arity here describes the plain pop/push counts;
// DUP/SWAP are modeled structurally by the lifter, not through this table.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace storlift {

enum Op : std::uint16_t {
  OP_STOP = 0x00,
  OP_ADD = 0x01,
  OP_MUL = 0x02,
  OP_SUB = 0x03,
  OP_DIV = 0x04,
  OP_SDIV = 0x05,
  OP_MOD = 0x06,
  OP_SMOD = 0x07,
  OP_ADDMOD = 0x08,
  OP_MULMOD = 0x09,
  OP_EXP = 0x0a,
  OP_SIGNEXTEND = 0x0b,
  OP_LT = 0x10,
  OP_GT = 0x11,
  OP_SLT = 0x12,
  OP_SGT = 0x13,
  OP_EQ = 0x14,
  OP_ISZERO = 0x15,
  OP_AND = 0x16,
  OP_OR = 0x17,
  OP_XOR = 0x18,
  OP_NOT = 0x19,
  OP_BYTE = 0x1a,
  OP_SHL = 0x1b,
  OP_SHR = 0x1c,
  OP_SAR = 0x1d,
  OP_SHA3 = 0x20,
  OP_ADDRESS = 0x30,
  OP_BALANCE = 0x31,
  OP_ORIGIN = 0x32,
  OP_CALLER = 0x33,
  OP_CALLVALUE = 0x34,
  OP_CALLDATALOAD = 0x35,
  OP_CALLDATASIZE = 0x36,
  OP_CALLDATACOPY = 0x37,
  OP_CODESIZE = 0x38,
  OP_CODECOPY = 0x39,
  OP_GASPRICE = 0x3a,
  OP_EXTCODESIZE = 0x3b,
  OP_EXTCODECOPY = 0x3c,
  OP_RETURNDATASIZE = 0x3d,
  OP_RETURNDATACOPY = 0x3e,
  OP_EXTCODEHASH = 0x3f,
  OP_BLOCKHASH = 0x40,
  OP_COINBASE = 0x41,
  OP_TIMESTAMP = 0x42,
  OP_NUMBER = 0x43,
  OP_PREVRANDAO = 0x44,
  OP_GASLIMIT = 0x45,
  OP_CHAINID = 0x46,
  OP_SELFBALANCE = 0x47,
  OP_BASEFEE = 0x48,
  OP_BLOBHASH = 0x49,
  OP_BLOBBASEFEE = 0x4a,
  OP_POP = 0x50,
  OP_MLOAD = 0x51,
  OP_MSTORE = 0x52,
  OP_MSTORE8 = 0x53,
  OP_SLOAD = 0x54,
  OP_SSTORE = 0x55,
  OP_JUMP = 0x56,
  OP_JUMPI = 0x57,
  OP_PC = 0x58,
  OP_MSIZE = 0x59,
  OP_GAS = 0x5a,
  OP_JUMPDEST = 0x5b,
  OP_TLOAD = 0x5c,
  OP_TSTORE = 0x5d,
  OP_MCOPY = 0x5e,
  OP_PUSH0 = 0x5f,
  OP_PUSH1 = 0x60,
  OP_PUSH32 = 0x7f,
  OP_DUP1 = 0x80,
  OP_DUP16 = 0x8f,
  OP_SWAP1 = 0x90,
  OP_SWAP16 = 0x9f,
  OP_LOG0 = 0xa0,
  OP_LOG4 = 0xa4,
  OP_CREATE = 0xf0,
  OP_CALL = 0xf1,
  OP_CALLCODE = 0xf2,
  OP_RETURN = 0xf3,
  OP_DELEGATECALL = 0xf4,
  OP_CREATE2 = 0xf5,
  OP_STATICCALL = 0xfa,
  OP_REVERT = 0xfd,
  OP_INVALID = 0xfe,
  OP_SELFDESTRUCT = 0xff,
  // Synthetic IR operations (no bytecode encoding).
  OP_PHI = 0x100,
  OP_CONST = 0x101,
  OP_UNDEF = 0x102,
};

struct OpInfo {
  const char* name = nullptr;  // null for undefined opcodes
  std::uint8_t pops = 0;
  std::uint8_t pushes = 0;
};

namespace detail {

inline std::array<OpInfo, 256> make_op_table() {
  std::array<OpInfo, 256> t{};
  auto set = [&](std::uint16_t op, const char* name, std::uint8_t pops, std::uint8_t pushes) {
    t[op] = OpInfo{name, pops, pushes};
  };
  set(OP_STOP, "STOP", 0, 0);
  set(OP_ADD, "ADD", 2, 1);
  set(OP_MUL, "MUL", 2, 1);
  set(OP_SUB, "SUB", 2, 1);
  set(OP_DIV, "DIV", 2, 1);
  set(OP_SDIV, "SDIV", 2, 1);
  set(OP_MOD, "MOD", 2, 1);
  set(OP_SMOD, "SMOD", 2, 1);
  set(OP_ADDMOD, "ADDMOD", 3, 1);
  set(OP_MULMOD, "MULMOD", 3, 1);
  set(OP_EXP, "EXP", 2, 1);
  set(OP_SIGNEXTEND, "SIGNEXTEND", 2, 1);
  set(OP_LT, "LT", 2, 1);
  set(OP_GT, "GT", 2, 1);
  set(OP_SLT, "SLT", 2, 1);
  set(OP_SGT, "SGT", 2, 1);
  set(OP_EQ, "EQ", 2, 1);
  set(OP_ISZERO, "ISZERO", 1, 1);
  set(OP_AND, "AND", 2, 1);
  set(OP_OR, "OR", 2, 1);
  set(OP_XOR, "XOR", 2, 1);
  set(OP_NOT, "NOT", 1, 1);
  set(OP_BYTE, "BYTE", 2, 1);
  set(OP_SHL, "SHL", 2, 1);
  set(OP_SHR, "SHR", 2, 1);
  set(OP_SAR, "SAR", 2, 1);
  set(OP_SHA3, "SHA3", 2, 1);
  set(OP_ADDRESS, "ADDRESS", 0, 1);
  set(OP_BALANCE, "BALANCE", 1, 1);
  set(OP_ORIGIN, "ORIGIN", 0, 1);
  set(OP_CALLER, "CALLER", 0, 1);
  set(OP_CALLVALUE, "CALLVALUE", 0, 1);
  set(OP_CALLDATALOAD, "CALLDATALOAD", 1, 1);
  set(OP_CALLDATASIZE, "CALLDATASIZE", 0, 1);
  set(OP_CALLDATACOPY, "CALLDATACOPY", 3, 0);
  set(OP_CODESIZE, "CODESIZE", 0, 1);
  set(OP_CODECOPY, "CODECOPY", 3, 0);
  set(OP_GASPRICE, "GASPRICE", 0, 1);
  set(OP_EXTCODESIZE, "EXTCODESIZE", 1, 1);
  set(OP_EXTCODECOPY, "EXTCODECOPY", 4, 0);
  set(OP_RETURNDATASIZE, "RETURNDATASIZE", 0, 1);
  set(OP_RETURNDATACOPY, "RETURNDATACOPY", 3, 0);
  set(OP_EXTCODEHASH, "EXTCODEHASH", 1, 1);
  set(OP_BLOCKHASH, "BLOCKHASH", 1, 1);
  set(OP_COINBASE, "COINBASE", 0, 1);
  set(OP_TIMESTAMP, "TIMESTAMP", 0, 1);
  set(OP_NUMBER, "NUMBER", 0, 1);
  set(OP_PREVRANDAO, "PREVRANDAO", 0, 1);
  set(OP_GASLIMIT, "GASLIMIT", 0, 1);
  set(OP_CHAINID, "CHAINID", 0, 1);
  set(OP_SELFBALANCE, "SELFBALANCE", 0, 1);
  set(OP_BASEFEE, "BASEFEE", 0, 1);
  set(OP_BLOBHASH, "BLOBHASH", 1, 1);
  set(OP_BLOBBASEFEE, "BLOBBASEFEE", 0, 1);
  set(OP_POP, "POP", 1, 0);
  set(OP_MLOAD, "MLOAD", 1, 1);
  set(OP_MSTORE, "MSTORE", 2, 0);
  set(OP_MSTORE8, "MSTORE8", 2, 0);
  set(OP_SLOAD, "SLOAD", 1, 1);
  set(OP_SSTORE, "SSTORE", 2, 0);
  set(OP_JUMP, "JUMP", 1, 0);
  set(OP_JUMPI, "JUMPI", 2, 0);
  set(OP_PC, "PC", 0, 1);
  set(OP_MSIZE, "MSIZE", 0, 1);
  set(OP_GAS, "GAS", 0, 1);
  set(OP_JUMPDEST, "JUMPDEST", 0, 0);
  set(OP_TLOAD, "TLOAD", 1, 1);
  set(OP_TSTORE, "TSTORE", 2, 0);
  set(OP_MCOPY, "MCOPY", 3, 0);
  set(OP_PUSH0, "PUSH0", 0, 1);
  for (std::uint16_t i = 0; i < 32; ++i) {
    static const char* push_names[] = {
        "PUSH1",  "PUSH2",  "PUSH3",  "PUSH4",  "PUSH5",  "PUSH6",  "PUSH7",  "PUSH8",
        "PUSH9",  "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14", "PUSH15", "PUSH16",
        "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22", "PUSH23", "PUSH24",
        "PUSH25", "PUSH26", "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31", "PUSH32"};
    set(OP_PUSH1 + i, push_names[i], 0, 1);
  }
  for (std::uint16_t i = 0; i < 16; ++i) {
    static const char* dup_names[] = {"DUP1",  "DUP2",  "DUP3",  "DUP4", "DUP5",  "DUP6",
                                      "DUP7",  "DUP8",  "DUP9",  "DUP10", "DUP11", "DUP12",
                                      "DUP13", "DUP14", "DUP15", "DUP16"};
    static const char* swap_names[] = {"SWAP1",  "SWAP2",  "SWAP3",  "SWAP4", "SWAP5",  "SWAP6",
                                       "SWAP7",  "SWAP8",  "SWAP9",  "SWAP10", "SWAP11", "SWAP12",
                                       "SWAP13", "SWAP14", "SWAP15", "SWAP16"};
    set(OP_DUP1 + i, dup_names[i], static_cast<std::uint8_t>(i + 1),
        static_cast<std::uint8_t>(i + 2));
    set(OP_SWAP1 + i, swap_names[i], static_cast<std::uint8_t>(i + 2),
        static_cast<std::uint8_t>(i + 2));
  }
  for (std::uint16_t i = 0; i < 5; ++i) {
    static const char* log_names[] = {"LOG0", "LOG1", "LOG2", "LOG3", "LOG4"};
    set(OP_LOG0 + i, log_names[i], static_cast<std::uint8_t>(i + 2), 0);
  }
  set(OP_CREATE, "CREATE", 3, 1);
  set(OP_CALL, "CALL", 7, 1);
  set(OP_CALLCODE, "CALLCODE", 7, 1);
  set(OP_RETURN, "RETURN", 2, 0);
  set(OP_DELEGATECALL, "DELEGATECALL", 6, 1);
  set(OP_CREATE2, "CREATE2", 4, 1);
  set(OP_STATICCALL, "STATICCALL", 6, 1);
  set(OP_REVERT, "REVERT", 2, 0);
  set(OP_INVALID, "INVALID", 0, 0);
  set(OP_SELFDESTRUCT, "SELFDESTRUCT", 1, 0);
  return t;
}

}  // namespace detail

inline const OpInfo& op_info(std::uint8_t op) {
  static const std::array<OpInfo, 256> table = detail::make_op_table();
  return table[op];
}

inline bool op_defined(std::uint8_t op) { return op_info(op).name != nullptr; }

inline bool is_push(std::uint8_t op) { return op >= OP_PUSH1 && op <= OP_PUSH32; }
inline unsigned push_size(std::uint8_t op) { return is_push(op) ? op - OP_PUSH1 + 1u : 0u; }
inline bool is_dup(std::uint8_t op) { return op >= OP_DUP1 && op <= OP_DUP16; }
inline bool is_swap(std::uint8_t op) { return op >= OP_SWAP1 && op <= OP_SWAP16; }

// Instructions that end a basic block with no fallthrough successor.
inline bool is_terminator(std::uint8_t op) {
  switch (op) {
    case OP_STOP:
    case OP_JUMP:
    case OP_RETURN:
    case OP_REVERT:
    case OP_INVALID:
    case OP_SELFDESTRUCT:
      return true;
    default:
      return !op_defined(op);  // undefined opcodes abort execution
  }
}

inline std::string op_name(std::uint16_t op) {
  if (op == OP_PHI) return "PHI";
  if (op == OP_CONST) return "CONST";
  if (op == OP_UNDEF) return "UNDEF";
  if (op < 256 && op_info(static_cast<std::uint8_t>(op)).name)
    return op_info(static_cast<std::uint8_t>(op)).name;
  static const char* hex = "0123456789abcdef";
  std::string s = "UNDEFINED_0x";
  s += hex[(op >> 4) & 0xf];
  s += hex[op & 0xf];
  return s;
}

inline std::optional<std::uint16_t> op_from_name(std::string_view name) {
  static const std::unordered_map<std::string, std::uint16_t> m = [] {
    std::unordered_map<std::string, std::uint16_t> r;
    for (unsigned i = 0; i < 256; ++i)
      if (op_info(static_cast<std::uint8_t>(i)).name)
        r.emplace(op_info(static_cast<std::uint8_t>(i)).name, i);
    r.emplace("PHI", OP_PHI);
    r.emplace("CONST", OP_CONST);
    r.emplace("UNDEF", OP_UNDEF);
    return r;
  }();
  auto it = m.find(std::string(name));
  if (it == m.end()) return std::nullopt;
  return it->second;
}

}  // namespace storlift
