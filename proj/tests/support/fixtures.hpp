#pragma once

// Shared bytecode fixtures: hand-assembled runtime contracts reproducing
// the compiler's documented emission patterns, paired with ground-truth
// storage layouts in the compiler's own artifact schema. corpus() returns
// the full set; the corpus test keeps tests/fixtures/corpus/* in sync.

#include "asm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tfix {

using storlift::Word;
using tsup::Asm;
using namespace storlift;  // opcode constants

inline const Word kFixLow20 = (Word(1) << 160) - 1;
inline const Word kFixKeep20to31 = evm_not(kFixLow20);
inline const Word kFixByte20 = Word(0xff) << 160;
inline const Word kFixClearByte20 = evm_not(kFixByte20);

// Six-variable sample: uint256 counter, packed owner+flag, uint256[]
// array, mapping(address => bool), and a two-level mapping to a two-slot
// struct.
inline std::vector<std::uint8_t> sample_contract() {
  Asm a;
  // slot 0: counter increment
  a.push(0).op(OP_SLOAD).op(OP_CALLVALUE).op(OP_ADD).push(0).op(OP_SSTORE);
  // slot 1, bytes 0..19: owner read compared against the caller
  a.push(1).op(OP_SLOAD).push(kFixLow20).op(OP_AND);
  a.op(OP_CALLER).op(OP_EQ).op(OP_POP);
  // slot 1, byte 20: flag read, normalized with a double ISZERO
  a.push(1).op(OP_SLOAD).push(0xa0).op(OP_SHR).push(0xff).op(OP_AND);
  a.op(OP_ISZERO).op(OP_ISZERO).op(OP_POP);
  // slot 1: owner write (clear low 20 bytes, insert masked caller)
  a.push(1).op(OP_SLOAD).push(kFixKeep20to31).op(OP_AND);
  a.op(OP_CALLER).push(kFixLow20).op(OP_AND).op(OP_OR);
  a.push(1).op(OP_SSTORE);
  // slot 1: flag write (clear byte 20, insert constant true)
  a.push(1).op(OP_SLOAD).push(kFixClearByte20).op(OP_AND);
  a.push(Word(1) << 160).op(OP_OR).push(1).op(OP_SSTORE);
  // slot 2: dynamic array -- length read, then element write
  a.push(2).op(OP_SLOAD).op(OP_POP);
  a.push(0x24).op(OP_CALLDATALOAD);  // value to store
  a.push(2).push(0).op(OP_MSTORE);
  a.push(0x20).push(0).op(OP_SHA3);
  a.push(4).op(OP_CALLDATALOAD).op(OP_ADD).op(OP_SSTORE);
  // slot 3: mapping keyed by the caller, value used as a flag
  a.op(OP_CALLER).push(0).op(OP_MSTORE);
  a.push(3).push(0x20).op(OP_MSTORE);
  a.push(0x40).push(0).op(OP_SHA3).op(OP_SLOAD);
  a.op(OP_ISZERO).op(OP_ISZERO).op(OP_POP);
  // slot 4: mapping of mapping to a two-slot struct
  a.push(4).op(OP_CALLDATALOAD).push(0).op(OP_MSTORE);
  a.push(4).push(0x20).op(OP_MSTORE);
  a.push(0x40).push(0).op(OP_SHA3);  // inner slot
  a.push(0x24).op(OP_CALLDATALOAD).push(0).op(OP_MSTORE);
  a.push(0x20).op(OP_MSTORE);
  a.push(0x40).push(0).op(OP_SHA3);  // struct base
  a.op(OP_DUP1).op(OP_SLOAD).op(OP_POP);
  a.push(1).op(OP_ADD).op(OP_SLOAD).op(OP_POP);
  a.op(OP_STOP);
  return a.build();
}

// The same contract as the compiler would describe it, extra fields
// (astId, contract) and all.
inline const char* sample_ground_truth() {
  return R"json({
  "storage": [
    {"astId": 3, "contract": "sample.sol:Sample", "label": "counter",
     "offset": 0, "slot": "0", "type": "t_uint256"},
    {"astId": 5, "contract": "sample.sol:Sample", "label": "owner",
     "offset": 0, "slot": "1", "type": "t_address"},
    {"astId": 7, "contract": "sample.sol:Sample", "label": "paused",
     "offset": 20, "slot": "1", "type": "t_bool"},
    {"astId": 10, "contract": "sample.sol:Sample", "label": "values",
     "offset": 0, "slot": "2", "type": "t_array(t_uint256)dyn_storage"},
    {"astId": 14, "contract": "sample.sol:Sample", "label": "allowed",
     "offset": 0, "slot": "3", "type": "t_mapping(t_address,t_bool)"},
    {"astId": 22, "contract": "sample.sol:Sample", "label": "pairs",
     "offset": 0, "slot": "4",
     "type": "t_mapping(t_uint256,t_mapping(t_uint256,t_struct(Pair)18_storage))"}
  ],
  "types": {
    "t_address": {"encoding": "inplace", "label": "address",
                  "numberOfBytes": "20"},
    "t_bool": {"encoding": "inplace", "label": "bool", "numberOfBytes": "1"},
    "t_uint256": {"encoding": "inplace", "label": "uint256",
                  "numberOfBytes": "32"},
    "t_array(t_uint256)dyn_storage": {"encoding": "dynamic_array",
      "base": "t_uint256", "label": "uint256[]", "numberOfBytes": "32"},
    "t_mapping(t_address,t_bool)": {"encoding": "mapping",
      "key": "t_address", "label": "mapping(address => bool)",
      "numberOfBytes": "32", "value": "t_bool"},
    "t_mapping(t_uint256,t_struct(Pair)18_storage)": {"encoding": "mapping",
      "key": "t_uint256",
      "label": "mapping(uint256 => struct Sample.Pair)",
      "numberOfBytes": "32", "value": "t_struct(Pair)18_storage"},
    "t_mapping(t_uint256,t_mapping(t_uint256,t_struct(Pair)18_storage))": {
      "encoding": "mapping", "key": "t_uint256",
      "label": "mapping(uint256 => mapping(uint256 => struct Sample.Pair))",
      "numberOfBytes": "32",
      "value": "t_mapping(t_uint256,t_struct(Pair)18_storage)"},
    "t_struct(Pair)18_storage": {"encoding": "inplace",
      "label": "struct Sample.Pair", "numberOfBytes": "64",
      "members": [
        {"astId": 16, "contract": "sample.sol:Sample", "label": "a",
         "offset": 0, "slot": "0", "type": "t_uint256"},
        {"astId": 18, "contract": "sample.sol:Sample", "label": "b",
         "offset": 0, "slot": "1", "type": "t_uint256"}
      ]}
  }
})json";
}

namespace fxd {  // individual corpus contracts

// uint128 lo; uint128 hi;
inline std::vector<std::uint8_t> packed_two() {
  const Word low16 = (Word(1) << 128) - 1;
  Asm a;
  a.push(0).op(OP_SLOAD).push(low16).op(OP_AND);
  a.op(OP_CALLVALUE).op(OP_ADD).op(OP_POP);
  a.push(0).op(OP_SLOAD).push(128).op(OP_SHR);
  a.op(OP_CALLVALUE).op(OP_ADD).op(OP_POP);
  a.push(0).op(OP_SLOAD).push(evm_not(low16)).op(OP_AND);
  a.op(OP_CALLVALUE).push(low16).op(OP_AND).op(OP_OR).push(0).op(OP_SSTORE);
  a.push(0).op(OP_SLOAD).push(low16).op(OP_AND);
  a.op(OP_CALLVALUE).push(128).op(OP_SHL).op(OP_OR).push(0).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

// uint64 a; uint64 b; uint64 c; uint64 d;
inline std::vector<std::uint8_t> packed_four() {
  const Word low8 = (Word(1) << 64) - 1;
  Asm a;
  for (unsigned i = 0; i < 4; ++i) {
    unsigned shift = 64 * i;
    // read: extract cell i, use arithmetically
    a.push(0).op(OP_SLOAD);
    if (shift) a.push(shift).op(OP_SHR);
    if (i < 3) a.push(low8).op(OP_AND);
    a.op(OP_CALLVALUE).op(OP_ADD).op(OP_POP);
    // write: read-modify-write of cell i
    a.push(0).op(OP_SLOAD).push(evm_not(low8 << shift)).op(OP_AND);
    a.op(OP_CALLVALUE).push(low8).op(OP_AND);
    if (shift) a.push(shift).op(OP_SHL);
    a.op(OP_OR).push(0).op(OP_SSTORE);
  }
  a.op(OP_STOP);
  return a.build();
}

// address who; uint64 amount; bool ok;
inline std::vector<std::uint8_t> packed_mixed() {
  const Word low8 = (Word(1) << 64) - 1;
  Asm a;
  // who [0,19]
  a.push(0).op(OP_SLOAD).push(kFixLow20).op(OP_AND);
  a.op(OP_CALLER).op(OP_EQ).op(OP_POP);
  a.push(0).op(OP_SLOAD).push(kFixKeep20to31).op(OP_AND);
  a.op(OP_CALLER).push(kFixLow20).op(OP_AND).op(OP_OR).push(0).op(OP_SSTORE);
  // amount [20,27]
  a.push(0).op(OP_SLOAD).push(160).op(OP_SHR).push(low8).op(OP_AND);
  a.op(OP_CALLVALUE).op(OP_ADD).op(OP_POP);
  a.push(0).op(OP_SLOAD).push(evm_not(low8 << 160)).op(OP_AND);
  a.op(OP_CALLVALUE).push(low8).op(OP_AND).push(160).op(OP_SHL);
  a.op(OP_OR).push(0).op(OP_SSTORE);
  // ok [28,28]
  a.push(0).op(OP_SLOAD).push(224).op(OP_SHR).push(0xff).op(OP_AND);
  a.op(OP_ISZERO).op(OP_ISZERO).op(OP_POP);
  a.push(0).op(OP_SLOAD).push(evm_not(Word(0xff) << 224)).op(OP_AND);
  a.push(Word(1) << 224).op(OP_OR).push(0).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

// int256 balance; int32 delta;
inline std::vector<std::uint8_t> signed_types() {
  const Word low4 = (Word(1) << 32) - 1;
  Asm a;
  a.push(0).op(OP_SLOAD).op(OP_CALLVALUE).op(OP_SLT).op(OP_POP);
  a.push(0).op(OP_SLOAD).push(1).op(OP_SAR).push(0).op(OP_SSTORE);
  a.push(1).op(OP_SLOAD).push(3).op(OP_SIGNEXTEND);
  a.op(OP_CALLVALUE).op(OP_SLT).op(OP_POP);
  a.push(1).op(OP_SLOAD).push(evm_not(low4)).op(OP_AND);
  a.op(OP_CALLVALUE).push(low4).op(OP_AND).op(OP_OR).push(1).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

// address[] holders;
inline std::vector<std::uint8_t> address_array() {
  Asm a;
  a.push(0).op(OP_SLOAD).op(OP_POP);  // length
  a.push(0).push(0).op(OP_MSTORE);
  a.push(0x20).push(0).op(OP_SHA3);
  a.push(4).op(OP_CALLDATALOAD).op(OP_ADD);  // element slot
  a.op(OP_DUP1).op(OP_SLOAD).push(kFixLow20).op(OP_AND);
  a.op(OP_CALLER).op(OP_EQ).op(OP_POP);
  a.op(OP_CALLER).push(kFixLow20).op(OP_AND);
  a.op(OP_SWAP1).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

// struct Item { uint256 a; uint256 b; } Item[] items;
inline std::vector<std::uint8_t> struct_array() {
  Asm a;
  a.push(0).op(OP_SLOAD).op(OP_POP);  // length
  a.push(0).push(0).op(OP_MSTORE);
  a.push(0x20).push(0).op(OP_SHA3);                     // data start
  a.push(4).op(OP_CALLDATALOAD).push(2).op(OP_MUL);     // stride 2
  a.op(OP_ADD);                                         // element base
  a.op(OP_DUP1).op(OP_SLOAD).op(OP_POP);                // member a
  a.push(1).op(OP_ADD);                                 // member b slot
  a.op(OP_DUP1).op(OP_SLOAD).op(OP_CALLVALUE).op(OP_ADD);
  a.op(OP_SWAP1).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

// mapping(address => uint256) balances;
inline std::vector<std::uint8_t> mapping_uint_value() {
  Asm a;
  a.op(OP_CALLER).push(0).op(OP_MSTORE);
  a.push(0).push(0x20).op(OP_MSTORE);
  a.push(0x40).push(0).op(OP_SHA3);
  a.op(OP_DUP1).op(OP_SLOAD).op(OP_CALLVALUE).op(OP_ADD);
  a.op(OP_SWAP1).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

// mapping(uint256 => mapping(address => mapping(uint256 => uint256))) cube;
inline std::vector<std::uint8_t> mapping_nested3() {
  Asm a;
  a.push(4).op(OP_CALLDATALOAD).push(0).op(OP_MSTORE);
  a.push(5).push(0x20).op(OP_MSTORE);
  a.push(0x40).push(0).op(OP_SHA3);  // level 1
  a.op(OP_CALLER).push(0).op(OP_MSTORE);
  a.push(0x20).op(OP_MSTORE);
  a.push(0x40).push(0).op(OP_SHA3);  // level 2
  a.push(0x24).op(OP_CALLDATALOAD).push(0).op(OP_MSTORE);
  a.push(0x20).op(OP_MSTORE);
  a.push(0x40).push(0).op(OP_SHA3);  // value slot
  a.op(OP_DUP1).op(OP_SLOAD).op(OP_CALLVALUE).op(OP_ADD);
  a.op(OP_SWAP1).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

// struct Entry { address who; bool ok; } mapping(uint256 => Entry) entries;
inline std::vector<std::uint8_t> mapping_packed_struct() {
  Asm a;
  a.push(4).op(OP_CALLDATALOAD).push(0).op(OP_MSTORE);
  a.push(0).push(0x20).op(OP_MSTORE);
  a.push(0x40).push(0).op(OP_SHA3);  // value slot
  a.op(OP_DUP1).op(OP_SLOAD).push(kFixLow20).op(OP_AND);
  a.op(OP_CALLER).op(OP_EQ).op(OP_POP);
  a.op(OP_DUP1).op(OP_SLOAD).push(0xa0).op(OP_SHR).push(0xff).op(OP_AND);
  a.op(OP_ISZERO).op(OP_ISZERO).op(OP_POP);
  a.op(OP_DUP1).op(OP_SLOAD).push(kFixKeep20to31).op(OP_AND);
  a.op(OP_CALLER).push(kFixLow20).op(OP_AND).op(OP_OR);
  a.op(OP_DUP1 + 1).op(OP_SSTORE);
  a.op(OP_DUP1).op(OP_SLOAD).push(kFixClearByte20).op(OP_AND);
  a.push(Word(1) << 160).op(OP_OR).op(OP_DUP1 + 1).op(OP_SSTORE);
  a.op(OP_POP).op(OP_STOP);
  return a.build();
}

inline const char* erc1967_admin_slot_hex() {
  return "0xb53127684a568b3173ae13b9f8a6016e243e63b6e8ee1178d6a717850b5d6103";
}

// Proxy admin pattern: fixed high slot, masked read gating a masked write.
inline std::vector<std::uint8_t> erc1967() {
  const Word admin = parse_word(erc1967_admin_slot_hex());
  Asm a;
  a.push(admin).op(OP_SLOAD).push(kFixLow20).op(OP_AND);
  a.op(OP_CALLER).op(OP_EQ).push_label("ok").op(OP_JUMPI);
  a.push(0).push(0).op(OP_REVERT);
  a.jumpdest("ok");
  a.push(4).op(OP_CALLDATALOAD).push(kFixLow20).op(OP_AND);
  a.push(admin).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

// uint256 _status; uint256 total;  -- the standard mutex modifier
inline std::vector<std::uint8_t> guard(bool with_unlock) {
  Asm a;
  a.push(0).op(OP_SLOAD).push(1).op(OP_EQ);
  a.push_label("pass").op(OP_JUMPI);
  a.push(0).push(0).op(OP_REVERT);
  a.jumpdest("pass");
  a.push(2).push(0).op(OP_SSTORE);  // lock
  a.push(1).op(OP_SLOAD).op(OP_CALLVALUE).op(OP_ADD);
  a.push(1).op(OP_SSTORE);  // protected body
  if (with_unlock) a.push(1).push(0).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

// uint8 n; address owner; bool live; uint256 total; uint160 packedId;
inline std::vector<std::uint8_t> value_kinds() {
  const Word low8 = Word(0xff);
  Asm a;
  // n [slot0 0,0]
  a.push(0).op(OP_SLOAD).push(low8).op(OP_AND);
  a.op(OP_CALLVALUE).op(OP_ADD).op(OP_POP);
  a.push(0).op(OP_SLOAD).push(evm_not(low8)).op(OP_AND);
  a.op(OP_CALLVALUE).push(low8).op(OP_AND).op(OP_OR).push(0).op(OP_SSTORE);
  // owner [slot0 1,20]
  a.push(0).op(OP_SLOAD).push(8).op(OP_SHR).push(kFixLow20).op(OP_AND);
  a.op(OP_CALLER).op(OP_EQ).op(OP_POP);
  a.push(0).op(OP_SLOAD).push(evm_not(kFixLow20 << 8)).op(OP_AND);
  a.op(OP_CALLER).push(kFixLow20).op(OP_AND).push(8).op(OP_SHL);
  a.op(OP_OR).push(0).op(OP_SSTORE);
  // live [slot0 21,21]
  a.push(0).op(OP_SLOAD).push(168).op(OP_SHR).push(low8).op(OP_AND);
  a.op(OP_ISZERO).op(OP_ISZERO).op(OP_POP);
  a.push(0).op(OP_SLOAD).push(evm_not(low8 << 168)).op(OP_AND);
  a.push(Word(1) << 168).op(OP_OR).push(0).op(OP_SSTORE);
  // total [slot1]
  a.push(1).op(OP_SLOAD).op(OP_CALLVALUE).op(OP_ADD).push(1).op(OP_SSTORE);
  // packedId [slot2 0,19]
  a.push(2).op(OP_SLOAD).push(kFixLow20).op(OP_AND);
  a.push(3).op(OP_MUL).op(OP_POP);
  a.push(2).op(OP_SLOAD).push(kFixKeep20to31).op(OP_AND);
  a.op(OP_CALLVALUE).push(kFixLow20).op(OP_AND).op(OP_OR);
  a.push(2).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

// bytes16 head; bytes16 tail;
inline std::vector<std::uint8_t> bytes_pair() {
  const Word low16 = (Word(1) << 128) - 1;
  const Word hi16 = evm_not(low16);
  Asm a;
  // head [0,15]: extract to the top of the stack
  a.push(0).op(OP_SLOAD).push(128).op(OP_SHL).op(OP_POP);
  // tail [16,31]: masked in place
  a.push(0).op(OP_SLOAD).push(hi16).op(OP_AND).op(OP_POP);
  // head write: top-aligned value repositioned down
  a.push(0).op(OP_SLOAD).push(hi16).op(OP_AND);
  a.push(4).op(OP_CALLDATALOAD).push(hi16).op(OP_AND).push(128).op(OP_SHR);
  a.op(OP_OR).push(0).op(OP_SSTORE);
  // tail write: masked insert in place
  a.push(0).op(OP_SLOAD).push(low16).op(OP_AND);
  a.push(4).op(OP_CALLDATALOAD).push(hi16).op(OP_AND);
  a.op(OP_OR).push(0).op(OP_SSTORE);
  a.op(OP_STOP);
  return a.build();
}

// uint256[] xs;  -- for (i = 0; i < n; ++i) xs[i] = i;
inline std::vector<std::uint8_t> loop_sweep() {
  Asm a;
  a.push(0).push(0).op(OP_MSTORE);
  a.push(0x20).push(0).op(OP_SHA3);  // data start   [base]
  a.push(0);                         // i = 0        [base, i]
  a.jumpdest("loop");
  a.push(4).op(OP_CALLDATALOAD);  // [base, i, n]
  a.op(OP_DUP1 + 1);                  // [base, i, n, i]
  a.op(OP_LT);                    // [base, i, i<n]
  a.op(OP_ISZERO).push_label("done").op(OP_JUMPI);
  a.op(OP_DUP1 + 1).op(OP_DUP1 + 1).op(OP_ADD);  // [base, i, base+i]
  a.op(OP_DUP1 + 1).op(OP_SWAP1);            // [base, i, i, base+i]
  a.op(OP_SSTORE);                       // xs[i] = i
  a.push(1).op(OP_ADD);                  // [base, i+1]
  a.push_label("loop").op(OP_JUMP);
  a.jumpdest("done");
  a.op(OP_POP).op(OP_POP).op(OP_STOP);
  return a.build();
}

}  // namespace fxd

struct Fixture {
  std::string name;
  std::vector<std::uint8_t> code;
  std::string ground_truth;
  int expected_guards = 0;
};

inline std::vector<Fixture> corpus() {
  std::vector<Fixture> out;

  out.push_back({"fig1", sample_contract(), sample_ground_truth(), 0});

  out.push_back({"packed_two", fxd::packed_two(), R"json({
  "storage": [
    {"label": "lo", "offset": 0, "slot": "0", "type": "t_uint128"},
    {"label": "hi", "offset": 16, "slot": "0", "type": "t_uint128"}
  ],
  "types": {
    "t_uint128": {"encoding": "inplace", "label": "uint128",
                  "numberOfBytes": "16"}
  }
})json",
                 0});

  out.push_back({"packed_four", fxd::packed_four(), R"json({
  "storage": [
    {"label": "a", "offset": 0, "slot": "0", "type": "t_uint64"},
    {"label": "b", "offset": 8, "slot": "0", "type": "t_uint64"},
    {"label": "c", "offset": 16, "slot": "0", "type": "t_uint64"},
    {"label": "d", "offset": 24, "slot": "0", "type": "t_uint64"}
  ],
  "types": {
    "t_uint64": {"encoding": "inplace", "label": "uint64",
                 "numberOfBytes": "8"}
  }
})json",
                 0});

  out.push_back({"packed_mixed", fxd::packed_mixed(), R"json({
  "storage": [
    {"label": "who", "offset": 0, "slot": "0", "type": "t_address"},
    {"label": "amount", "offset": 20, "slot": "0", "type": "t_uint64"},
    {"label": "ok", "offset": 28, "slot": "0", "type": "t_bool"}
  ],
  "types": {
    "t_address": {"encoding": "inplace", "label": "address",
                  "numberOfBytes": "20"},
    "t_bool": {"encoding": "inplace", "label": "bool", "numberOfBytes": "1"},
    "t_uint64": {"encoding": "inplace", "label": "uint64",
                 "numberOfBytes": "8"}
  }
})json",
                 0});

  out.push_back({"signed_types", fxd::signed_types(), R"json({
  "storage": [
    {"label": "balance", "offset": 0, "slot": "0", "type": "t_int256"},
    {"label": "delta", "offset": 0, "slot": "1", "type": "t_int32"}
  ],
  "types": {
    "t_int256": {"encoding": "inplace", "label": "int256",
                 "numberOfBytes": "32"},
    "t_int32": {"encoding": "inplace", "label": "int32", "numberOfBytes": "4"}
  }
})json",
                 0});

  out.push_back({"address_array", fxd::address_array(), R"json({
  "storage": [
    {"label": "holders", "offset": 0, "slot": "0",
     "type": "t_array(t_address)dyn_storage"}
  ],
  "types": {
    "t_address": {"encoding": "inplace", "label": "address",
                  "numberOfBytes": "20"},
    "t_array(t_address)dyn_storage": {"encoding": "dynamic_array",
      "base": "t_address", "label": "address[]", "numberOfBytes": "32"}
  }
})json",
                 0});

  out.push_back({"struct_array", fxd::struct_array(), R"json({
  "storage": [
    {"label": "items", "offset": 0, "slot": "0",
     "type": "t_array(t_struct(Item)9_storage)dyn_storage"}
  ],
  "types": {
    "t_uint256": {"encoding": "inplace", "label": "uint256",
                  "numberOfBytes": "32"},
    "t_struct(Item)9_storage": {"encoding": "inplace",
      "label": "struct Ledger.Item", "numberOfBytes": "64",
      "members": [
        {"label": "a", "offset": 0, "slot": "0", "type": "t_uint256"},
        {"label": "b", "offset": 0, "slot": "1", "type": "t_uint256"}
      ]},
    "t_array(t_struct(Item)9_storage)dyn_storage": {
      "encoding": "dynamic_array", "base": "t_struct(Item)9_storage",
      "label": "struct Ledger.Item[]", "numberOfBytes": "32"}
  }
})json",
                 0});

  out.push_back({"mapping_uint_value", fxd::mapping_uint_value(), R"json({
  "storage": [
    {"label": "balances", "offset": 0, "slot": "0",
     "type": "t_mapping(t_address,t_uint256)"}
  ],
  "types": {
    "t_address": {"encoding": "inplace", "label": "address",
                  "numberOfBytes": "20"},
    "t_uint256": {"encoding": "inplace", "label": "uint256",
                  "numberOfBytes": "32"},
    "t_mapping(t_address,t_uint256)": {"encoding": "mapping",
      "key": "t_address", "label": "mapping(address => uint256)",
      "numberOfBytes": "32", "value": "t_uint256"}
  }
})json",
                 0});

  out.push_back({"mapping_nested3", fxd::mapping_nested3(), R"json({
  "storage": [
    {"label": "cube", "offset": 0, "slot": "5",
     "type": "t_mapping(t_uint256,t_mapping(t_address,t_mapping(t_uint256,t_uint256)))"}
  ],
  "types": {
    "t_address": {"encoding": "inplace", "label": "address",
                  "numberOfBytes": "20"},
    "t_uint256": {"encoding": "inplace", "label": "uint256",
                  "numberOfBytes": "32"},
    "t_mapping(t_uint256,t_uint256)": {"encoding": "mapping",
      "key": "t_uint256", "label": "mapping(uint256 => uint256)",
      "numberOfBytes": "32", "value": "t_uint256"},
    "t_mapping(t_address,t_mapping(t_uint256,t_uint256))": {
      "encoding": "mapping", "key": "t_address",
      "label": "mapping(address => mapping(uint256 => uint256))",
      "numberOfBytes": "32", "value": "t_mapping(t_uint256,t_uint256)"},
    "t_mapping(t_uint256,t_mapping(t_address,t_mapping(t_uint256,t_uint256)))": {
      "encoding": "mapping", "key": "t_uint256",
      "label": "mapping(uint256 => mapping(address => mapping(uint256 => uint256)))",
      "numberOfBytes": "32",
      "value": "t_mapping(t_address,t_mapping(t_uint256,t_uint256))"}
  }
})json",
                 0});

  out.push_back({"mapping_packed_struct", fxd::mapping_packed_struct(),
                 R"json({
  "storage": [
    {"label": "entries", "offset": 0, "slot": "0",
     "type": "t_mapping(t_uint256,t_struct(Entry)8_storage)"}
  ],
  "types": {
    "t_address": {"encoding": "inplace", "label": "address",
                  "numberOfBytes": "20"},
    "t_bool": {"encoding": "inplace", "label": "bool", "numberOfBytes": "1"},
    "t_uint256": {"encoding": "inplace", "label": "uint256",
                  "numberOfBytes": "32"},
    "t_struct(Entry)8_storage": {"encoding": "inplace",
      "label": "struct Registry.Entry", "numberOfBytes": "32",
      "members": [
        {"label": "who", "offset": 0, "slot": "0", "type": "t_address"},
        {"label": "ok", "offset": 20, "slot": "0", "type": "t_bool"}
      ]},
    "t_mapping(t_uint256,t_struct(Entry)8_storage)": {"encoding": "mapping",
      "key": "t_uint256",
      "label": "mapping(uint256 => struct Registry.Entry)",
      "numberOfBytes": "32", "value": "t_struct(Entry)8_storage"}
  }
})json",
                 0});

  out.push_back({"erc1967", fxd::erc1967(), R"json({
  "storage": [
    {"label": "admin", "offset": 0,
     "slot": "0xb53127684a568b3173ae13b9f8a6016e243e63b6e8ee1178d6a717850b5d6103",
     "type": "t_address"}
  ],
  "types": {
    "t_address": {"encoding": "inplace", "label": "address",
                  "numberOfBytes": "20"}
  }
})json",
                 0});

  out.push_back({"guard", fxd::guard(true), R"json({
  "storage": [
    {"label": "_status", "offset": 0, "slot": "0", "type": "t_uint256"},
    {"label": "total", "offset": 0, "slot": "1", "type": "t_uint256"}
  ],
  "types": {
    "t_uint256": {"encoding": "inplace", "label": "uint256",
                  "numberOfBytes": "32"}
  }
})json",
                 1});

  out.push_back({"guard_unlocked", fxd::guard(false), R"json({
  "storage": [
    {"label": "_status", "offset": 0, "slot": "0", "type": "t_uint256"},
    {"label": "total", "offset": 0, "slot": "1", "type": "t_uint256"}
  ],
  "types": {
    "t_uint256": {"encoding": "inplace", "label": "uint256",
                  "numberOfBytes": "32"}
  }
})json",
                 0});

  out.push_back({"value_kinds", fxd::value_kinds(), R"json({
  "storage": [
    {"label": "n", "offset": 0, "slot": "0", "type": "t_uint8"},
    {"label": "owner", "offset": 1, "slot": "0", "type": "t_address"},
    {"label": "live", "offset": 21, "slot": "0", "type": "t_bool"},
    {"label": "total", "offset": 0, "slot": "1", "type": "t_uint256"},
    {"label": "packedId", "offset": 0, "slot": "2", "type": "t_uint160"}
  ],
  "types": {
    "t_address": {"encoding": "inplace", "label": "address",
                  "numberOfBytes": "20"},
    "t_bool": {"encoding": "inplace", "label": "bool", "numberOfBytes": "1"},
    "t_uint8": {"encoding": "inplace", "label": "uint8", "numberOfBytes": "1"},
    "t_uint160": {"encoding": "inplace", "label": "uint160",
                  "numberOfBytes": "20"},
    "t_uint256": {"encoding": "inplace", "label": "uint256",
                  "numberOfBytes": "32"}
  }
})json",
                 0});

  out.push_back({"bytes_pair", fxd::bytes_pair(), R"json({
  "storage": [
    {"label": "head", "offset": 0, "slot": "0", "type": "t_bytes16"},
    {"label": "tail", "offset": 16, "slot": "0", "type": "t_bytes16"}
  ],
  "types": {
    "t_bytes16": {"encoding": "inplace", "label": "bytes16",
                  "numberOfBytes": "16"}
  }
})json",
                 0});

  out.push_back({"loop_sweep", fxd::loop_sweep(), R"json({
  "storage": [
    {"label": "xs", "offset": 0, "slot": "0",
     "type": "t_array(t_uint256)dyn_storage"}
  ],
  "types": {
    "t_uint256": {"encoding": "inplace", "label": "uint256",
                  "numberOfBytes": "32"},
    "t_array(t_uint256)dyn_storage": {"encoding": "dynamic_array",
      "base": "t_uint256", "label": "uint256[]", "numberOfBytes": "32"}
  }
})json",
                 0});

  return out;
}

inline std::string bytes_to_hex(const std::vector<std::uint8_t>& code) {
  static const char* digits = "0123456789abcdef";
  std::string out = "0x";
  for (std::uint8_t b : code) {
    out += digits[b >> 4];
    out += digits[b & 0xf];
  }
  return out;
}

}  // namespace tfix
