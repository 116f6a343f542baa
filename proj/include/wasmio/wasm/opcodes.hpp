#pragma once

#include <cstdint>

namespace wasmio::wasm {

// The supported WASM 1.0 subset: i32-only value types, single memory,
// structured control flow, direct and indirect calls.
enum Op : uint8_t {
    OP_UNREACHABLE = 0x00,
    OP_NOP = 0x01,
    OP_BLOCK = 0x02,
    OP_LOOP = 0x03,
    OP_IF = 0x04,
    OP_ELSE = 0x05,
    OP_END = 0x0B,
    OP_BR = 0x0C,
    OP_BR_IF = 0x0D,
    OP_RETURN = 0x0F,
    OP_CALL = 0x10,
    OP_CALL_INDIRECT = 0x11,
    OP_DROP = 0x1A,
    OP_SELECT = 0x1B,
    OP_LOCAL_GET = 0x20,
    OP_LOCAL_SET = 0x21,
    OP_LOCAL_TEE = 0x22,
    OP_GLOBAL_GET = 0x23,
    OP_GLOBAL_SET = 0x24,
    OP_I32_LOAD = 0x28,
    OP_I32_LOAD8_S = 0x2C,
    OP_I32_LOAD8_U = 0x2D,
    OP_I32_LOAD16_S = 0x2E,
    OP_I32_LOAD16_U = 0x2F,
    OP_I32_STORE = 0x36,
    OP_I32_STORE8 = 0x3A,
    OP_I32_STORE16 = 0x3B,
    OP_I32_CONST = 0x41,
    OP_I32_EQZ = 0x45,
    OP_I32_EQ = 0x46,
    OP_I32_NE = 0x47,
    OP_I32_LT_S = 0x48,
    OP_I32_LT_U = 0x49,
    OP_I32_GT_S = 0x4A,
    OP_I32_GT_U = 0x4B,
    OP_I32_LE_S = 0x4C,
    OP_I32_LE_U = 0x4D,
    OP_I32_GE_S = 0x4E,
    OP_I32_GE_U = 0x4F,
    OP_I32_CLZ = 0x67,
    OP_I32_CTZ = 0x68,
    OP_I32_POPCNT = 0x69,
    OP_I32_ADD = 0x6A,
    OP_I32_SUB = 0x6B,
    OP_I32_MUL = 0x6C,
    OP_I32_DIV_S = 0x6D,
    OP_I32_DIV_U = 0x6E,
    OP_I32_REM_S = 0x6F,
    OP_I32_REM_U = 0x70,
    OP_I32_AND = 0x71,
    OP_I32_OR = 0x72,
    OP_I32_XOR = 0x73,
    OP_I32_SHL = 0x74,
    OP_I32_SHR_S = 0x75,
    OP_I32_SHR_U = 0x76,
    OP_I32_ROTL = 0x77,
    OP_I32_ROTR = 0x78,
};

inline constexpr uint8_t kValTypeI32 = 0x7F;
inline constexpr uint8_t kBlockTypeEmpty = 0x40;
inline constexpr uint8_t kFuncTypeTag = 0x60;
inline constexpr uint8_t kFuncRefType = 0x70;

inline constexpr bool is_memory_load(uint8_t op) {
    return op == OP_I32_LOAD || op == OP_I32_LOAD8_S || op == OP_I32_LOAD8_U ||
           op == OP_I32_LOAD16_S || op == OP_I32_LOAD16_U;
}

inline constexpr bool is_memory_store(uint8_t op) {
    return op == OP_I32_STORE || op == OP_I32_STORE8 || op == OP_I32_STORE16;
}

inline constexpr uint32_t memory_access_width(uint8_t op) {
    switch (op) {
        case OP_I32_LOAD:
        case OP_I32_STORE: return 4;
        case OP_I32_LOAD16_S:
        case OP_I32_LOAD16_U:
        case OP_I32_STORE16: return 2;
        default: return 1;
    }
}

inline constexpr bool is_i32_unop(uint8_t op) {
    return op == OP_I32_CLZ || op == OP_I32_CTZ || op == OP_I32_POPCNT;
}

inline constexpr bool is_i32_binop(uint8_t op) { return op >= OP_I32_ADD && op <= OP_I32_ROTR; }

inline constexpr bool is_i32_relop(uint8_t op) { return op >= OP_I32_EQ && op <= OP_I32_GE_U; }

inline constexpr bool is_supported_opcode(uint8_t op) {
    switch (op) {
        case OP_UNREACHABLE:
        case OP_NOP:
        case OP_BLOCK:
        case OP_LOOP:
        case OP_IF:
        case OP_ELSE:
        case OP_END:
        case OP_BR:
        case OP_BR_IF:
        case OP_RETURN:
        case OP_CALL:
        case OP_CALL_INDIRECT:
        case OP_DROP:
        case OP_SELECT:
        case OP_LOCAL_GET:
        case OP_LOCAL_SET:
        case OP_LOCAL_TEE:
        case OP_GLOBAL_GET:
        case OP_GLOBAL_SET:
        case OP_I32_CONST:
        case OP_I32_EQZ:
            return true;
        default:
            return is_memory_load(op) || is_memory_store(op) || is_i32_unop(op) ||
                   is_i32_binop(op) || is_i32_relop(op);
    }
}

}  // namespace wasmio::wasm
