#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wasmio/wasm/binary.hpp"
#include "wasmio/wasm/opcodes.hpp"

namespace wasmio::wasm {

inline constexpr uint32_t kNullFuncRef = 0xFFFFFFFFu;
inline constexpr uint32_t kNoPc = 0xFFFFFFFFu;

// i32-only function signature; parameter and result counts say it all.
struct FuncType {
    uint32_t params = 0;
    uint32_t results = 0;  // 0 or 1
    bool operator==(const FuncType&) const = default;
};

struct ImportDecl {
    std::string module_name;
    std::string field_name;
    uint32_t type_index = 0;
    bool operator==(const ImportDecl&) const = default;
};

// One local function: signature, extra i32 locals, and the raw expression
// bytes including the terminating end opcode.
struct FuncCode {
    uint32_t type_index = 0;
    uint32_t local_i32s = 0;
    std::vector<uint8_t> body;
    bool operator==(const FuncCode&) const = default;
};

struct GlobalDecl {
    bool is_mutable = true;
    int32_t init = 0;
    bool operator==(const GlobalDecl&) const = default;
};

struct MemoryDecl {
    uint32_t initial_pages = 0;
    std::optional<uint32_t> max_pages;
    bool operator==(const MemoryDecl&) const = default;
};

// Jump targets for structured control, computed during validation and
// keyed by the pc of the opening block/loop/if opcode.
struct BlockInfo {
    uint32_t else_pc = kNoPc;
    uint32_t end_pc = kNoPc;
};

using CodeMeta = std::map<uint32_t, BlockInfo>;

struct WasmModule {
    std::vector<FuncType> types;
    std::vector<ImportDecl> imports;
    std::vector<FuncCode> functions;
    std::optional<MemoryDecl> memory_decl;
    std::vector<GlobalDecl> globals;
    std::map<std::string, uint32_t> exports;          // name -> function index
    std::vector<uint32_t> function_table;             // kNullFuncRef = uninitialized slot
    std::map<std::string, std::vector<uint8_t>> custom_sections;

    // Validation artifacts; not part of structural identity.
    std::vector<CodeMeta> code_meta;
    bool validated = false;

    uint32_t func_count() const {
        return static_cast<uint32_t>(imports.size() + functions.size());
    }

    bool is_import(uint32_t func_index) const { return func_index < imports.size(); }

    const FuncType& func_type(uint32_t func_index) const {
        if (func_index < imports.size()) return types[imports[func_index].type_index];
        return types[functions[func_index - imports.size()].type_index];
    }

    bool operator==(const WasmModule& rhs) const {
        return types == rhs.types && imports == rhs.imports && functions == rhs.functions &&
               memory_decl == rhs.memory_decl && globals == rhs.globals && exports == rhs.exports &&
               function_table == rhs.function_table && custom_sections == rhs.custom_sections;
    }
};

// One decoded instruction. `a`/`b` carry the immediates (index, label
// depth, or align/offset); `sval` carries the i32.const payload.
struct Instr {
    uint8_t op = 0;
    uint32_t a = 0;
    uint32_t b = 0;
    int32_t sval = 0;
    uint32_t pc = 0;       // offset of the opcode byte within the body
    uint32_t next_pc = 0;  // offset just past the immediates
};

// Decodes the instruction at `pc`. Structural checks (balance, final end)
// are the caller's job; this only parses one opcode plus immediates.
inline Instr read_instr(std::span<const uint8_t> body, uint32_t pc, std::size_t err_base = 0) {
    ByteReader r(body.subspan(pc), err_base + pc);
    Instr ins;
    ins.pc = pc;
    ins.op = r.u8();
    if (!is_supported_opcode(ins.op))
        throw DecodeError(err_base + pc, "unsupported opcode 0x" + [&] {
            static const char* d = "0123456789abcdef";
            return std::string{d[ins.op >> 4], d[ins.op & 0xF]};
        }());
    switch (ins.op) {
        case OP_BLOCK:
        case OP_LOOP:
        case OP_IF: {
            uint8_t bt = r.u8();
            if (bt != kBlockTypeEmpty && bt != kValTypeI32)
                throw DecodeError(r.pos() - 1, "unsupported block type");
            ins.a = (bt == kValTypeI32) ? 1 : 0;  // result arity
            break;
        }
        case OP_BR:
        case OP_BR_IF:
        case OP_CALL:
        case OP_LOCAL_GET:
        case OP_LOCAL_SET:
        case OP_LOCAL_TEE:
        case OP_GLOBAL_GET:
        case OP_GLOBAL_SET:
            ins.a = r.leb_u32();
            break;
        case OP_CALL_INDIRECT:
            ins.a = r.leb_u32();  // type index
            ins.b = r.u8();       // reserved table byte, must be zero
            if (ins.b != 0) throw DecodeError(r.pos() - 1, "nonzero call_indirect table index");
            break;
        case OP_I32_CONST:
            ins.sval = r.leb_i32();
            break;
        default:
            if (is_memory_load(ins.op) || is_memory_store(ins.op)) {
                ins.a = r.leb_u32();  // align
                ins.b = r.leb_u32();  // offset
            }
            break;
    }
    ins.next_pc = pc + static_cast<uint32_t>(r.pos() - (err_base + pc));
    return ins;
}

// Walks a body checking structure: every opcode supported, immediates
// parseable, blocks balanced, and the final end exactly at the last byte.
// Returns the pc of each instruction via the callback.
template <typename Fn>
inline void scan_body(std::span<const uint8_t> body, std::size_t err_base, Fn&& cb) {
    if (body.empty()) throw DecodeError(err_base, "empty function body");
    uint32_t depth = 1;  // implicit function block
    uint32_t pc = 0;
    while (pc < body.size()) {
        Instr ins = read_instr(body, pc, err_base);
        if (ins.op == OP_BLOCK || ins.op == OP_LOOP || ins.op == OP_IF) ++depth;
        if (ins.op == OP_END) {
            if (depth == 0) throw DecodeError(err_base + pc, "unbalanced end");
            --depth;
        }
        cb(ins, depth);
        if (depth == 0) {
            if (ins.next_pc != body.size())
                throw DecodeError(err_base + ins.next_pc, "trailing bytes after final end");
            return;
        }
        pc = ins.next_pc;
    }
    throw DecodeError(err_base + body.size(), "function body missing final end");
}

}  // namespace wasmio::wasm
