#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wasmio/wasm/module.hpp"

namespace wasmio::wasm {

inline constexpr uint8_t kSectionCustom = 0;
inline constexpr uint8_t kSectionType = 1;
inline constexpr uint8_t kSectionImport = 2;
inline constexpr uint8_t kSectionFunction = 3;
inline constexpr uint8_t kSectionTable = 4;
inline constexpr uint8_t kSectionMemory = 5;
inline constexpr uint8_t kSectionGlobal = 6;
inline constexpr uint8_t kSectionExport = 7;
inline constexpr uint8_t kSectionElement = 9;
inline constexpr uint8_t kSectionCode = 10;

namespace detail {

inline FuncType decode_functype(ByteReader& r) {
    r.check(r.u8() == kFuncTypeTag, "expected functype tag 0x60");
    FuncType t;
    t.params = r.leb_u32();
    for (uint32_t i = 0; i < t.params; ++i)
        r.check(r.u8() == kValTypeI32, "unsupported parameter type (subset is i32-only)");
    t.results = r.leb_u32();
    r.check(t.results <= 1, "multiple results not supported");
    for (uint32_t i = 0; i < t.results; ++i)
        r.check(r.u8() == kValTypeI32, "unsupported result type (subset is i32-only)");
    return t;
}

inline int32_t decode_const_expr(ByteReader& r) {
    r.check(r.u8() == OP_I32_CONST, "init expression must be i32.const");
    int32_t v = r.leb_i32();
    r.check(r.u8() == OP_END, "init expression must end");
    return v;
}

}  // namespace detail

// Decodes a binary in the supported WASM 1.0 subset. Custom sections are
// preserved byte-exactly; anything outside the subset is a DecodeError
// with the offending byte offset.
inline WasmModule decode_module(std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    r.check(r.remaining() >= 8, "shorter than magic+version");
    if (r.u32_fixed() != 0x6D736100u) throw DecodeError(0, "bad magic");
    if (r.u32_fixed() != 1u) throw DecodeError(4, "unsupported version");

    WasmModule m;
    std::vector<uint32_t> func_type_indices;
    int last_section = -1;
    bool saw_code = false;

    while (!r.eof()) {
        std::size_t section_at = r.pos();
        uint8_t id = r.u8();
        uint32_t size = r.leb_u32();
        ByteReader s = r.sub(size);

        if (id != kSectionCustom) {
            if (id != kSectionType && id != kSectionImport && id != kSectionFunction &&
                id != kSectionTable && id != kSectionMemory && id != kSectionGlobal &&
                id != kSectionExport && id != kSectionElement && id != kSectionCode)
                throw DecodeError(section_at, "unknown section id " + std::to_string(id));
            if (id <= last_section)
                throw DecodeError(section_at, "section out of order or duplicated");
            last_section = id;
        }

        switch (id) {
            case kSectionCustom: {
                std::string name = s.name();
                auto payload = s.bytes(s.remaining());
                if (m.custom_sections.count(name))
                    throw DecodeError(section_at, "duplicate custom section '" + name + "'");
                m.custom_sections[name] = std::vector<uint8_t>(payload.begin(), payload.end());
                break;
            }
            case kSectionType: {
                uint32_t n = s.leb_u32();
                for (uint32_t i = 0; i < n; ++i) m.types.push_back(detail::decode_functype(s));
                break;
            }
            case kSectionImport: {
                uint32_t n = s.leb_u32();
                for (uint32_t i = 0; i < n; ++i) {
                    ImportDecl imp;
                    imp.module_name = s.name();
                    imp.field_name = s.name();
                    uint8_t kind = s.u8();
                    s.check(kind == 0x00, "only function imports supported");
                    imp.type_index = s.leb_u32();
                    s.check(imp.type_index < m.types.size(), "import type index out of range");
                    m.imports.push_back(std::move(imp));
                }
                break;
            }
            case kSectionFunction: {
                uint32_t n = s.leb_u32();
                for (uint32_t i = 0; i < n; ++i) {
                    uint32_t ti = s.leb_u32();
                    s.check(ti < m.types.size(), "function type index out of range");
                    func_type_indices.push_back(ti);
                }
                break;
            }
            case kSectionTable: {
                uint32_t n = s.leb_u32();
                s.check(n <= 1, "at most one table");
                if (n == 1) {
                    s.check(s.u8() == kFuncRefType, "table element type must be funcref");
                    uint8_t flags = s.u8();
                    s.check(flags <= 1, "bad table limits flags");
                    uint32_t min = s.leb_u32();
                    if (flags == 1) {
                        uint32_t max = s.leb_u32();
                        s.check(max >= min, "table max below min");
                    }
                    m.function_table.assign(min, kNullFuncRef);
                }
                break;
            }
            case kSectionMemory: {
                uint32_t n = s.leb_u32();
                s.check(n <= 1, "at most one memory");
                if (n == 1) {
                    uint8_t flags = s.u8();
                    s.check(flags <= 1, "bad memory limits flags");
                    MemoryDecl md;
                    md.initial_pages = s.leb_u32();
                    if (flags == 1) {
                        md.max_pages = s.leb_u32();
                        s.check(*md.max_pages >= md.initial_pages, "memory max below min");
                    }
                    m.memory_decl = md;
                }
                break;
            }
            case kSectionGlobal: {
                uint32_t n = s.leb_u32();
                for (uint32_t i = 0; i < n; ++i) {
                    s.check(s.u8() == kValTypeI32, "unsupported global type (subset is i32-only)");
                    uint8_t mut = s.u8();
                    s.check(mut <= 1, "bad global mutability");
                    GlobalDecl g;
                    g.is_mutable = (mut == 1);
                    g.init = detail::decode_const_expr(s);
                    m.globals.push_back(g);
                }
                break;
            }
            case kSectionExport: {
                uint32_t n = s.leb_u32();
                for (uint32_t i = 0; i < n; ++i) {
                    std::string name = s.name();
                    uint8_t kind = s.u8();
                    s.check(kind == 0x00, "only function exports supported");
                    uint32_t idx = s.leb_u32();
                    s.check(!m.exports.count(name), "duplicate export name");
                    m.exports[name] = idx;
                }
                break;
            }
            case kSectionElement: {
                uint32_t n = s.leb_u32();
                for (uint32_t i = 0; i < n; ++i) {
                    uint32_t table_idx = s.leb_u32();
                    s.check(table_idx == 0, "element segment table index must be 0");
                    int32_t offset = detail::decode_const_expr(s);
                    s.check(offset >= 0, "negative element offset");
                    uint32_t count = s.leb_u32();
                    s.check(static_cast<uint64_t>(offset) + count <= m.function_table.size(),
                            "element segment exceeds table size");
                    for (uint32_t k = 0; k < count; ++k)
                        m.function_table[offset + k] = s.leb_u32();
                }
                break;
            }
            case kSectionCode: {
                saw_code = true;
                uint32_t n = s.leb_u32();
                s.check(n == func_type_indices.size(),
                        "code entry count does not match function section");
                for (uint32_t i = 0; i < n; ++i) {
                    uint32_t body_size = s.leb_u32();
                    ByteReader b = s.sub(body_size, "code body truncated");
                    FuncCode fc;
                    fc.type_index = func_type_indices[i];
                    uint32_t local_groups = b.leb_u32();
                    for (uint32_t g = 0; g < local_groups; ++g) {
                        uint32_t count = b.leb_u32();
                        b.check(b.u8() == kValTypeI32, "unsupported local type (subset is i32-only)");
                        uint64_t total = static_cast<uint64_t>(fc.local_i32s) + count;
                        b.check(total <= 0xFFFF, "too many locals");
                        fc.local_i32s = static_cast<uint32_t>(total);
                    }
                    std::size_t expr_at = b.pos();
                    auto expr = b.bytes(b.remaining());
                    fc.body.assign(expr.begin(), expr.end());
                    scan_body(fc.body, expr_at, [](const Instr&, uint32_t) {});
                    m.functions.push_back(std::move(fc));
                }
                break;
            }
        }
        if (!s.eof()) throw DecodeError(s.pos(), "trailing bytes in section");
    }

    if (!func_type_indices.empty() && !saw_code)
        throw DecodeError(bytes.size(), "function section without code section");
    return m;
}

}  // namespace wasmio::wasm
