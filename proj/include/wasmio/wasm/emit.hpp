#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wasmio/wasm/module.hpp"

namespace wasmio::wasm {

namespace detail {

inline void emit_section(ByteWriter& out, uint8_t id, ByteWriter&& payload) {
    out.u8(id);
    auto bytes = payload.take();
    out.leb_u32(static_cast<uint32_t>(bytes.size()));
    out.bytes(bytes);
}

}  // namespace detail

// Serializes a module spec back into the binary format. The output always
// decodes (decode_module) to a structurally equal module. Bodies are
// checked against the subset so a bad spec fails here, not at load time.
inline std::vector<uint8_t> emit_module(const WasmModule& m) {
    for (const auto& t : m.types)
        if (t.results > 1) throw SpecError("function type with multiple results");
    for (const auto& imp : m.imports)
        if (imp.type_index >= m.types.size()) throw SpecError("import type index out of range");
    for (const auto& fc : m.functions) {
        if (fc.type_index >= m.types.size()) throw SpecError("function type index out of range");
        try {
            scan_body(fc.body, 0, [](const Instr&, uint32_t) {});
        } catch (const DecodeError& e) {
            throw SpecError(std::string("bad function body: ") + e.what());
        }
    }
    for (uint32_t slot : m.function_table)
        if (slot == kNullFuncRef)
            throw SpecError("function table has uninitialized slots");

    ByteWriter out;
    out.u32_le(0x6D736100u);
    out.u32_le(1u);

    if (!m.types.empty()) {
        ByteWriter s;
        s.leb_u32(static_cast<uint32_t>(m.types.size()));
        for (const auto& t : m.types) {
            s.u8(kFuncTypeTag);
            s.leb_u32(t.params);
            for (uint32_t i = 0; i < t.params; ++i) s.u8(kValTypeI32);
            s.leb_u32(t.results);
            for (uint32_t i = 0; i < t.results; ++i) s.u8(kValTypeI32);
        }
        detail::emit_section(out, kSectionType, std::move(s));
    }

    if (!m.imports.empty()) {
        ByteWriter s;
        s.leb_u32(static_cast<uint32_t>(m.imports.size()));
        for (const auto& imp : m.imports) {
            s.name(imp.module_name);
            s.name(imp.field_name);
            s.u8(0x00);
            s.leb_u32(imp.type_index);
        }
        detail::emit_section(out, kSectionImport, std::move(s));
    }

    if (!m.functions.empty()) {
        ByteWriter s;
        s.leb_u32(static_cast<uint32_t>(m.functions.size()));
        for (const auto& fc : m.functions) s.leb_u32(fc.type_index);
        detail::emit_section(out, kSectionFunction, std::move(s));
    }

    if (!m.function_table.empty()) {
        ByteWriter s;
        s.leb_u32(1);
        s.u8(kFuncRefType);
        s.u8(0x00);
        s.leb_u32(static_cast<uint32_t>(m.function_table.size()));
        detail::emit_section(out, kSectionTable, std::move(s));
    }

    if (m.memory_decl) {
        ByteWriter s;
        s.leb_u32(1);
        if (m.memory_decl->max_pages) {
            s.u8(0x01);
            s.leb_u32(m.memory_decl->initial_pages);
            s.leb_u32(*m.memory_decl->max_pages);
        } else {
            s.u8(0x00);
            s.leb_u32(m.memory_decl->initial_pages);
        }
        detail::emit_section(out, kSectionMemory, std::move(s));
    }

    if (!m.globals.empty()) {
        ByteWriter s;
        s.leb_u32(static_cast<uint32_t>(m.globals.size()));
        for (const auto& g : m.globals) {
            s.u8(kValTypeI32);
            s.u8(g.is_mutable ? 0x01 : 0x00);
            s.u8(OP_I32_CONST);
            s.leb_i32(g.init);
            s.u8(OP_END);
        }
        detail::emit_section(out, kSectionGlobal, std::move(s));
    }

    if (!m.exports.empty()) {
        ByteWriter s;
        s.leb_u32(static_cast<uint32_t>(m.exports.size()));
        for (const auto& [name, idx] : m.exports) {
            s.name(name);
            s.u8(0x00);
            s.leb_u32(idx);
        }
        detail::emit_section(out, kSectionExport, std::move(s));
    }

    if (!m.function_table.empty()) {
        ByteWriter s;
        s.leb_u32(1);
        s.leb_u32(0);  // table index
        s.u8(OP_I32_CONST);
        s.leb_i32(0);
        s.u8(OP_END);
        s.leb_u32(static_cast<uint32_t>(m.function_table.size()));
        for (uint32_t slot : m.function_table) s.leb_u32(slot);
        detail::emit_section(out, kSectionElement, std::move(s));
    }

    if (!m.functions.empty()) {
        ByteWriter s;
        s.leb_u32(static_cast<uint32_t>(m.functions.size()));
        for (const auto& fc : m.functions) {
            ByteWriter body;
            if (fc.local_i32s > 0) {
                body.leb_u32(1);
                body.leb_u32(fc.local_i32s);
                body.u8(kValTypeI32);
            } else {
                body.leb_u32(0);
            }
            body.bytes(fc.body);
            auto bytes = body.take();
            s.leb_u32(static_cast<uint32_t>(bytes.size()));
            s.bytes(bytes);
        }
        detail::emit_section(out, kSectionCode, std::move(s));
    }

    for (const auto& [name, payload] : m.custom_sections) {
        ByteWriter s;
        s.name(name);
        s.bytes(payload);
        detail::emit_section(out, kSectionCustom, std::move(s));
    }

    return out.take();
}

// Instruction assembler for building function bodies in tests and the
// scenario generators.
class FuncBuilder {
  public:
    FuncBuilder& op(uint8_t opcode) {
        w_.u8(opcode);
        return *this;
    }
    FuncBuilder& i32_const(int32_t v) {
        w_.u8(OP_I32_CONST);
        w_.leb_i32(v);
        return *this;
    }
    FuncBuilder& i32_const_u(uint32_t v) { return i32_const(static_cast<int32_t>(v)); }
    FuncBuilder& local_get(uint32_t i) { return idx_op(OP_LOCAL_GET, i); }
    FuncBuilder& local_set(uint32_t i) { return idx_op(OP_LOCAL_SET, i); }
    FuncBuilder& local_tee(uint32_t i) { return idx_op(OP_LOCAL_TEE, i); }
    FuncBuilder& global_get(uint32_t i) { return idx_op(OP_GLOBAL_GET, i); }
    FuncBuilder& global_set(uint32_t i) { return idx_op(OP_GLOBAL_SET, i); }
    FuncBuilder& call(uint32_t i) { return idx_op(OP_CALL, i); }
    FuncBuilder& call_indirect(uint32_t type_index) {
        w_.u8(OP_CALL_INDIRECT);
        w_.leb_u32(type_index);
        w_.u8(0x00);
        return *this;
    }
    FuncBuilder& block(bool has_result = false) { return block_op(OP_BLOCK, has_result); }
    FuncBuilder& loop(bool has_result = false) { return block_op(OP_LOOP, has_result); }
    FuncBuilder& if_(bool has_result = false) { return block_op(OP_IF, has_result); }
    FuncBuilder& else_() { return op(OP_ELSE); }
    FuncBuilder& end() { return op(OP_END); }
    FuncBuilder& br(uint32_t depth) { return idx_op(OP_BR, depth); }
    FuncBuilder& br_if(uint32_t depth) { return idx_op(OP_BR_IF, depth); }
    FuncBuilder& ret() { return op(OP_RETURN); }
    FuncBuilder& drop() { return op(OP_DROP); }
    FuncBuilder& i32_load(uint32_t offset = 0, uint32_t align = 2) {
        return mem_op(OP_I32_LOAD, align, offset);
    }
    FuncBuilder& i32_load8_u(uint32_t offset = 0) { return mem_op(OP_I32_LOAD8_U, 0, offset); }
    FuncBuilder& i32_load16_u(uint32_t offset = 0) { return mem_op(OP_I32_LOAD16_U, 1, offset); }
    FuncBuilder& i32_store(uint32_t offset = 0, uint32_t align = 2) {
        return mem_op(OP_I32_STORE, align, offset);
    }
    FuncBuilder& i32_store8(uint32_t offset = 0) { return mem_op(OP_I32_STORE8, 0, offset); }
    FuncBuilder& i32_store16(uint32_t offset = 0) { return mem_op(OP_I32_STORE16, 1, offset); }

    // Body bytes with the terminating end appended.
    std::vector<uint8_t> finish() {
        w_.u8(OP_END);
        return w_.take();
    }

  private:
    FuncBuilder& idx_op(uint8_t opcode, uint32_t i) {
        w_.u8(opcode);
        w_.leb_u32(i);
        return *this;
    }
    FuncBuilder& block_op(uint8_t opcode, bool has_result) {
        w_.u8(opcode);
        w_.u8(has_result ? kValTypeI32 : kBlockTypeEmpty);
        return *this;
    }
    FuncBuilder& mem_op(uint8_t opcode, uint32_t align, uint32_t offset) {
        w_.u8(opcode);
        w_.leb_u32(align);
        w_.leb_u32(offset);
        return *this;
    }
    ByteWriter w_;
};

class ModuleBuilder {
  public:
    uint32_t add_type(uint32_t params, uint32_t results) {
        for (uint32_t i = 0; i < m_.types.size(); ++i)
            if (m_.types[i].params == params && m_.types[i].results == results) return i;
        m_.types.push_back({params, results});
        return static_cast<uint32_t>(m_.types.size() - 1);
    }

    // Imports must be added before local functions (index space rule).
    uint32_t add_import(const std::string& module, const std::string& field, uint32_t params,
                        uint32_t results) {
        if (!m_.functions.empty()) throw SpecError("imports must precede local functions");
        m_.imports.push_back({module, field, add_type(params, results)});
        return static_cast<uint32_t>(m_.imports.size() - 1);
    }

    uint32_t add_function(uint32_t params, uint32_t results, uint32_t local_i32s,
                          std::vector<uint8_t> body) {
        FuncCode fc;
        fc.type_index = add_type(params, results);
        fc.local_i32s = local_i32s;
        fc.body = std::move(body);
        m_.functions.push_back(std::move(fc));
        return static_cast<uint32_t>(m_.imports.size() + m_.functions.size() - 1);
    }

    void export_func(const std::string& name, uint32_t func_index) { m_.exports[name] = func_index; }

    void set_memory(uint32_t initial_pages, std::optional<uint32_t> max_pages = {}) {
        m_.memory_decl = MemoryDecl{initial_pages, max_pages};
    }

    uint32_t add_global(bool is_mutable, int32_t init) {
        m_.globals.push_back({is_mutable, init});
        return static_cast<uint32_t>(m_.globals.size() - 1);
    }

    // Appends to the function table; returns the slot index.
    uint32_t add_table_entry(uint32_t func_index) {
        m_.function_table.push_back(func_index);
        return static_cast<uint32_t>(m_.function_table.size() - 1);
    }

    void add_custom_section(const std::string& name, std::vector<uint8_t> payload) {
        m_.custom_sections[name] = std::move(payload);
    }

    WasmModule build() const { return m_; }
    std::vector<uint8_t> emit() const { return emit_module(m_); }

  private:
    WasmModule m_;
};

}  // namespace wasmio::wasm
