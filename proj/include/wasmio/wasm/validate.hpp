#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wasmio/wasm/module.hpp"

namespace wasmio::wasm {

namespace detail {

// i32-only typing reduces the operand stack to a height; each control
// frame pins its entry height and turns polymorphic after br/unreachable.
struct ValCtrl {
    uint8_t opcode;       // OP_BLOCK / OP_LOOP / OP_IF, function frame uses OP_BLOCK
    uint32_t open_pc;     // kNoPc for the function frame
    uint32_t arity;       // result count
    uint32_t height;      // operand height at entry
    bool unreachable = false;
    bool seen_else = false;
};

class BodyValidator {
  public:
    BodyValidator(const WasmModule& m, uint32_t func_index, CodeMeta& meta)
        : m_(m), func_index_(func_index), meta_(meta),
          code_(m.functions[func_index - m.imports.size()]) {
        const FuncType& ft = m_.func_type(func_index_);
        local_count_ = ft.params + code_.local_i32s;
        ctrls_.push_back({OP_BLOCK, kNoPc, ft.results, 0, false, false});
    }

    void run() {
        scan_body(code_.body, 0, [this](const Instr& ins, uint32_t) { step(ins); });
        if (!ctrls_.empty()) fail(static_cast<uint32_t>(code_.body.size()), "missing final end");
    }

  private:
    [[noreturn]] void fail(uint32_t pc, const std::string& msg) const {
        throw ValidateError(func_index_, pc, msg);
    }

    void push() { ++height_; }

    void pop(uint32_t pc) {
        ValCtrl& top = ctrls_.back();
        if (height_ == top.height) {
            if (top.unreachable) return;  // polymorphic stack
            fail(pc, "operand stack underflow");
        }
        --height_;
    }

    void pop_n(uint32_t pc, uint32_t n) {
        for (uint32_t i = 0; i < n; ++i) pop(pc);
    }

    const ValCtrl& label(uint32_t pc, uint32_t depth) const {
        if (depth >= ctrls_.size()) fail(pc, "branch label out of range");
        return ctrls_[ctrls_.size() - 1 - depth];
    }

    static uint32_t label_arity(const ValCtrl& c) { return c.opcode == OP_LOOP ? 0 : c.arity; }

    void enter_unreachable() {
        ctrls_.back().unreachable = true;
        height_ = ctrls_.back().height;
    }

    void step(const Instr& ins) {
        const uint32_t pc = ins.pc;
        switch (ins.op) {
            case OP_NOP:
                break;
            case OP_UNREACHABLE:
                enter_unreachable();
                break;
            case OP_BLOCK:
            case OP_LOOP:
                ctrls_.push_back({ins.op, pc, ins.a, height_, false, false});
                break;
            case OP_IF:
                pop(pc);
                ctrls_.push_back({OP_IF, pc, ins.a, height_, false, false});
                break;
            case OP_ELSE: {
                ValCtrl& top = ctrls_.back();
                if (top.opcode != OP_IF || top.seen_else) fail(pc, "else without matching if");
                if (!top.unreachable && height_ != top.height + top.arity)
                    fail(pc, "then-branch result mismatch");
                meta_[top.open_pc].else_pc = pc;
                top.seen_else = true;
                top.unreachable = false;
                height_ = top.height;
                break;
            }
            case OP_END: {
                ValCtrl top = ctrls_.back();
                if (top.opcode == OP_IF && !top.seen_else && top.arity != 0)
                    fail(pc, "if without else cannot produce a result");
                if (!top.unreachable && height_ != top.height + top.arity)
                    fail(pc, top.height + top.arity < height_ ? "value left on stack at end"
                                                              : "missing value at end");
                ctrls_.pop_back();
                if (top.open_pc != kNoPc) meta_[top.open_pc].end_pc = pc;
                height_ = top.height + top.arity;
                if (ctrls_.empty() && ins.next_pc != code_.body.size())
                    fail(pc, "code after function end");
                break;
            }
            case OP_BR: {
                const ValCtrl& target = label(pc, ins.a);
                pop_n(pc, label_arity(target));
                enter_unreachable();
                break;
            }
            case OP_BR_IF: {
                pop(pc);  // condition
                const ValCtrl& target = label(pc, ins.a);
                uint32_t arity = label_arity(target);
                pop_n(pc, arity);
                for (uint32_t i = 0; i < arity; ++i) push();
                break;
            }
            case OP_RETURN:
                pop_n(pc, ctrls_.front().arity);
                enter_unreachable();
                break;
            case OP_CALL: {
                if (ins.a >= m_.func_count()) fail(pc, "call target out of range");
                const FuncType& ft = m_.func_type(ins.a);
                pop_n(pc, ft.params);
                for (uint32_t i = 0; i < ft.results; ++i) push();
                break;
            }
            case OP_CALL_INDIRECT: {
                if (ins.a >= m_.types.size()) fail(pc, "call_indirect type out of range");
                if (m_.function_table.empty()) fail(pc, "call_indirect without table");
                pop(pc);  // table slot
                const FuncType& ft = m_.types[ins.a];
                pop_n(pc, ft.params);
                for (uint32_t i = 0; i < ft.results; ++i) push();
                break;
            }
            case OP_DROP:
                pop(pc);
                break;
            case OP_SELECT:
                pop_n(pc, 3);
                push();
                break;
            case OP_LOCAL_GET:
                if (ins.a >= local_count_) fail(pc, "local index out of range");
                push();
                break;
            case OP_LOCAL_SET:
                if (ins.a >= local_count_) fail(pc, "local index out of range");
                pop(pc);
                break;
            case OP_LOCAL_TEE:
                if (ins.a >= local_count_) fail(pc, "local index out of range");
                pop(pc);
                push();
                break;
            case OP_GLOBAL_GET:
                if (ins.a >= m_.globals.size()) fail(pc, "global index out of range");
                push();
                break;
            case OP_GLOBAL_SET:
                if (ins.a >= m_.globals.size()) fail(pc, "global index out of range");
                if (!m_.globals[ins.a].is_mutable) fail(pc, "global is immutable");
                pop(pc);
                break;
            case OP_I32_CONST:
                push();
                break;
            case OP_I32_EQZ:
                pop(pc);
                push();
                break;
            default:
                if (is_memory_load(ins.op) || is_memory_store(ins.op)) {
                    if (!m_.memory_decl) fail(pc, "memory access without memory declaration");
                    uint32_t width = memory_access_width(ins.op);
                    uint32_t natural = width == 4 ? 2 : (width == 2 ? 1 : 0);
                    if (ins.a > natural) fail(pc, "alignment exceeds natural alignment");
                    if (is_memory_store(ins.op)) {
                        pop_n(pc, 2);
                    } else {
                        pop(pc);
                        push();
                    }
                } else if (is_i32_unop(ins.op)) {
                    pop(pc);
                    push();
                } else if (is_i32_binop(ins.op) || is_i32_relop(ins.op)) {
                    pop_n(pc, 2);
                    push();
                } else {
                    fail(pc, "opcode not handled by validator");
                }
                break;
        }
    }

    const WasmModule& m_;
    uint32_t func_index_;
    CodeMeta& meta_;
    const FuncCode& code_;
    uint32_t local_count_ = 0;
    uint32_t height_ = 0;
    std::vector<ValCtrl> ctrls_;
};

}  // namespace detail

// Static checks: stack-type discipline per instruction, in-range indices,
// export/table targets. Fills the module's code_meta as a side effect so
// the interpreter can jump blocks without rescanning.
inline void validate_module(WasmModule& m) {
    for (const auto& [name, idx] : m.exports)
        if (idx >= m.func_count())
            throw ValidateError(idx, 0, "export '" + name + "' out of range");
    for (uint32_t slot : m.function_table)
        if (slot != kNullFuncRef && slot >= m.func_count())
            throw ValidateError(slot, 0, "table entry out of range");
    for (const auto& fc : m.functions)
        if (fc.type_index >= m.types.size())
            throw ValidateError(fc.type_index, 0, "function type index out of range");
    for (const auto& imp : m.imports)
        if (imp.type_index >= m.types.size())
            throw ValidateError(imp.type_index, 0, "import type index out of range");

    m.code_meta.assign(m.functions.size(), CodeMeta{});
    for (uint32_t i = 0; i < m.functions.size(); ++i) {
        uint32_t func_index = static_cast<uint32_t>(m.imports.size()) + i;
        detail::BodyValidator v(m, func_index, m.code_meta[i]);
        v.run();
    }
    m.validated = true;
}

}  // namespace wasmio::wasm
