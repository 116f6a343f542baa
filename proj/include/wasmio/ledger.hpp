#pragma once

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "wasmio/errors.hpp"

namespace wasmio {

// Cost categories. Every unit of simulated work lands in exactly one of
// these; together (minus dma, which models parallel hardware) they define
// the simulation clock.
enum class Category : uint8_t {
    Interp = 0,        // one retired WASM instruction
    WasmioCheck,       // permission checks, label/handle scans, queue bookkeeping
    Driver,            // bus accesses and simulated OS-driver work
    ContextSwitch,     // protection-domain transitions (untrusted runtimes)
    Dma,               // conveyor synchronization work, off the CPU
    ImportGlue,        // host-call frame setup and argument conversion
};

inline constexpr std::size_t kCategoryCount = 6;

inline constexpr std::string_view category_name(Category c) {
    switch (c) {
        case Category::Interp: return "interp";
        case Category::WasmioCheck: return "wasmio_check";
        case Category::Driver: return "driver";
        case Category::ContextSwitch: return "context_switch";
        case Category::Dma: return "dma";
        case Category::ImportGlue: return "import_glue";
    }
    return "?";
}

// Categorized step counts. Stands in for the paper-style instruction
// counts; monotone within a scenario.
struct StepLedger {
    std::array<uint64_t, kCategoryCount> counts{};

    uint64_t& operator[](Category c) { return counts[static_cast<std::size_t>(c)]; }
    uint64_t operator[](Category c) const { return counts[static_cast<std::size_t>(c)]; }

    uint64_t interp() const { return (*this)[Category::Interp]; }
    uint64_t wasmio_check() const { return (*this)[Category::WasmioCheck]; }
    uint64_t driver() const { return (*this)[Category::Driver]; }
    uint64_t context_switch() const { return (*this)[Category::ContextSwitch]; }
    uint64_t dma() const { return (*this)[Category::Dma]; }
    uint64_t import_glue() const { return (*this)[Category::ImportGlue]; }

    // CPU-visible work; excludes DMA which runs on parallel hardware.
    uint64_t cpu_steps() const {
        uint64_t t = 0;
        for (std::size_t i = 0; i < kCategoryCount; ++i)
            if (static_cast<Category>(i) != Category::Dma) t += counts[i];
        return t;
    }

    uint64_t total() const {
        uint64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }

    StepLedger operator-(const StepLedger& rhs) const {
        StepLedger d;
        for (std::size_t i = 0; i < kCategoryCount; ++i) d.counts[i] = counts[i] - rhs.counts[i];
        return d;
    }
    StepLedger& operator+=(const StepLedger& rhs) {
        for (std::size_t i = 0; i < kCategoryCount; ++i) counts[i] += rhs.counts[i];
        return *this;
    }
    bool operator==(const StepLedger&) const = default;
};

// Tunable step costs. The spec pins context_switch / bookkeeping_copy /
// bus_access defaults; the rest are free parameters of the model chosen so
// the qualitative orderings of the paper's figures reproduce. Every value
// can be overridden with `cost <name>=<u32>` lines.
struct CostModel {
    uint32_t bus_access = 2;             // one register-bus read or write (driver)
    uint32_t context_switch = 200;       // one domain transition (untrusted)
    uint32_t bookkeeping_copy = 300;     // MMIO-untrusted kernel copy of runtime structures
    uint32_t import_glue = 20;           // host-call frame setup + argument conversion
    uint32_t osapi_indirection = 1;      // extra kernel-level driver API call (driver)
    uint32_t prologue_entry = 10;        // fixed prologue overhead (wasmio_check)
    uint32_t system_epilogue_entry = 8;  // fixed system-epilogue overhead per IRQ (wasmio_check)
    uint32_t copy_step = 1;              // materializing one snapshot copy (wasmio_check)
    uint32_t epilogue_dispatch = 15;     // fresh execution environment per WASM epilogue (import_glue)
    uint32_t firmware_epilogue = 25;     // firmware epilogue stub body (driver)
    uint32_t driver_poll = 1;            // OSAPI SPI driver loop iteration overhead (driver)
    uint32_t dma_poll = 1;               // conveyor mapping poll per sync (dma)
    uint32_t spi_copy_per_byte = 1;      // untrusted OSAPI SPI linear-memory copy, per byte

    bool set(std::string_view name, uint32_t value) {
        if (name == "bus_access") bus_access = value;
        else if (name == "context_switch") context_switch = value;
        else if (name == "bookkeeping_copy") bookkeeping_copy = value;
        else if (name == "import_glue") import_glue = value;
        else if (name == "osapi_indirection") osapi_indirection = value;
        else if (name == "prologue_entry") prologue_entry = value;
        else if (name == "system_epilogue_entry") system_epilogue_entry = value;
        else if (name == "copy_step") copy_step = value;
        else if (name == "epilogue_dispatch") epilogue_dispatch = value;
        else if (name == "firmware_epilogue") firmware_epilogue = value;
        else if (name == "driver_poll") driver_poll = value;
        else if (name == "dma_poll") dma_poll = value;
        else if (name == "spi_copy_per_byte") spi_copy_per_byte = value;
        else return false;
        return true;
    }
};

// Parses `cost <name>=<u32>` lines; `#` starts a comment, blank lines ok.
inline CostModel parse_cost_overrides(const std::string& text, CostModel base = {}) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word != "cost") throw ParseError(lineno, "expected 'cost', got '" + word + "'");
        std::string kv;
        if (!(ls >> kv)) throw ParseError(lineno, "missing <name>=<u32>");
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "missing '=' in '" + kv + "'");
        std::string name = kv.substr(0, eq);
        std::string val = kv.substr(eq + 1);
        uint64_t v = 0;
        try {
            std::size_t pos = 0;
            v = std::stoull(val, &pos, 0);
            if (pos != val.size() || v > UINT32_MAX) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ParseError(lineno, "bad u32 value '" + val + "'");
        }
        if (!base.set(name, static_cast<uint32_t>(v)))
            throw ParseError(lineno, "unknown cost name '" + name + "'");
        std::string extra;
        if (ls >> extra) throw ParseError(lineno, "trailing tokens after '" + kv + "'");
    }
    return base;
}

}  // namespace wasmio
