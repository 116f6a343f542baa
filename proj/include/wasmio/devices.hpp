#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wasmio/errors.hpp"

namespace wasmio {

inline constexpr uint32_t width_mask(uint32_t width) {
    return width >= 4 ? 0xFFFFFFFFu : ((1u << (8 * width)) - 1u);
}

struct BusEvent {
    enum class Kind : uint8_t { Read, Write };
    uint64_t step;
    uint32_t addr;
    Kind kind;
    uint32_t value;
    bool operator==(const BusEvent&) const = default;
};

// The simulated register bus. Devices register cells and hook side
// effects; every access lands in the event trace while recording is on.
// Unknown addresses are a host bug, never reachable from services.
class RegisterFile {
  public:
    using ReadHook = std::function<uint32_t(uint64_t step)>;
    using WriteHook = std::function<void(uint32_t value, uint64_t step)>;

    void add_cell(uint32_t addr, uint32_t width, uint32_t initial = 0) {
        if (cells_.count(addr)) throw SimulationFault("duplicate cell at " + std::to_string(addr));
        cells_[addr] = Cell{initial & width_mask(width), static_cast<uint8_t>(width), {}, {}};
    }

    bool has_cell(uint32_t addr) const { return cells_.count(addr) != 0; }

    uint32_t cell_width(uint32_t addr) const { return find(addr).width; }

    void set_read_hook(uint32_t addr, ReadHook hook) { find(addr).on_read = std::move(hook); }
    void set_write_hook(uint32_t addr, WriteHook hook) { find(addr).on_write = std::move(hook); }

    uint32_t bus_read(uint32_t addr, uint32_t width, uint64_t step) {
        Cell& c = find(addr);
        if (width != c.width)
            throw SimulationFault("bus read width " + std::to_string(width) + " at cell of width " +
                                  std::to_string(c.width));
        if (c.on_read) c.value = c.on_read(step) & width_mask(c.width);
        record({step, addr, BusEvent::Kind::Read, c.value});
        return c.value;
    }

    void bus_write(uint32_t addr, uint32_t width, uint32_t value, uint64_t step) {
        Cell& c = find(addr);
        if (width != c.width)
            throw SimulationFault("bus write width " + std::to_string(width) + " at cell of width " +
                                  std::to_string(c.width));
        value &= width_mask(c.width);
        record({step, addr, BusEvent::Kind::Write, value});
        c.value = value;
        if (c.on_write) c.on_write(value, step);
    }

    // Direct cell access for oracles and external-world mutation; bypasses
    // hooks and the trace.
    uint32_t peek(uint32_t addr) const { return find(addr).value; }
    void poke(uint32_t addr, uint32_t value) { find(addr).value = value & width_mask(find(addr).width); }

    const std::vector<BusEvent>& trace() const { return trace_; }
    void clear_trace() { trace_.clear(); }
    void set_trace_enabled(bool on) { trace_enabled_ = on; }

    // Instrumentation tap, fires even when trace recording is off.
    std::function<void(const BusEvent&)> observer;

    std::vector<uint32_t> cell_addrs() const {
        std::vector<uint32_t> out;
        out.reserve(cells_.size());
        for (const auto& [a, _] : cells_) out.push_back(a);
        return out;
    }

  private:
    struct Cell {
        uint32_t value = 0;
        uint8_t width = 4;
        ReadHook on_read;
        WriteHook on_write;
    };

    Cell& find(uint32_t addr) {
        auto it = cells_.find(addr);
        if (it == cells_.end())
            throw SimulationFault("bus access to unregistered address 0x" + to_hex(addr));
        return it->second;
    }
    const Cell& find(uint32_t addr) const { return const_cast<RegisterFile*>(this)->find(addr); }

    static std::string to_hex(uint32_t v) {
        static const char* digits = "0123456789abcdef";
        std::string s;
        for (int i = 7; i >= 0; --i) s.push_back(digits[(v >> (4 * i)) & 0xF]);
        return s;
    }

    void record(const BusEvent& e) {
        if (trace_enabled_) trace_.push_back(e);
        if (observer) observer(e);
    }

    std::map<uint32_t, Cell> cells_;
    std::vector<BusEvent> trace_;
    bool trace_enabled_ = true;
};

inline constexpr uint64_t kNoDeviceEvent = std::numeric_limits<uint64_t>::max();

// Interrupt wire from a device into the platform. `label` names the
// exposed interrupt asserting on `line`.
using IrqSink = std::function<void(const std::string& label, uint8_t line, uint64_t step)>;

class Device {
  public:
    virtual ~Device() = default;
    virtual void attach(RegisterFile& bus) = 0;
    virtual void advance_to(uint64_t step) = 0;
    virtual uint64_t next_event_step() const { return kNoDeviceEvent; }
    void set_irq_sink(IrqSink sink) { irq_ = std::move(sink); }

  protected:
    void raise(const std::string& label, uint8_t line, uint64_t step) {
        if (irq_) irq_(label, line, step);
    }
    IrqSink irq_;
};

// Output register bit k mirrors the observed level of pin k. The input
// register is written by the external world (scenario events).
class GpioBank : public Device {
  public:
    GpioBank(uint32_t out_addr, uint32_t in_addr, uint32_t pin_count)
        : out_addr_(out_addr), in_addr_(in_addr), pin_count_(pin_count) {
        if (pin_count_ == 0 || pin_count_ > 32) throw ConfigError("gpio pin count must be 1..32");
    }

    void attach(RegisterFile& bus) override {
        bus_ = &bus;
        bus.add_cell(out_addr_, 4);
        bus.add_cell(in_addr_, 4);
        bus.set_write_hook(out_addr_, [this](uint32_t value, uint64_t step) {
            uint32_t changed = value ^ levels_;
            levels_ = value;
            if (pin_observer) {
                for (uint32_t pin = 0; pin < pin_count_; ++pin)
                    if (changed & (1u << pin)) pin_observer(pin, (value >> pin) & 1u, step);
            }
        });
    }

    void advance_to(uint64_t) override {}

    bool pin_level(uint32_t pin) const { return (levels_ >> pin) & 1u; }
    uint32_t out_addr() const { return out_addr_; }
    uint32_t in_addr() const { return in_addr_; }

    std::function<void(uint32_t pin, bool level, uint64_t step)> pin_observer;

  private:
    uint32_t out_addr_, in_addr_, pin_count_;
    uint32_t levels_ = 0;
    RegisterFile* bus_ = nullptr;
};

struct SpiWordEvent {
    uint64_t write_step;
    uint64_t completion_step;
    uint16_t word;
};

// Unidirectional transmit with loopback receive, 16-bit words. Writing the
// data register while a transfer is in flight is ignored and flags overrun.
// cycles_per_word = divider * 16.
class SpiController : public Device {
  public:
    static constexpr uint32_t kRxneBit = 1u << 0;
    static constexpr uint32_t kTxeBit = 1u << 1;
    static constexpr uint32_t kOverrunBit = 1u << 2;

    SpiController(uint32_t dr_addr, uint32_t sr_addr, uint32_t cr_addr, uint32_t divider,
                  std::string irq_label = {}, uint8_t irq_line = 0)
        : dr_addr_(dr_addr), sr_addr_(sr_addr), cr_addr_(cr_addr), divider_(divider),
          irq_label_(std::move(irq_label)), irq_line_(irq_line) {
        if (divider_ == 0) throw ConfigError("spi divider must be nonzero");
    }

    void attach(RegisterFile& bus) override {
        bus.add_cell(dr_addr_, 4);
        bus.add_cell(sr_addr_, 4);
        bus.add_cell(cr_addr_, 4, divider_);
        bus.set_write_hook(dr_addr_, [this](uint32_t value, uint64_t step) { write_dr(value, step); });
        bus.set_read_hook(dr_addr_, [this](uint64_t step) {
            advance_to(step);
            rxne_ = false;
            return static_cast<uint32_t>(rx_);
        });
        bus.set_read_hook(sr_addr_, [this](uint64_t step) {
            advance_to(step);
            return status();
        });
        bus.set_write_hook(cr_addr_, [this](uint32_t value, uint64_t) {
            if ((value & 0xFFFF) != 0) divider_ = value & 0xFFFF;
        });
    }

    void advance_to(uint64_t step) override {
        if (in_flight_ && step >= completion_step_) {
            in_flight_ = false;
            rx_ = tx_;
            rxne_ = true;
            if (!irq_label_.empty()) raise(irq_label_, irq_line_, completion_step_);
        }
    }

    uint64_t next_event_step() const override { return in_flight_ ? completion_step_ : kNoDeviceEvent; }

    uint32_t cycles_per_word() const { return divider_ * 16; }
    const std::vector<SpiWordEvent>& word_log() const { return word_log_; }
    bool overrun() const { return overrun_; }
    uint32_t dr_addr() const { return dr_addr_; }
    uint32_t sr_addr() const { return sr_addr_; }
    uint32_t cr_addr() const { return cr_addr_; }

  private:
    uint32_t status() const {
        uint32_t s = 0;
        if (rxne_) s |= kRxneBit;
        if (!in_flight_) s |= kTxeBit;
        if (overrun_) s |= kOverrunBit;
        return s;
    }

    void write_dr(uint32_t value, uint64_t step) {
        advance_to(step);
        if (in_flight_) {
            overrun_ = true;
            return;
        }
        tx_ = static_cast<uint16_t>(value & 0xFFFF);
        in_flight_ = true;
        completion_step_ = step + cycles_per_word();
        word_log_.push_back({step, completion_step_, tx_});
    }

    uint32_t dr_addr_, sr_addr_, cr_addr_;
    uint32_t divider_;
    std::string irq_label_;
    uint8_t irq_line_;
    bool in_flight_ = false;
    bool rxne_ = false;
    bool overrun_ = false;
    uint16_t tx_ = 0, rx_ = 0;
    uint64_t completion_step_ = 0;
    std::vector<SpiWordEvent> word_log_;
};

// Free-running counter equal to the simulation step; one-shot interrupt
// exactly when the counter reaches the compare value. compare == 0 keeps
// the timer disarmed; writing the compare register re-arms.
class TimerDevice : public Device {
  public:
    TimerDevice(uint32_t cnt_addr, uint32_t cmp_addr, uint32_t flag_addr, std::string irq_label,
                uint8_t irq_line, uint64_t compare = 0)
        : cnt_addr_(cnt_addr), cmp_addr_(cmp_addr), flag_addr_(flag_addr),
          irq_label_(std::move(irq_label)), irq_line_(irq_line), compare_(compare) {}

    void attach(RegisterFile& bus) override {
        bus.add_cell(cnt_addr_, 4);
        bus.add_cell(cmp_addr_, 4, static_cast<uint32_t>(compare_));
        bus.add_cell(flag_addr_, 4);
        bus.set_read_hook(cnt_addr_, [](uint64_t step) { return static_cast<uint32_t>(step); });
        bus.set_write_hook(cmp_addr_, [this](uint32_t value, uint64_t) {
            compare_ = value;
            fired_ = false;
        });
    }

    void advance_to(uint64_t step) override {
        if (!fired_ && compare_ != 0 && step >= compare_) {
            fired_ = true;
            raise(irq_label_, irq_line_, compare_);
        }
    }

    uint64_t next_event_step() const override {
        return (!fired_ && compare_ != 0) ? compare_ : kNoDeviceEvent;
    }

    void set_compare(uint64_t compare) {
        compare_ = compare;
        fired_ = false;
    }

    uint32_t cnt_addr() const { return cnt_addr_; }
    uint32_t cmp_addr() const { return cmp_addr_; }
    uint32_t flag_addr() const { return flag_addr_; }

  private:
    uint32_t cnt_addr_, cmp_addr_, flag_addr_;
    std::string irq_label_;
    uint8_t irq_line_;
    uint64_t compare_;
    bool fired_ = false;
};

// Reached-over-configured SPI data rate for a completed transfer window.
// The window opens at `start_step` (entry into the transfer loop); the last
// word completes cycles_per_word after its data-register write.
inline double spi_effective_rate(std::span<const SpiWordEvent> log, uint32_t word_count,
                                 uint32_t cycles_per_word, uint64_t start_step) {
    std::vector<const SpiWordEvent*> in_window;
    for (const auto& e : log)
        if (e.write_step >= start_step) in_window.push_back(&e);
    if (in_window.size() < word_count)
        throw IncompleteTransfer("saw " + std::to_string(in_window.size()) + " of " +
                                 std::to_string(word_count) + " words");
    const SpiWordEvent& last = *in_window[word_count - 1];
    uint64_t duration = last.completion_step - start_step;
    if (duration == 0) throw IncompleteTransfer("empty transfer window");
    return static_cast<double>(static_cast<uint64_t>(word_count) * cycles_per_word) /
           static_cast<double>(duration);
}

}  // namespace wasmio
