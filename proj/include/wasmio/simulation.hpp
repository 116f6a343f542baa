#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wasmio/devices.hpp"
#include "wasmio/ledger.hpp"

namespace wasmio {

struct RaisedIrq {
    std::string label;
    uint8_t line = 0;
    uint64_t step = 0;  // device-exact arrival step, may precede the current clock
};

// Single simulation timeline: the clock advances with every charged cost
// step except `dma` (parallel hardware), plus explicit idle gaps. Devices
// are advanced lazily whenever the clock moves; their interrupt raises
// queue up for the scheduler to drain at instruction boundaries.
class Simulation {
  public:
    explicit Simulation(CostModel costs = {}) : costs_(costs) {}

    uint64_t clock() const { return clock_; }
    const StepLedger& ledger() const { return ledger_; }
    const CostModel& costs() const { return costs_; }
    RegisterFile& bus() { return bus_; }
    const RegisterFile& bus() const { return bus_; }

    void add_device(std::unique_ptr<Device> dev) {
        dev->set_irq_sink([this](const std::string& label, uint8_t line, uint64_t step) {
            raised_.push_back({label, line, step});
        });
        dev->attach(bus_);
        devices_.push_back(std::move(dev));
    }

    template <typename T>
    T* find_device() {
        for (auto& d : devices_)
            if (auto* t = dynamic_cast<T*>(d.get())) return t;
        return nullptr;
    }

    void charge(Category cat, uint64_t steps) {
        ledger_[cat] += steps;
        if (cat != Category::Dma && steps > 0) {
            clock_ += steps;
            advance_devices();
            if (cat == Category::Interp) {
                ++interp_since_sync_;
                run_due_dma();
            }
        }
    }

    // Advances through an idle gap (no CPU work to account for).
    void idle_until(uint64_t step) {
        if (step > clock_) {
            clock_ = step;
            advance_devices();
            sync_dma_now();  // scenario barrier
        }
    }

    // Earliest future device event, or kNoDeviceEvent.
    uint64_t next_device_event() const {
        uint64_t next = kNoDeviceEvent;
        for (const auto& d : devices_)
            next = std::min(next, d->next_event_step());
        return next;
    }

    bool has_raised() const { return !raised_.empty(); }
    RaisedIrq pop_raised() {
        RaisedIrq r = raised_.front();
        raised_.pop_front();
        return r;
    }

    // Bus access performed by a service/driver path: one access = one
    // driver charge of bus_access steps, then the transaction itself.
    uint32_t timed_read(uint32_t addr, uint32_t width) {
        charge(Category::Driver, costs_.bus_access);
        return bus_.bus_read(addr, width, clock_);
    }
    void timed_write(uint32_t addr, uint32_t width, uint32_t value) {
        charge(Category::Driver, costs_.bus_access);
        bus_.bus_write(addr, width, value, clock_);
    }

    // External-world mutation (scenario events): traced, costs nothing.
    void external_write(uint32_t addr, uint32_t width, uint32_t value) {
        bus_.bus_write(addr, width, value, clock_);
    }

    // Conveyor synchronization hooks; each runs after every interpreter
    // step and decides internally whether its period elapsed. Barriers
    // force a sync regardless of period.
    void add_dma_controller(std::function<void()> sync) { dma_controllers_.push_back(std::move(sync)); }
    void sync_dma_now() {
        for (auto& s : dma_controllers_) s();
    }

  private:
    void advance_devices() {
        for (auto& d : devices_) d->advance_to(clock_);
    }

    void run_due_dma() {
        for (auto& s : dma_controllers_) s();
    }

    CostModel costs_;
    StepLedger ledger_;
    uint64_t clock_ = 0;
    uint64_t interp_since_sync_ = 0;
    RegisterFile bus_;
    std::vector<std::unique_ptr<Device>> devices_;
    std::deque<RaisedIrq> raised_;
    std::vector<std::function<void()>> dma_controllers_;
};

}  // namespace wasmio
