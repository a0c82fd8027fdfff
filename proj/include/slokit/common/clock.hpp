#pragma once
#include <atomic>
#include <chrono>
#include <cstdint>
#include <stdexcept>

namespace slokit {

class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now_ms() const = 0;
};

/// Manually advanced time source; the only clock used by tests and the
/// deterministic pipeline mode.
class SimClock final : public Clock {
public:
    explicit SimClock(std::int64_t start_ms = 0) : now_(start_ms) {}

    std::int64_t now_ms() const override { return now_.load(std::memory_order_acquire); }

    void advance_ms(std::int64_t delta) {
        if (delta < 0) throw std::invalid_argument("SimClock: negative advance");
        now_.fetch_add(delta, std::memory_order_acq_rel);
    }

    void advance_to(std::int64_t t_ms) {
        auto cur = now_.load(std::memory_order_acquire);
        if (t_ms < cur) throw std::invalid_argument("SimClock: time moves forward only");
        now_.store(t_ms, std::memory_order_release);
    }

private:
    std::atomic<std::int64_t> now_;
};

class WallClock final : public Clock {
public:
    std::int64_t now_ms() const override {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    }
};

} // namespace slokit
