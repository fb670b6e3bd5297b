#ifndef ICSIM_SIM_CLOCK_HPP
#define ICSIM_SIM_CLOCK_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <thread>

namespace icsim::sim {

// Simulated-time clock shared across testbed components. Time advances only
// when the owning tick loop calls advance(); acceleration scales the wall
// pacing of that loop and never the dynamics.
class SimClock {
public:
    explicit SimClock(double dt_s = 1.0, double acceleration = 20.0)
        : dt_ms_(static_cast<std::int64_t>(dt_s * 1000.0)), acceleration_(acceleration)
    {
        if (dt_s <= 0.0)
            throw std::invalid_argument("SimClock: dt must be positive");
        if (acceleration <= 0.0)
            throw std::invalid_argument("SimClock: acceleration must be positive");
    }

    double now_s() const { return static_cast<double>(now_ms_.load(std::memory_order_acquire)) / 1000.0; }
    double dt_s() const { return static_cast<double>(dt_ms_) / 1000.0; }
    double acceleration() const { return acceleration_; }

    void advance() { now_ms_.fetch_add(dt_ms_, std::memory_order_acq_rel); }

    // Sleeps one accelerated step of wall time; sub-millisecond waits are
    // skipped so high accelerations free-run.
    void pace() const
    {
        const double wall_ms = static_cast<double>(dt_ms_) / acceleration_;
        if (wall_ms >= 1.0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(static_cast<std::int64_t>(wall_ms)));
    }

private:
    std::atomic<std::int64_t> now_ms_{0};
    std::int64_t dt_ms_;
    double acceleration_;
};

} // namespace icsim::sim

#endif
