#include "icsim/detect/window.hpp"

#include <cmath>

namespace icsim::detect {

const char* to_string(WindowVerdict v)
{
    switch (v) {
    case WindowVerdict::warming_up: return "warming_up";
    case WindowVerdict::normal: return "normal";
    case WindowVerdict::attack: return "attack";
    }
    return "unknown";
}

SlidingWindow::SlidingWindow(std::size_t capacity, double theta)
    : capacity_(capacity), theta_(theta)
{
    if (capacity == 0)
        throw std::invalid_argument("SlidingWindow: capacity must be positive");
    if (theta <= 0.0 || theta > 1.0)
        throw std::invalid_argument("SlidingWindow: theta must be in (0,1]");
    // Guard against e.g. 0.8*5 rounding up to 5 in floating point.
    required_ = static_cast<std::size_t>(std::ceil(theta * static_cast<double>(capacity) - 1e-9));
    if (required_ == 0)
        required_ = 1;
}

WindowVerdict SlidingWindow::push(SampleVerdict v)
{
    queue_.push_back(v);
    if (v == SampleVerdict::anomaly)
        ++anomalies_;
    if (queue_.size() > capacity_) {
        if (queue_.front() == SampleVerdict::anomaly)
            --anomalies_;
        queue_.pop_front();
    }
    if (queue_.size() < capacity_)
        return WindowVerdict::warming_up;
    return anomalies_ >= required_ ? WindowVerdict::attack : WindowVerdict::normal;
}

void SlidingWindow::reset()
{
    queue_.clear();
    anomalies_ = 0;
}

} // namespace icsim::detect
