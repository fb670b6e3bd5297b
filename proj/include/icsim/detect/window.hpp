#ifndef ICSIM_DETECT_WINDOW_HPP
#define ICSIM_DETECT_WINDOW_HPP

#include <cstddef>
#include <deque>
#include <stdexcept>

namespace icsim::detect {

enum class SampleVerdict : unsigned char { normal, anomaly };
enum class WindowVerdict : unsigned char { warming_up, normal, attack };

const char* to_string(WindowVerdict v);

// Fixed-capacity FIFO of per-sample verdicts. No window verdict is available
// until the queue has filled once; from then on, attack iff the anomaly count
// reaches ceil(theta * capacity).
class SlidingWindow {
public:
    SlidingWindow(std::size_t capacity, double theta);

    WindowVerdict push(SampleVerdict v);

    std::size_t capacity() const { return capacity_; }
    double theta() const { return theta_; }
    std::size_t required() const { return required_; }
    std::size_t anomaly_count() const { return anomalies_; }
    bool full() const { return queue_.size() == capacity_; }
    void reset();

private:
    std::size_t capacity_;
    double theta_;
    std::size_t required_;
    std::deque<SampleVerdict> queue_;
    std::size_t anomalies_ = 0;
};

} // namespace icsim::detect

#endif
