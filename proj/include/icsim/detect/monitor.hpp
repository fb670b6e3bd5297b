#ifndef ICSIM_DETECT_MONITOR_HPP
#define ICSIM_DETECT_MONITOR_HPP

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "icsim/detect/gaussian.hpp"
#include "icsim/detect/iforest.hpp"
#include "icsim/detect/lof.hpp"
#include "icsim/detect/ocsvm.hpp"
#include "icsim/detect/window.hpp"

namespace icsim::detect {

// Any of the four detectors behind one per-sample interface, so every model
// runs under the identical sliding-window wrapper.
class AnomalyModel {
public:
    AnomalyModel() = default;
    explicit AnomalyModel(OcsvmModel m) : model_(std::move(m)) {}
    explicit AnomalyModel(IsolationForest m) : model_(std::move(m)) {}
    explicit AnomalyModel(LofModel m) : model_(std::move(m)) {}
    explicit AnomalyModel(GaussianModel m) : model_(std::move(m)) {}

    std::string kind() const;
    std::size_t dim() const;
    double score(std::span<const double> x) const;
    SampleVerdict classify(std::span<const double> x) const;

    // Feature compatibility metadata persisted with the model.
    std::vector<std::string> columns;
    std::string platform;
    std::string training_fingerprint;

    template <typename T> const T* as() const { return std::get_if<T>(&model_); }
    template <typename T> T* as() { return std::get_if<T>(&model_); }

private:
    std::variant<std::monostate, OcsvmModel, IsolationForest, LofModel, GaussianModel> model_;
};

struct MonitorRecord {
    double t = 0.0;
    double score = 0.0;
    SampleVerdict sample_verdict = SampleVerdict::normal;
    WindowVerdict window_verdict = WindowVerdict::warming_up;
};

// One monitored stream: per-sample classification plus the window state.
class StreamMonitor {
public:
    StreamMonitor(const AnomalyModel& model, std::size_t window, double theta)
        : model_(model), window_(window, theta)
    {
    }

    MonitorRecord push(double t, std::span<const double> x);
    const std::vector<MonitorRecord>& log() const { return log_; }

private:
    const AnomalyModel& model_;
    SlidingWindow window_;
    std::vector<MonitorRecord> log_;
};

} // namespace icsim::detect

#endif
