#ifndef ICSIM_HARNESS_EVALUATE_HPP
#define ICSIM_HARNESS_EVALUATE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "icsim/collect/collector.hpp"
#include "icsim/detect/monitor.hpp"

namespace icsim::harness {

struct CaptureEval {
    std::string name;
    std::string path;
    int label = 0;
    bool flagged = false;                    // any full window fired
    std::optional<double> first_attack_t;    // capture-relative seconds
    std::optional<double> detection_time_s;  // first_attack_t - onset
    std::string category;
    bool stealthy = false;
};

struct CategoryStats {
    std::size_t total = 0;
    std::size_t detected = 0;
    double percent() const
    {
        return total ? 100.0 * static_cast<double>(detected) / static_cast<double>(total) : 0.0;
    }
};

struct EvalReport {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::optional<double> tpr() const;
    std::optional<double> fpr() const;
    std::map<std::string, CategoryStats> categories; // attack captures only
    CategoryStats stealthy;
    std::optional<double> median_detection_s;
    std::vector<CaptureEval> captures;
    std::string platform;
};

// Per-capture verdict via the any-window rule: a capture counts as attacked
// iff some full window fires. Detection time is first alarm minus onset.
EvalReport evaluate_captures(const detect::AnomalyModel& model, std::size_t window_size,
                             double theta,
                             const std::vector<collect::CaptureRecord>& captures);

// First alarm in a monitor log relative to the attack onset; nullopt when the
// monitor never fires.
std::optional<double> detection_time(const std::vector<detect::MonitorRecord>& log,
                                     double onset_s);

struct SweepCell {
    std::size_t window = 0;
    double theta = 0.0;
    std::optional<double> tpr;
    std::optional<double> fpr;
};

// TPR/FPR grid over window sizes x thresholds; per-sample verdicts are
// computed once per capture and re-windowed per cell.
std::vector<SweepCell> sweep_window_grid(const detect::AnomalyModel& model,
                                         const std::vector<collect::CaptureRecord>& captures,
                                         const std::vector<std::size_t>& windows = {5, 10, 15, 20},
                                         const std::vector<double>& thetas = {0.6, 0.7, 0.8});

std::string report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);
void save_report(const EvalReport& report, const std::string& path);

} // namespace icsim::harness

#endif
