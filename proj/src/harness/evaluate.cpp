#include "icsim/harness/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace icsim::harness {

using nlohmann::json;

std::optional<double> EvalReport::tpr() const
{
    const std::size_t attacks = tp + fn;
    if (attacks == 0)
        return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(attacks);
}

std::optional<double> EvalReport::fpr() const
{
    const std::size_t benign = fp + tn;
    if (benign == 0)
        return std::nullopt;
    return static_cast<double>(fp) / static_cast<double>(benign);
}

std::optional<double> detection_time(const std::vector<detect::MonitorRecord>& log,
                                     double onset_s)
{
    for (const auto& rec : log)
        if (rec.window_verdict == detect::WindowVerdict::attack)
            return rec.t - onset_s;
    return std::nullopt;
}

namespace {

void check_columns(const detect::AnomalyModel& model, const collect::LoadedCapture& cap,
                   const std::string& path)
{
    if (model.columns.empty())
        return; // legacy model without column metadata
    if (model.columns != cap.columns)
        throw std::runtime_error("capture columns do not match the model: " + path);
}

} // namespace

EvalReport evaluate_captures(const detect::AnomalyModel& model, std::size_t window_size,
                             double theta,
                             const std::vector<collect::CaptureRecord>& captures)
{
    EvalReport report;
    std::vector<double> detection_times;

    for (const auto& rec : captures) {
        if (!rec.valid)
            throw std::runtime_error("evaluate: invalid capture in set: " + rec.path);
        if (report.platform.empty())
            report.platform = rec.platform;
        else if (report.platform != rec.platform)
            throw std::runtime_error("evaluate: mixed platforms in one capture set");

        const auto cap = collect::load_capture_csv(rec.path);
        check_columns(model, cap, rec.path);

        detect::StreamMonitor monitor(model, window_size, theta);
        for (const auto& row : cap.rows)
            monitor.push(row.t, row.features);

        CaptureEval ev;
        ev.name = rec.scenario;
        ev.path = rec.path;
        ev.label = rec.label;
        ev.category = rec.category;
        ev.stealthy = rec.stealthy;
        for (const auto& m : monitor.log()) {
            if (m.window_verdict == detect::WindowVerdict::attack) {
                ev.flagged = true;
                ev.first_attack_t = m.t;
                break;
            }
        }
        if (ev.flagged && rec.label == 1) {
            ev.detection_time_s = *ev.first_attack_t - rec.onset_s;
            detection_times.push_back(*ev.detection_time_s);
        }

        if (rec.label == 1) {
            ev.flagged ? ++report.tp : ++report.fn;
            auto& cat = report.categories[rec.category];
            ++cat.total;
            if (ev.flagged)
                ++cat.detected;
            if (rec.stealthy) {
                ++report.stealthy.total;
                if (ev.flagged)
                    ++report.stealthy.detected;
            }
        } else {
            ev.flagged ? ++report.fp : ++report.tn;
        }
        report.captures.push_back(std::move(ev));
    }

    if (!detection_times.empty()) {
        std::sort(detection_times.begin(), detection_times.end());
        const std::size_t n = detection_times.size();
        report.median_detection_s = n % 2 == 1
                                        ? detection_times[n / 2]
                                        : 0.5 * (detection_times[n / 2 - 1] +
                                                 detection_times[n / 2]);
    }

    // Accounting identities hold by construction; keep them hard-checked.
    std::size_t attacks = 0, benign = 0;
    for (const auto& r : captures)
        (r.label == 1 ? attacks : benign) += 1;
    if (report.tp + report.fn != attacks || report.tn + report.fp != benign)
        throw std::logic_error("evaluate: confusion counts do not add up");
    return report;
}

std::vector<SweepCell> sweep_window_grid(const detect::AnomalyModel& model,
                                         const std::vector<collect::CaptureRecord>& captures,
                                         const std::vector<std::size_t>& windows,
                                         const std::vector<double>& thetas)
{
    // Per-sample verdicts once per capture.
    struct Scored {
        int label;
        std::vector<detect::SampleVerdict> verdicts;
    };
    std::vector<Scored> scored;
    for (const auto& rec : captures) {
        const auto cap = collect::load_capture_csv(rec.path);
        check_columns(model, cap, rec.path);
        Scored s;
        s.label = rec.label;
        s.verdicts.reserve(cap.rows.size());
        for (const auto& row : cap.rows)
            s.verdicts.push_back(model.classify(row.features));
        scored.push_back(std::move(s));
    }

    std::vector<SweepCell> grid;
    for (std::size_t w : windows) {
        for (double theta : thetas) {
            std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
            for (const auto& s : scored) {
                detect::SlidingWindow window(w, theta);
                bool fired = false;
                for (auto v : s.verdicts)
                    if (window.push(v) == detect::WindowVerdict::attack) {
                        fired = true;
                        break;
                    }
                if (s.label == 1)
                    fired ? ++tp : ++fn;
                else
                    fired ? ++fp : ++tn;
            }
            SweepCell cell;
            cell.window = w;
            cell.theta = theta;
            if (tp + fn > 0)
                cell.tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
            if (fp + tn > 0)
                cell.fpr = static_cast<double>(fp) / static_cast<double>(fp + tn);
            grid.push_back(cell);
        }
    }
    return grid;
}

std::string report_to_json(const EvalReport& r)
{
    json j;
    j["platform"] = r.platform;
    j["tp"] = r.tp;
    j["fp"] = r.fp;
    j["tn"] = r.tn;
    j["fn"] = r.fn;
    if (r.tpr())
        j["tpr"] = *r.tpr();
    if (r.fpr())
        j["fpr"] = *r.fpr();
    if (r.median_detection_s)
        j["median_detection_s"] = *r.median_detection_s;
    j["categories"] = json::object();
    for (const auto& [name, stats] : r.categories)
        j["categories"][name] = {{"total", stats.total},
                                 {"detected", stats.detected},
                                 {"percent", stats.percent()}};
    if (r.stealthy.total)
        j["stealthy"] = {{"total", r.stealthy.total},
                         {"detected", r.stealthy.detected},
                         {"percent", r.stealthy.percent()}};
    j["captures"] = json::array();
    for (const auto& c : r.captures) {
        json e;
        e["name"] = c.name;
        e["path"] = c.path;
        e["label"] = c.label;
        e["flagged"] = c.flagged;
        if (c.first_attack_t)
            e["first_attack_t"] = *c.first_attack_t;
        if (c.detection_time_s)
            e["detection_time_s"] = *c.detection_time_s;
        if (!c.category.empty())
            e["category"] = c.category;
        e["stealthy"] = c.stealthy;
        j["captures"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

std::string report_to_text(const EvalReport& r)
{
    std::ostringstream ss;
    ss << "platform: " << r.platform << "\n";
    ss << "TP " << r.tp << "  FP " << r.fp << "  TN " << r.tn << "  FN " << r.fn << "\n";
    auto pct = [](std::optional<double> v) {
        if (!v)
            return std::string("n/a");
        std::ostringstream p;
        p.precision(1);
        p << std::fixed << 100.0 * *v << "%";
        return p.str();
    };
    ss << "TPR " << pct(r.tpr()) << "  FPR " << pct(r.fpr()) << "\n";
    if (r.median_detection_s)
        ss << "median detection time: " << *r.median_detection_s << " s\n";
    if (!r.categories.empty()) {
        ss << "identification by category:\n";
        for (const auto& [name, stats] : r.categories) {
            ss.precision(1);
            ss << "  " << name << ": " << stats.detected << "/" << stats.total << " ("
               << std::fixed << stats.percent() << "%)\n";
        }
        if (r.stealthy.total) {
            ss.precision(1);
            ss << "  Stealthy: " << r.stealthy.detected << "/" << r.stealthy.total << " ("
               << std::fixed << r.stealthy.percent() << "%)\n";
        }
    }
    return ss.str();
}

void save_report(const EvalReport& report, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write report: " + path);
    out << report_to_json(report);
}

} // namespace icsim::harness
