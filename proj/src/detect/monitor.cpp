#include "icsim/detect/monitor.hpp"

#include <stdexcept>

namespace icsim::detect {

std::string AnomalyModel::kind() const
{
    if (std::holds_alternative<OcsvmModel>(model_))
        return "ocsvm";
    if (std::holds_alternative<IsolationForest>(model_))
        return "iforest";
    if (std::holds_alternative<LofModel>(model_))
        return "lof";
    if (std::holds_alternative<GaussianModel>(model_))
        return "gaussian";
    return "empty";
}

std::size_t AnomalyModel::dim() const
{
    if (auto* m = std::get_if<OcsvmModel>(&model_))
        return m->dim;
    if (auto* m = std::get_if<IsolationForest>(&model_))
        return m->dim;
    if (auto* m = std::get_if<LofModel>(&model_))
        return m->train.d;
    if (auto* m = std::get_if<GaussianModel>(&model_))
        return m->mean.size();
    return 0;
}

double AnomalyModel::score(std::span<const double> x) const
{
    if (auto* m = std::get_if<OcsvmModel>(&model_))
        return m->decision(x);
    if (auto* m = std::get_if<IsolationForest>(&model_))
        return m->score(x);
    if (auto* m = std::get_if<LofModel>(&model_))
        return m->score(x);
    if (auto* m = std::get_if<GaussianModel>(&model_))
        return m->log_density(x);
    throw std::logic_error("AnomalyModel: empty model");
}

SampleVerdict AnomalyModel::classify(std::span<const double> x) const
{
    bool anomaly = false;
    if (auto* m = std::get_if<OcsvmModel>(&model_))
        anomaly = m->is_anomaly(x);
    else if (auto* m = std::get_if<IsolationForest>(&model_))
        anomaly = m->is_anomaly(x);
    else if (auto* m = std::get_if<LofModel>(&model_))
        anomaly = m->is_anomaly(x);
    else if (auto* m = std::get_if<GaussianModel>(&model_))
        anomaly = m->is_anomaly(x);
    else
        throw std::logic_error("AnomalyModel: empty model");
    return anomaly ? SampleVerdict::anomaly : SampleVerdict::normal;
}

MonitorRecord StreamMonitor::push(double t, std::span<const double> x)
{
    MonitorRecord rec;
    rec.t = t;
    rec.score = model_.score(x);
    rec.sample_verdict = model_.classify(x);
    rec.window_verdict = window_.push(rec.sample_verdict);
    log_.push_back(rec);
    return rec;
}

} // namespace icsim::detect
