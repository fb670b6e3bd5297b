#include "icsim/harness/campaign.hpp"

#include <filesystem>
#include <stdexcept>

namespace icsim::harness {

namespace fs = std::filesystem;

collect::CaptureRecord run_training_capture(const TestbedConfig& config, Platform platform,
                                            const std::string& csv_path, std::uint64_t seed)
{
    Testbed bed(config, platform, nullptr, seed);
    bed.warmup(config.warmup_s(platform));
    auto record = bed.capture(csv_path);
    record.scenario = "benign-train";
    bed.shutdown();
    return record;
}

std::vector<collect::CaptureRecord> run_benign_series(const TestbedConfig& config,
                                                      Platform platform, std::size_t n,
                                                      const std::string& out_dir,
                                                      std::uint64_t seed)
{
    fs::create_directories(out_dir);
    Testbed bed(config, platform, nullptr, seed);
    bed.warmup(config.warmup_s(platform));

    std::vector<collect::CaptureRecord> records;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string path =
            (fs::path(out_dir) / ("benign_" + std::to_string(i) + ".csv")).string();
        auto record = bed.capture(path);
        record.scenario = "benign_" + std::to_string(i);
        records.push_back(std::move(record));
    }
    bed.shutdown();
    return records;
}

collect::CaptureRecord run_attack_capture(const TestbedConfig& config,
                                          const mitm::AttackScenario& scenario,
                                          const std::string& csv_path, std::uint64_t seed)
{
    const Platform platform = platform_from_string(scenario.platform);
    Testbed bed(config, platform, &scenario, seed);
    bed.warmup(config.warmup_s(platform));
    auto record = bed.capture(csv_path);

    // A capture that saw no rewite despite carrying rules would be vacuous;
    // require the log to start at or after the onset.
    const auto log = bed.rewrite_log();
    for (const auto& rec : log)
        if (rec.t < scenario.onset_s - 1e-9)
            throw std::logic_error("attack rewrite before onset in " + scenario.name);
    bed.shutdown();
    return record;
}

detect::AnomalyModel train_model(const std::string& kind,
                                 const std::vector<collect::CaptureRecord>& training,
                                 const TestbedConfig& config)
{
    if (training.empty())
        throw std::invalid_argument("train_model: no training captures");

    detect::FeatureMatrix x;
    std::vector<std::string> columns;
    for (const auto& rec : training) {
        if (rec.label != 0)
            throw std::invalid_argument("train_model: training captures must be benign");
        const auto cap = collect::load_capture_csv(rec.path);
        if (columns.empty())
            columns = cap.columns;
        else if (columns != cap.columns)
            throw std::invalid_argument("train_model: training captures disagree on columns");
        for (const auto& row : cap.rows)
            x.push_row(row.features);
    }

    detect::AnomalyModel model;
    if (kind == "ocsvm") {
        model = detect::AnomalyModel(detect::fit_ocsvm(x));
    } else if (kind == "iforest") {
        detect::IforestFitOptions opt;
        opt.seed = config.seed;
        model = detect::AnomalyModel(detect::fit_iforest(x, opt));
    } else if (kind == "lof") {
        model = detect::AnomalyModel(detect::fit_lof(x));
    } else {
        throw std::invalid_argument("train_model: unknown kind " + kind);
    }
    model.columns = columns;
    model.platform = training.front().platform;
    model.training_fingerprint = detect::file_fingerprint(training.front().path);
    return model;
}

CampaignResult run_campaign(const TestbedConfig& config, const CampaignOptions& options)
{
    if (options.out_dir.empty())
        throw std::invalid_argument("run_campaign: out_dir required");
    fs::create_directories(options.out_dir);
    const fs::path out(options.out_dir);

    CampaignResult result;
    const std::uint64_t base_seed = config.seed;

    result.training = run_training_capture(config, options.platform,
                                           (out / "train.csv").string(), base_seed + 1);

    result.evaluation = run_benign_series(config, options.platform, options.benign_captures,
                                          (out / "benign").string(), base_seed + 2);

    fs::create_directories(out / "attacks");
    std::uint64_t attack_seed = base_seed + 100;
    for (const auto& scenario : options.scenarios) {
        const std::string path = (out / "attacks" / (scenario.name + ".csv")).string();
        result.evaluation.push_back(run_attack_capture(config, scenario, path, attack_seed++));
    }

    auto model = train_model(options.model_kind, {result.training}, config);
    result.model_path = (out / (options.model_kind + "_model.json")).string();
    detect::save_model(model, result.model_path);

    std::vector<collect::CaptureRecord> manifest;
    manifest.push_back(result.training);
    manifest.insert(manifest.end(), result.evaluation.begin(), result.evaluation.end());
    result.manifest_path = (out / "captures.json").string();
    collect::save_manifest(manifest, result.manifest_path);

    const auto& window = config.window(options.platform);
    result.report = evaluate_captures(model, window.size, window.theta, result.evaluation);
    save_report(result.report, (out / "report.json").string());
    return result;
}

} // namespace icsim::harness
