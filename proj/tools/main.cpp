#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "icsim/detect/model_io.hpp"
#include "icsim/harness/campaign.hpp"
#include "icsim/harness/split.hpp"
#include "icsim/harness/suite.hpp"
#include "icsim/harness/testbed.hpp"

using namespace icsim;
using namespace icsim::harness;

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config_path;
    TestbedConfig config = default_config();

    void load()
    {
        if (!config_path.empty())
            config = load_config(config_path);
    }
};

Platform parse_platform(const std::string& s) { return platform_from_string(s); }

int cmd_simulate(Common& common, const std::string& platform_name, double duration,
                 std::uint64_t seed)
{
    common.load();
    const Platform platform = parse_platform(platform_name);
    Testbed bed(common.config, platform, nullptr, seed);
    const double dt = common.config.dt_s;
    const auto steps = static_cast<std::size_t>(duration / dt);
    for (std::size_t i = 1; i <= steps; ++i) {
        bed.warmup(dt);
        if (i % 10 == 0 || i == steps) {
            const auto& im = bed.plc_image();
            std::cout << "t=" << bed.clock().now_s() << "s sensors=[";
            for (std::size_t j = 0; j < im.sensors.size(); ++j)
                std::cout << (j ? "," : "") << im.sensors[j];
            std::cout << "] stale=" << im.consecutive_stale << "\n";
        }
    }
    bed.shutdown();
    return 0;
}

int cmd_collect(Common& common, const std::string& platform_name, const std::string& out_dir,
                std::size_t count, std::uint64_t seed, bool training)
{
    common.load();
    const Platform platform = parse_platform(platform_name);
    fs::create_directories(out_dir);

    std::vector<collect::CaptureRecord> records;
    if (training) {
        records.push_back(run_training_capture(common.config, platform,
                                               (fs::path(out_dir) / "train.csv").string(), seed));
    } else {
        records = run_benign_series(common.config, platform, count, out_dir, seed);
    }
    const std::string manifest = (fs::path(out_dir) / "captures.json").string();
    collect::save_manifest(records, manifest);
    std::cout << records.size() << " capture(s) written, manifest " << manifest << "\n";
    return 0;
}

int cmd_attack(Common& common, const std::string& scenario_path, const std::string& out_dir,
               std::uint64_t seed)
{
    common.load();
    const auto scenario = mitm::load_scenario(scenario_path);
    fs::create_directories(out_dir);
    const std::string csv = (fs::path(out_dir) / (scenario.name + ".csv")).string();

    const Platform platform = platform_from_string(scenario.platform);
    Testbed bed(common.config, platform, &scenario, seed);
    bed.warmup(common.config.warmup_s(platform));
    auto record = bed.capture(csv);
    const auto log = bed.rewrite_log();
    bed.shutdown();

    const std::string log_path = (fs::path(out_dir) / (scenario.name + "_rewrites.jsonl")).string();
    std::ofstream log_out(log_path);
    for (const auto& r : log) {
        log_out << "{\"t\":" << r.t << ",\"direction\":\"" << mitm::to_string(r.direction)
                << "\",\"table\":\"" << modbus::to_string(r.table) << "\",\"address\":" << r.address
                << ",\"before\":" << r.before << ",\"after\":" << r.after << "}\n";
    }
    collect::save_manifest({record}, (fs::path(out_dir) / (scenario.name + ".json")).string());
    std::cout << "capture " << csv << " rows=" << record.rows << " rewrites=" << log.size()
              << "\n";
    return 0;
}

std::vector<collect::CaptureRecord> training_records(const std::string& manifest_path)
{
    auto records = collect::load_manifest(manifest_path);
    std::vector<collect::CaptureRecord> train;
    for (const auto& r : records)
        if (r.label == 0 && r.scenario == "benign-train")
            train.push_back(r);
    if (train.empty())
        for (const auto& r : records)
            if (r.label == 0) {
                train.push_back(r);
                break;
            }
    if (train.empty())
        throw std::runtime_error("no benign capture in manifest to train on");
    return train;
}

detect::AnomalyModel train_gaussian(const std::string& kind,
                                    const std::vector<collect::CaptureRecord>& train,
                                    const std::string& validation_manifest)
{
    if (validation_manifest.empty())
        throw std::runtime_error(kind + " training needs --validation (labeled captures) "
                                        "to tune the density threshold");
    detect::FeatureMatrix x;
    std::vector<std::string> columns;
    for (const auto& rec : train) {
        const auto cap = collect::load_capture_csv(rec.path);
        columns = cap.columns;
        for (const auto& row : cap.rows)
            x.push_row(row.features);
    }
    detect::GaussianFitOptions opt;
    opt.mode = kind == "mga" ? detect::GaussianModel::Mode::multivariate
                             : detect::GaussianModel::Mode::independent;
    auto gaussian = detect::fit_gaussian(x, opt);

    std::vector<double> scores;
    std::vector<int> labels;
    for (const auto& rec : collect::load_manifest(validation_manifest)) {
        const auto cap = collect::load_capture_csv(rec.path);
        for (const auto& row : cap.rows) {
            scores.push_back(gaussian.log_density(row.features));
            labels.push_back(rec.label);
        }
    }
    gaussian.log_epsilon = detect::tune_log_epsilon(scores, labels);

    detect::AnomalyModel model(std::move(gaussian));
    model.columns = columns;
    model.platform = train.front().platform;
    model.training_fingerprint = detect::file_fingerprint(train.front().path);
    return model;
}

int cmd_train(Common& common, const std::string& manifest_path, const std::string& capture_path,
              const std::string& kind, const std::string& validation, const std::string& out)
{
    common.load();
    std::vector<collect::CaptureRecord> train;
    if (!capture_path.empty()) {
        collect::CaptureRecord r;
        r.path = capture_path;
        r.label = 0;
        const auto cap = collect::load_capture_csv(capture_path);
        r.platform = cap.columns.size() == 26 ? "chem" : "line";
        train.push_back(r);
    } else {
        train = training_records(manifest_path);
    }
    const auto model = kind == "iga" || kind == "mga"
                           ? train_gaussian(kind, train, validation)
                           : train_model(kind, train, common.config);
    detect::save_model(model, out);
    std::cout << kind << " model trained on " << train.size() << " capture(s) -> " << out << "\n";
    return 0;
}

int cmd_monitor(Common& common, const std::string& model_path, const std::string& capture_path,
                const std::string& scenario_path, std::uint64_t seed, const std::string& out,
                std::size_t window_override, double theta_override)
{
    common.load();
    const auto model = detect::load_model(model_path);
    const Platform platform =
        model.platform.empty() ? Platform::chem : platform_from_string(model.platform);
    std::size_t w = window_override ? window_override : common.config.window(platform).size;
    double theta = theta_override > 0 ? theta_override : common.config.window(platform).theta;

    detect::StreamMonitor monitor(model, w, theta);
    std::ofstream log_out;
    if (!out.empty())
        log_out.open(out);
    auto emit = [&](const detect::MonitorRecord& rec) {
        if (log_out)
            log_out << "{\"t\":" << rec.t << ",\"score\":" << rec.score << ",\"sample\":\""
                    << (rec.sample_verdict == detect::SampleVerdict::anomaly ? "anomaly" : "normal")
                    << "\",\"window\":\"" << detect::to_string(rec.window_verdict) << "\"}\n";
    };

    double onset = 0.0;
    if (!capture_path.empty()) {
        const auto cap = collect::load_capture_csv(capture_path);
        for (const auto& row : cap.rows)
            emit(monitor.push(row.t, row.features));
    } else {
        std::optional<mitm::AttackScenario> scenario;
        if (!scenario_path.empty()) {
            scenario = mitm::load_scenario(scenario_path);
            onset = scenario->onset_s;
        }
        Testbed bed(common.config, platform, scenario ? &*scenario : nullptr, seed);
        bed.warmup(common.config.warmup_s(platform));
        const auto tmp = fs::temp_directory_path() / "icsim_monitor_capture.csv";
        bed.capture(tmp.string(), [&](double t, const collect::FeatureVector& fv) {
            emit(monitor.push(t, fv.values));
        });
        bed.shutdown();
        fs::remove(tmp);
    }

    const auto det = detection_time(monitor.log(), onset);
    std::size_t anomalies = 0;
    for (const auto& r : monitor.log())
        if (r.sample_verdict == detect::SampleVerdict::anomaly)
            ++anomalies;
    std::cout << "samples=" << monitor.log().size() << " anomalies=" << anomalies;
    if (det)
        std::cout << " first_alarm_after_onset=" << *det << "s";
    else
        std::cout << " no_alarm";
    std::cout << "\n";
    return 0;
}

int cmd_evaluate(Common& common, const std::string& model_path, const std::string& manifest_path,
                 const std::string& out, std::size_t window_override, double theta_override)
{
    common.load();
    const auto model = detect::load_model(model_path);
    auto records = collect::load_manifest(manifest_path);
    // The training capture never takes part in evaluation.
    std::erase_if(records, [](const collect::CaptureRecord& r) {
        return r.scenario == "benign-train";
    });
    const Platform platform =
        records.empty() ? Platform::chem : platform_from_string(records.front().platform);
    const std::size_t w = window_override ? window_override : common.config.window(platform).size;
    const double theta = theta_override > 0 ? theta_override : common.config.window(platform).theta;

    const auto report = evaluate_captures(model, w, theta, records);
    std::cout << report_to_text(report);
    if (!out.empty()) {
        save_report(report, out);
        std::cout << "report -> " << out << "\n";
    }
    return 0;
}

int cmd_sweep(Common& common, const std::string& model_path, const std::string& manifest_path,
              const std::string& out)
{
    common.load();
    const auto model = detect::load_model(model_path);
    auto records = collect::load_manifest(manifest_path);
    std::erase_if(records, [](const collect::CaptureRecord& r) {
        return r.scenario == "benign-train";
    });
    const auto grid = sweep_window_grid(model, records);

    std::ostringstream table;
    table << "window theta TPR FPR\n";
    for (const auto& c : grid) {
        table << c.window << " " << c.theta << " ";
        if (c.tpr)
            table << *c.tpr;
        else
            table << "n/a";
        table << " ";
        if (c.fpr)
            table << *c.fpr;
        else
            table << "n/a";
        table << "\n";
    }
    std::cout << table.str();
    if (!out.empty()) {
        std::ofstream f(out);
        f << table.str();
    }
    return 0;
}

int cmd_split(Common& common, const std::string& manifest_path, const std::string& out_dir,
              std::size_t train, std::size_t validation, std::size_t test, std::uint64_t seed)
{
    common.load();
    const auto records = collect::load_manifest(manifest_path);
    const auto split =
        split_dataset(records, SplitCounts{train, validation, test}, seed, out_dir);
    write_submission_template(split, (fs::path(out_dir) / "submission_template.csv").string());
    std::cout << "split: train=" << split.train.size() << " validation=" << split.validation.size()
              << " test=" << split.test.size() << "\n"
              << "truth (grader only): " << split.truth_path << "\n";
    return 0;
}

int cmd_grade(const std::string& truth, const std::string& submission)
{
    const auto g = grade_submission(truth, submission);
    std::cout << "TP " << g.tp << "  FP " << g.fp << "  TN " << g.tn << "  FN " << g.fn << "\n";
    return 0;
}

int cmd_campaign(Common& common, const std::string& platform_name, const std::string& out_dir,
                 const std::string& scenarios_dir, std::size_t benign, bool smoke,
                 const std::string& kind)
{
    common.load();
    CampaignOptions options;
    options.platform = parse_platform(platform_name);
    options.out_dir = out_dir;
    options.benign_captures = benign;
    options.model_kind = kind;
    if (!scenarios_dir.empty())
        options.scenarios = load_suite_dir(scenarios_dir);
    else if (smoke)
        options.scenarios = smoke_attack_suite(common.config.onset_s(options.platform));
    else if (options.platform == Platform::chem)
        options.scenarios = chem_attack_suite(common.config.chem.onset_s);
    else
        options.scenarios = line_attack_suite(common.config.line.onset_s);
    if (smoke)
        options.benign_captures = std::min<std::size_t>(options.benign_captures, 10);

    const auto result = run_campaign(common.config, options);
    std::cout << report_to_text(result.report) << "model: " << result.model_path << "\n"
              << "manifest: " << result.manifest_path << "\n";
    return 0;
}

int cmd_scenarios(Common& common, const std::string& out_dir, const std::string& platform_name)
{
    common.load();
    if (platform_name == "chem" || platform_name == "all")
        write_suite(chem_attack_suite(common.config.chem.onset_s),
                    (fs::path(out_dir) / "chem").string());
    if (platform_name == "line" || platform_name == "all")
        write_suite(line_attack_suite(common.config.line.onset_s),
                    (fs::path(out_dir) / "line").string());
    std::cout << "scenario files written under " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ICS security testbed: surrogate plants, soft PLC, Modbus MITM, "
                 "anomaly detection and evaluation"};
    app.require_subcommand(1);

    Common common;
    app.add_option("--config", common.config_path, "testbed config JSON");

    std::string platform = "chem", out, scenario_path, manifest, model_path, capture_path;
    std::string truth, submission, kind = "ocsvm", scenarios_dir, validation;
    double duration = 120.0, theta = 0.0;
    std::size_t count = 1, window = 0;
    std::size_t n_train = 1, n_validation = 23, n_test = 58;
    std::uint64_t seed = 1;
    bool training = false, smoke = false;

    auto* simulate = app.add_subcommand("simulate", "run plant and PLC, print status");
    simulate->add_option("--platform", platform)->check(CLI::IsMember({"chem", "line"}));
    simulate->add_option("--duration", duration, "simulated seconds");
    simulate->add_option("--seed", seed);

    auto* collect_cmd = app.add_subcommand("collect", "collect benign captures");
    collect_cmd->add_option("--platform", platform)->check(CLI::IsMember({"chem", "line"}));
    collect_cmd->add_option("--out", out)->required();
    collect_cmd->add_option("--count", count, "successive captures in one run");
    collect_cmd->add_option("--seed", seed);
    collect_cmd->add_flag("--training", training, "single training capture (own boot)");

    auto* attack = app.add_subcommand("attack", "run one attack capture through the MITM proxy");
    attack->add_option("--scenario", scenario_path)->required()->check(CLI::ExistingFile);
    attack->add_option("--out", out)->required();
    attack->add_option("--seed", seed);

    auto* train = app.add_subcommand("train", "fit a detector on benign captures");
    train->add_option("--manifest", manifest);
    train->add_option("--capture", capture_path, "train on one CSV directly");
    train->add_option("--kind", kind)
        ->check(CLI::IsMember({"ocsvm", "iforest", "lof", "iga", "mga"}));
    train->add_option("--validation", validation, "labeled manifest, tunes iga/mga threshold");
    train->add_option("--out", out)->required();

    auto* monitor = app.add_subcommand("monitor", "score a capture or a live run");
    monitor->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    monitor->add_option("--capture", capture_path, "offline: existing capture CSV");
    monitor->add_option("--scenario", scenario_path, "live: run this attack scenario");
    monitor->add_option("--seed", seed);
    monitor->add_option("--out", out, "JSONL score log");
    monitor->add_option("--window", window);
    monitor->add_option("--theta", theta);

    auto* evaluate = app.add_subcommand("evaluate", "confusion matrix over a capture set");
    evaluate->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    evaluate->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
    evaluate->add_option("--out", out);
    evaluate->add_option("--window", window);
    evaluate->add_option("--theta", theta);

    auto* sweep = app.add_subcommand("sweep", "window x threshold TPR/FPR grid");
    sweep->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    sweep->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out);

    auto* split = app.add_subcommand("split", "education split: train/validation/test");
    split->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
    split->add_option("--out", out)->required();
    split->add_option("--train", n_train);
    split->add_option("--validation", n_validation);
    split->add_option("--test", n_test);
    split->add_option("--seed", seed);

    auto* grade = app.add_subcommand("grade", "grade a labeled submission against held-out truth");
    grade->add_option("--truth", truth)->required()->check(CLI::ExistingFile);
    grade->add_option("--submission", submission)->required()->check(CLI::ExistingFile);

    auto* campaign = app.add_subcommand("campaign", "full capture + train + evaluate pipeline");
    campaign->add_option("--platform", platform)->check(CLI::IsMember({"chem", "line"}));
    campaign->add_option("--out", out)->required();
    campaign->add_option("--scenarios", scenarios_dir, "directory of scenario files")
        ->check(CLI::ExistingDirectory);
    campaign->add_option("--benign", count)->default_val(50);
    campaign->add_flag("--smoke", smoke, "reduced campaign: 10 benign + 10 attacks");
    campaign->add_option("--kind", kind)->check(CLI::IsMember({"ocsvm", "iforest", "lof"}));

    auto* scenarios = app.add_subcommand("scenarios", "emit the shipped scenario suites");
    scenarios->add_option("--out", out)->required();
    scenarios->add_option("--platform", platform)
        ->check(CLI::IsMember({"chem", "line", "all"}))
        ->default_val("all");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_simulate(common, platform, duration, seed);
        if (collect_cmd->parsed())
            return cmd_collect(common, platform, out, count, seed, training);
        if (attack->parsed())
            return cmd_attack(common, scenario_path, out, seed);
        if (train->parsed())
            return cmd_train(common, manifest, capture_path, kind, validation, out);
        if (monitor->parsed())
            return cmd_monitor(common, model_path, capture_path, scenario_path, seed, out, window,
                               theta);
        if (evaluate->parsed())
            return cmd_evaluate(common, model_path, manifest, out, window, theta);
        if (sweep->parsed())
            return cmd_sweep(common, model_path, manifest, out);
        if (split->parsed())
            return cmd_split(common, manifest, out, n_train, n_validation, n_test, seed);
        if (grade->parsed())
            return cmd_grade(truth, submission);
        if (campaign->parsed())
            return cmd_campaign(common, platform, out, scenarios_dir, count, smoke, kind);
        if (scenarios->parsed())
            return cmd_scenarios(common, out, platform);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
