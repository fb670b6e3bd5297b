#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "icsim/harness/evaluate.hpp"
#include "icsim/harness/split.hpp"
#include "icsim/harness/suite.hpp"

using namespace icsim;
using namespace icsim::harness;

namespace fs = std::filesystem;

namespace {

// decision(x) = exp(-|x|^2) - 0.5: anomalous iff |x|^2 > ln 2.
detect::AnomalyModel toy_model()
{
    detect::OcsvmModel m;
    m.nu = 0.05;
    m.gamma = 1.0;
    m.rho = 0.5;
    m.dim = 4;
    m.support_vectors.push_row(std::vector<double>{0, 0, 0, 0});
    m.alpha = {1.0};
    detect::AnomalyModel model(std::move(m));
    model.columns = {"s_0", "d_0", "a_0", "c_0"};
    model.platform = "chem";
    return model;
}

// Rows: value 0 -> normal, value 2 -> anomalous (first feature only).
collect::CaptureRecord write_capture(const fs::path& path, int label, double onset,
                                     const std::vector<int>& anomaly_pattern,
                                     const std::string& name, const std::string& category = "",
                                     bool stealthy = false)
{
    std::ofstream out(path);
    out << "t,s_0,d_0,a_0,c_0,label\n";
    double t = 0;
    for (int a : anomaly_pattern) {
        t += 1.0;
        out << t << "," << (a ? 2.0 : 0.0) << ",0,0,0," << label << "\n";
    }
    collect::CaptureRecord rec;
    rec.path = path.string();
    rec.platform = "chem";
    rec.scenario = name;
    rec.label = label;
    rec.cycle_s = static_cast<double>(anomaly_pattern.size());
    rec.onset_s = onset;
    rec.category = category;
    rec.stealthy = stealthy;
    rec.rows = anomaly_pattern.size();
    return rec;
}

std::vector<int> pattern(std::size_t len, std::size_t attack_from)
{
    std::vector<int> p(len, 0);
    for (std::size_t i = attack_from; i < len; ++i)
        p[i] = 1;
    return p;
}

} // namespace

TEST_CASE("evaluate_captures: confusion counts, categories, detection times")
{
    const auto dir = fs::temp_directory_path() / "icsim_eval_test";
    fs::create_directories(dir);
    const auto model = toy_model();

    std::vector<collect::CaptureRecord> records;
    // Two detected attacks (anomalies start at row 10, onset 10).
    records.push_back(write_capture(dir / "a1.csv", 1, 10, pattern(60, 10), "atk1",
                                    "SingleSensor", true));
    records.push_back(
        write_capture(dir / "a2.csv", 1, 10, pattern(60, 10), "atk2", "Complex"));
    // One missed attack (never anomalous).
    records.push_back(write_capture(dir / "a3.csv", 1, 10, std::vector<int>(60, 0), "atk3",
                                    "SingleSensor", true));
    // Benign clean and benign false positive.
    records.push_back(write_capture(dir / "b1.csv", 0, 0, std::vector<int>(60, 0), "benign_0"));
    records.push_back(write_capture(dir / "b2.csv", 0, 0, pattern(60, 20), "benign_1"));

    const EvalReport report = evaluate_captures(model, 15, 0.6, records);
    CHECK(report.tp == 2);
    CHECK(report.fn == 1);
    CHECK(report.fp == 1);
    CHECK(report.tn == 1);
    CHECK(*report.tpr() == doctest::Approx(2.0 / 3.0));
    CHECK(*report.fpr() == doctest::Approx(0.5));

    // Identities: TP+FN == attacks, TN+FP == benign.
    CHECK(report.tp + report.fn == 3);
    CHECK(report.tn + report.fp == 2);

    // Hand-counted category table.
    CHECK(report.categories.at("SingleSensor").total == 2);
    CHECK(report.categories.at("SingleSensor").detected == 1);
    CHECK(report.categories.at("Complex").total == 1);
    CHECK(report.categories.at("Complex").detected == 1);
    CHECK(report.stealthy.total == 2);
    CHECK(report.stealthy.detected == 1);

    // Attack rows 11..: window full of anomalies at row 19 (9 of 15), t=19.
    REQUIRE(report.median_detection_s);
    CHECK(*report.median_detection_s == doctest::Approx(9.0));
    for (const auto& c : report.captures)
        if (c.label == 1 && c.flagged)
            CHECK(*c.detection_time_s <= 15.0 + 1.0);

    const std::string text = report_to_text(report);
    CHECK(text.find("SingleSensor") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("evaluate rejects mixed platforms")
{
    const auto dir = fs::temp_directory_path() / "icsim_eval_mixed";
    fs::create_directories(dir);
    auto a = write_capture(dir / "a.csv", 0, 0, std::vector<int>(30, 0), "a");
    auto b = write_capture(dir / "b.csv", 0, 0, std::vector<int>(30, 0), "b");
    b.platform = "line";
    CHECK_THROWS_AS(evaluate_captures(toy_model(), 15, 0.6, {a, b}), std::runtime_error);
    fs::remove_all(dir);
}

TEST_CASE("detection_time: definition and not-detected")
{
    std::vector<detect::MonitorRecord> log(50);
    for (std::size_t i = 0; i < log.size(); ++i) {
        log[i].t = static_cast<double>(i + 1);
        log[i].window_verdict =
            i >= 30 ? detect::WindowVerdict::attack : detect::WindowVerdict::normal;
    }
    CHECK(*detection_time(log, 20.0) == doctest::Approx(11.0));

    for (auto& r : log)
        r.window_verdict = detect::WindowVerdict::normal;
    CHECK(!detection_time(log, 20.0));
}

TEST_CASE("warm-up exclusion: no verdict before W samples")
{
    const auto dir = fs::temp_directory_path() / "icsim_warmup_test";
    fs::create_directories(dir);
    // All-anomalous benign capture shorter than the window: cannot fire.
    auto rec = write_capture(dir / "short.csv", 0, 0, std::vector<int>(10, 1), "short");
    const EvalReport report = evaluate_captures(toy_model(), 15, 0.6, {rec});
    CHECK(report.fp == 0);
    CHECK(report.tn == 1);
    fs::remove_all(dir);
}

TEST_CASE("sweep grid emits all cells and windows nest into smaller ones")
{
    const auto dir = fs::temp_directory_path() / "icsim_sweep_test";
    fs::create_directories(dir);
    std::vector<collect::CaptureRecord> records;
    // Benign captures with occasional isolated anomalies: dense enough to trip
    // small windows on some captures, never 9-of-15.
    for (int k = 0; k < 6; ++k) {
        std::vector<int> p(120, 0);
        for (int i = 10; i < 120; i += 7 + k)
            p[i] = 1;
        if (k < 2)
            for (int i = 40; i < 44; ++i)
                p[i] = 1; // a burst: fires W=5 but not W=15
        records.push_back(write_capture(dir / ("b" + std::to_string(k) + ".csv"), 0, 0, p,
                                        "benign_" + std::to_string(k)));
    }
    records.push_back(write_capture(dir / "atk.csv", 1, 10, pattern(120, 10), "atk1",
                                    "SingleSensor"));

    const auto grid = sweep_window_grid(toy_model(), records);
    CHECK(grid.size() == 12);
    auto fpr_of = [&](std::size_t w, double theta) {
        for (const auto& c : grid)
            if (c.window == w && c.theta == theta)
                return *c.fpr;
        FAIL("missing cell");
        return 0.0;
    };
    for (double theta : {0.6, 0.7, 0.8}) {
        CHECK(fpr_of(5, theta) >= fpr_of(10, theta));
        CHECK(fpr_of(10, theta) >= fpr_of(15, theta) - 1e-12);
        CHECK(fpr_of(15, theta) >= fpr_of(20, theta) - 1e-12);
    }
    // The burst fires the small window somewhere.
    CHECK(fpr_of(5, 0.6) > 0.0);
    fs::remove_all(dir);
}

TEST_CASE("split produces 1/23/58 manifests from 82 captures and grading works")
{
    const auto dir = fs::temp_directory_path() / "icsim_split_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    std::vector<collect::CaptureRecord> records;
    for (int i = 0; i < 40; ++i) {
        collect::CaptureRecord r;
        r.path = "benign_" + std::to_string(i) + ".csv";
        r.platform = "chem";
        r.scenario = "benign_" + std::to_string(i);
        r.label = 0;
        records.push_back(r);
    }
    for (int i = 0; i < 42; ++i) {
        collect::CaptureRecord r;
        r.path = "attack_" + std::to_string(i) + ".csv";
        r.platform = "chem";
        r.scenario = "attack_" + std::to_string(i);
        r.label = 1;
        r.category = "SingleSensor";
        records.push_back(r);
    }
    REQUIRE(records.size() == 82);

    const SplitResult split = split_dataset(records, SplitCounts{}, 7, dir.string());
    CHECK(split.train.size() == 1);
    CHECK(split.train[0].label == 0);
    CHECK(split.validation.size() == 23);
    CHECK(split.test.size() == 58);

    // The blinded test manifest carries no labels.
    const auto blinded = collect::load_manifest(split.test_manifest);
    for (const auto& r : blinded)
        CHECK(r.label == -1);

    // Grading the truth labels is perfect.
    const auto submission = dir / "truth_submission.csv";
    {
        std::ifstream truth_in(split.truth_path);
        nlohmann::json truth;
        truth_in >> truth;
        std::ofstream out(submission);
        out << "capture,label\n";
        for (const auto& [name, label] : truth.items())
            out << name << "," << label.get<int>() << "\n";
    }
    const GradeResult perfect = grade_submission(split.truth_path, submission.string());
    CHECK(perfect.fp == 0);
    CHECK(perfect.fn == 0);
    CHECK(perfect.tp + perfect.tn == 58);

    // All-zeros: TN = benign count, FN = attack count.
    const auto zeros = dir / "zeros.csv";
    {
        std::ifstream truth_in(split.truth_path);
        nlohmann::json truth;
        truth_in >> truth;
        std::ofstream out(zeros);
        out << "capture,label\n";
        for (const auto& [name, label] : truth.items())
            out << name << ",0\n";
    }
    const GradeResult zero_grade = grade_submission(split.truth_path, zeros.string());
    CHECK(zero_grade.fp == 0);
    CHECK(zero_grade.tp == 0);
    CHECK(zero_grade.tn + zero_grade.fn == 58);
    CHECK(zero_grade.fn == perfect.tp);

    // k deliberate flips yield exactly k errors.
    const auto flipped = dir / "flipped.csv";
    const std::size_t k = 5;
    {
        std::ifstream truth_in(split.truth_path);
        nlohmann::json truth;
        truth_in >> truth;
        std::ofstream out(flipped);
        out << "capture,label\n";
        std::size_t done = 0;
        for (const auto& [name, label] : truth.items()) {
            int v = label.get<int>();
            if (done < k) {
                v = 1 - v;
                ++done;
            }
            out << name << "," << v << "\n";
        }
    }
    const GradeResult flip_grade = grade_submission(split.truth_path, flipped.string());
    CHECK(flip_grade.fp + flip_grade.fn == k);

    fs::remove_all(dir);
}

TEST_CASE("split errors name the deficit")
{
    std::vector<collect::CaptureRecord> records(10);
    for (auto& r : records) {
        r.platform = "chem";
        r.label = 1;
    }
    try {
        split_dataset(records, SplitCounts{}, 1, (fs::temp_directory_path() / "x").string());
        FAIL("expected error");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        CHECK(what.find("82") != std::string::npos);
        CHECK(what.find("short by 72") != std::string::npos);
    }

    // Enough captures but no benign for training.
    std::vector<collect::CaptureRecord> attacks(90);
    for (auto& r : attacks) {
        r.platform = "chem";
        r.label = 1;
    }
    CHECK_THROWS_AS(
        split_dataset(attacks, SplitCounts{}, 1, (fs::temp_directory_path() / "x").string()),
        std::invalid_argument);
}

TEST_CASE("shipped suites have the documented category mix")
{
    const auto chem = chem_attack_suite(15.0);
    REQUIRE(chem.size() == 54);
    std::map<std::string, int> counts;
    int stealthy = 0;
    for (const auto& s : chem) {
        counts[to_string(mitm::categorize(s))] += 1;
        if (s.stealthy)
            ++stealthy;
        CHECK_NOTHROW(s.validate());
        CHECK(s.platform == "chem");
    }
    CHECK(counts["SingleSensor"] == 28);
    CHECK(counts["SingleActuator"] == 8);
    CHECK(counts["MultipleSensor"] == 10);
    CHECK(counts["MultipleActuator"] == 6);
    CHECK(counts["Complex"] == 2);
    CHECK(stealthy == 16);

    const auto line = line_attack_suite(5.0);
    REQUIRE(line.size() == 7);
    std::map<std::string, int> line_counts;
    for (const auto& s : line) {
        line_counts[to_string(mitm::categorize(s))] += 1;
        CHECK_NOTHROW(s.validate());
    }
    CHECK(line_counts["MultipleSensor"] == 2);
    CHECK(line_counts["Complex"] == 5);

    const auto smoke = smoke_attack_suite(15.0);
    REQUIRE(smoke.size() == 10);
    std::set<std::string> cats;
    for (const auto& s : smoke)
        cats.insert(to_string(mitm::categorize(s)));
    CHECK(cats.size() == 5); // every category represented
}

TEST_CASE("suite files round-trip through a directory")
{
    const auto dir = fs::temp_directory_path() / "icsim_suite_test";
    fs::remove_all(dir);
    const auto line = line_attack_suite(5.0);
    write_suite(line, dir.string());
    const auto back = load_suite_dir(dir.string());
    REQUIRE(back.size() == line.size());
    // Sorted by filename; compare as name sets plus rule counts.
    std::map<std::string, std::size_t> want, got;
    for (const auto& s : line)
        want[s.name] = s.rules.size();
    for (const auto& s : back)
        got[s.name] = s.rules.size();
    CHECK(want == got);
    fs::remove_all(dir);
}
