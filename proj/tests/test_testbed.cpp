#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "icsim/harness/campaign.hpp"
#include "icsim/harness/suite.hpp"
#include "icsim/harness/testbed.hpp"

using namespace icsim;
using namespace icsim::harness;

namespace fs = std::filesystem;

namespace {

TestbedConfig quick_config()
{
    TestbedConfig cfg = default_config();
    cfg.acceleration = 1e9; // free-run
    cfg.chem.cycle_s = 40;
    cfg.chem.schedule.cycle_s = 40;
    cfg.chem.warmup_s = 10;
    cfg.chem.onset_s = 5;
    cfg.line.cycle_s = 60;
    cfg.line.warmup_s = 10;
    cfg.line.onset_s = 5;
    return cfg;
}

std::string file_bytes(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("benign chem capture: row count, header, capture-relative timestamps")
{
    const auto dir = fs::temp_directory_path() / "icsim_testbed_chem";
    fs::create_directories(dir);
    const auto cfg = quick_config();

    Testbed bed(cfg, Platform::chem, nullptr, 77);
    bed.warmup(cfg.chem.warmup_s);
    const auto rec = bed.capture((dir / "benign.csv").string());
    bed.shutdown();

    CHECK(rec.rows == 40);
    CHECK(rec.label == 0);
    CHECK(rec.dropped_samples == 0);

    const auto cap = collect::load_capture_csv(rec.path);
    REQUIRE(cap.rows.size() == 40);
    CHECK(cap.columns.size() == 26);
    CHECK(cap.rows[0].t == doctest::Approx(1.0));
    CHECK(cap.rows[39].t == doctest::Approx(40.0));
    for (std::size_t i = 1; i < cap.rows.size(); ++i)
        CHECK(cap.rows[i].t - cap.rows[i - 1].t == doctest::Approx(1.0));

    // Benign: readback trails commanded by one scan; both stay in [0,1].
    for (const auto& row : cap.rows)
        for (double v : row.features)
            CHECK(std::isfinite(v));
    fs::remove_all(dir);
}

TEST_CASE("same config and seeds give byte-identical captures")
{
    const auto dir = fs::temp_directory_path() / "icsim_testbed_det";
    fs::create_directories(dir);
    const auto cfg = quick_config();

    for (int run = 0; run < 2; ++run) {
        Testbed bed(cfg, Platform::chem, nullptr, 123);
        bed.warmup(cfg.chem.warmup_s);
        bed.capture((dir / ("run" + std::to_string(run) + ".csv")).string());
        bed.shutdown();
    }
    CHECK(file_bytes((dir / "run0.csv").string()) == file_bytes((dir / "run1.csv").string()));
    fs::remove_all(dir);
}

TEST_CASE("attack capture: rewrites gated by onset, label 1, categorized record")
{
    const auto dir = fs::temp_directory_path() / "icsim_testbed_attack";
    fs::create_directories(dir);
    const auto cfg = quick_config();

    mitm::AttackScenario scenario;
    scenario.name = "test_attack";
    scenario.platform = "chem";
    scenario.onset_s = 5;
    mitm::SpoofRule rule;
    rule.direction = mitm::Direction::plant_to_plc;
    rule.table = modbus::Table::input_register;
    rule.address = plant::ChemAddress::level;
    rule.transform.kind = mitm::TransformKind::set_constant;
    rule.transform.constant = 60000;
    rule.t_start = 5;
    scenario.rules = {rule};

    Testbed bed(cfg, Platform::chem, &scenario, 55);
    bed.warmup(cfg.chem.warmup_s);
    const auto rec = bed.capture((dir / "attack.csv").string());
    const auto log = bed.rewrite_log();
    bed.shutdown();

    CHECK(rec.label == 1);
    CHECK(rec.scenario == "test_attack");
    CHECK(rec.category == "SingleSensor");
    CHECK(rec.onset_s == 5);
    REQUIRE(!log.empty());
    for (const auto& r : log)
        CHECK(r.t >= 5.0);

    // The spoofed level reaches the capture: s_0 pinned near 60000/65535.
    const auto cap = collect::load_capture_csv(rec.path);
    int spoofed_rows = 0;
    for (const auto& row : cap.rows)
        if (row.t > 6 && std::fabs(row.features[0] - 60000.0 / 65535.0) < 1e-9)
            ++spoofed_rows;
    CHECK(spoofed_rows >= 30);
    fs::remove_all(dir);
}

TEST_CASE("line testbed runs a capture end to end")
{
    const auto dir = fs::temp_directory_path() / "icsim_testbed_line";
    fs::create_directories(dir);
    const auto cfg = quick_config();

    Testbed bed(cfg, Platform::line, nullptr, 9);
    bed.warmup(cfg.line.warmup_s);
    const auto rec = bed.capture((dir / "line.csv").string());
    bed.shutdown();

    CHECK(rec.rows == 60);
    const auto cap = collect::load_capture_csv(rec.path);
    CHECK(cap.columns.size() == 54);
    // Sensors/actuators are bits except the two arm registers.
    for (const auto& row : cap.rows) {
        for (std::size_t i = 0; i < 10; ++i)
            CHECK((row.features[i] == 0.0 || row.features[i] == 1.0));
        for (std::size_t i = 24; i < 54; ++i)
            CHECK((row.features[i] == 0.0 || row.features[i] == 1.0));
    }
    fs::remove_all(dir);
}

TEST_CASE("teardown is idempotent")
{
    const auto cfg = quick_config();
    Testbed bed(cfg, Platform::chem, nullptr, 1);
    bed.warmup(2);
    bed.shutdown();
    bed.shutdown();
}

TEST_CASE("campaign re-run under identical seeds yields an identical report")
{
    auto cfg = quick_config();
    cfg.chem.warmup_s = 20;

    mitm::AttackScenario scenario;
    scenario.name = "replay_attack";
    scenario.platform = "chem";
    scenario.onset_s = 5;
    mitm::SpoofRule rule;
    rule.direction = mitm::Direction::plc_to_plant;
    rule.table = modbus::Table::holding_register;
    rule.address = plant::ChemAddress::valve_product;
    rule.transform.kind = mitm::TransformKind::set_constant;
    rule.transform.constant = 65535;
    rule.t_start = 5;
    scenario.rules = {rule};

    std::string reports[2];
    const auto dir = fs::temp_directory_path() / "icsim_campaign_det";
    for (int run = 0; run < 2; ++run) {
        fs::remove_all(dir);
        CampaignOptions options;
        options.platform = Platform::chem;
        options.out_dir = dir.string();
        options.benign_captures = 3;
        options.scenarios = {scenario};
        const auto result = run_campaign(cfg, options);
        reports[run] = report_to_json(result.report);
    }
    fs::remove_all(dir);
    CHECK(reports[0] == reports[1]);
}
