#include "icsim/harness/testbed.hpp"

#include <cmath>

namespace icsim::harness {

Testbed::Testbed(const TestbedConfig& config, Platform platform,
                 const mitm::AttackScenario* scenario, std::uint64_t seed)
    : config_(config), platform_(platform), seed_(seed),
      clock_(config.dt_s, config.acceleration),
      schema_(collect::PlatformSchema::for_platform(to_string(platform)))
{
    if (scenario) {
        scenario_ = *scenario;
        scenario_->validate();
        if (scenario_->platform != to_string(platform))
            throw std::invalid_argument("scenario platform mismatch");
    }

    const std::vector<mitm::SpoofRule> rules =
        scenario_ ? scenario_->rules : std::vector<mitm::SpoofRule>{};

    if (platform_ == Platform::chem) {
        chem_plant_ = std::make_unique<plant::ChemPlant>(config_.chem.plant, seed_);
        for (std::size_t i = 0; i < plant::chem_server_count; ++i)
            plant_servers_.push_back(std::make_unique<modbus::ModbusTcpServer>(
                chem_plant_->bank(static_cast<plant::ChemServer>(i))));

        std::array<plc::Endpoint, plant::chem_server_count> endpoints;
        for (std::size_t i = 0; i < plant::chem_server_count; ++i) {
            std::uint16_t port = plant_servers_[i]->port();
            if (scenario_) {
                proxies_.push_back(std::make_unique<mitm::MitmProxy>("127.0.0.1", port, rules,
                                                                     &clock_));
                port = proxies_.back()->port();
            }
            endpoints[i] = plc::Endpoint{"127.0.0.1", port};
        }

        auto schedule = config_.chem.schedule;
        schedule.cycle_s = config_.chem.cycle_s;
        chem_plc_ = std::make_unique<plc::ChemPlc>(endpoints, schedule);
        chem_plc_->connect();
        collector_ = std::make_unique<modbus::ModbusTcpClient>("127.0.0.1", chem_plc_->port());
    } else {
        line_plant_ = std::make_unique<plant::LinePlant>(config_.line.plant);
        plant_servers_.push_back(
            std::make_unique<modbus::ModbusTcpServer>(line_plant_->bank()));

        std::uint16_t port = plant_servers_[0]->port();
        if (scenario_) {
            proxies_.push_back(
                std::make_unique<mitm::MitmProxy>("127.0.0.1", port, rules, &clock_));
            port = proxies_.back()->port();
        }
        line_plc_ = std::make_unique<plc::LinePlc>(plc::Endpoint{"127.0.0.1", port});
        line_plc_->connect();
        collector_ = std::make_unique<modbus::ModbusTcpClient>("127.0.0.1", line_plc_->port());
    }
}

Testbed::~Testbed() { shutdown(); }

const plc::ScanImage& Testbed::plc_image() const
{
    return platform_ == Platform::chem ? chem_plc_->image() : line_plc_->image();
}

void Testbed::tick()
{
    clock_.advance();
    const double t = clock_.now_s();
    const double dt = clock_.dt_s();
    if (platform_ == Platform::chem) {
        chem_plant_->tick(dt);
        chem_plc_->scan(t, dt);
    } else {
        line_plant_->tick(dt);
        line_plc_->scan(t, dt);
    }
    clock_.pace();
}

void Testbed::warmup(double seconds)
{
    const auto steps = static_cast<std::size_t>(std::llround(seconds / clock_.dt_s()));
    for (std::size_t i = 0; i < steps; ++i)
        tick();
}

collect::CaptureRecord Testbed::capture(const std::string& csv_path, const RowObserver& observer)
{
    const double cycle_s = config_.cycle_s(platform_);
    const auto rows = static_cast<std::size_t>(std::llround(cycle_s / clock_.dt_s()));

    collect::CaptureRecord record;
    record.path = csv_path;
    record.platform = to_string(platform_);
    record.label = scenario_ ? 1 : 0;
    record.cycle_s = cycle_s;
    record.seed = seed_;
    if (scenario_) {
        record.scenario = scenario_->name;
        record.onset_s = scenario_->onset_s;
        record.category = to_string(mitm::categorize(*scenario_));
        record.stealthy = scenario_->stealthy;
    }

    const double capture_start = clock_.now_s();
    for (auto& proxy : proxies_)
        proxy->set_capture_start(capture_start);

    collect::CsvCaptureWriter writer(csv_path, schema_, record.label);
    std::optional<collect::Snapshot> previous;
    for (std::size_t i = 0; i < rows; ++i) {
        tick();
        collect::Snapshot snap;
        try {
            snap = collect::poll_sample(*collector_, schema_, clock_.now_s() - capture_start);
        } catch (const std::runtime_error&) {
            ++record.dropped_samples; // gap: no row, no interpolation
            record.gap_times.push_back(clock_.now_s() - capture_start);
            continue;
        }
        const auto features = collect::featurize(snap, previous ? &*previous : nullptr, schema_);
        writer.append(snap.t, features);
        if (observer)
            observer(snap.t, features);
        previous = std::move(snap);
    }
    record.rows = writer.rows();
    return record;
}

std::vector<mitm::RewriteRecord> Testbed::rewrite_log() const
{
    std::vector<mitm::RewriteRecord> all;
    for (const auto& proxy : proxies_) {
        auto log = proxy->rewrite_log();
        all.insert(all.end(), log.begin(), log.end());
    }
    return all;
}

void Testbed::shutdown() noexcept
{
    if (down_)
        return;
    down_ = true;
    collector_.reset();
    for (auto& p : proxies_)
        p->stop();
    if (chem_plc_)
        chem_plc_->stop();
    if (line_plc_)
        line_plc_->stop();
    for (auto& s : plant_servers_)
        s->stop();
}

} // namespace icsim::harness
