#ifndef ICSIM_HARNESS_TESTBED_HPP
#define ICSIM_HARNESS_TESTBED_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "icsim/collect/collector.hpp"
#include "icsim/harness/config.hpp"
#include "icsim/mitm/proxy.hpp"
#include "icsim/modbus/server.hpp"
#include "icsim/plc/plc.hpp"
#include "icsim/sim/clock.hpp"

namespace icsim::harness {

// One booted platform instance: plant servers, optional MITM proxies, soft
// PLC and the collector client, all driven by a single simulated-time tick
// loop (1 Hz scans and sampling). Under an attack scenario the PLC's plant
// endpoints are routed through the proxies; otherwise it connects directly.
class Testbed {
public:
    Testbed(const TestbedConfig& config, Platform platform,
            const mitm::AttackScenario* scenario, std::uint64_t seed);
    ~Testbed();

    Testbed(const Testbed&) = delete;
    Testbed& operator=(const Testbed&) = delete;

    void warmup(double seconds);

    // Collects exactly one control cycle of samples into a CSV capture. The
    // observer, when given, sees every row as it is written (live monitors).
    using RowObserver = std::function<void(double t, const collect::FeatureVector&)>;
    collect::CaptureRecord capture(const std::string& csv_path, const RowObserver& observer = {});

    std::vector<mitm::RewriteRecord> rewrite_log() const;
    const sim::SimClock& clock() const { return clock_; }
    const collect::PlatformSchema& schema() const { return schema_; }
    const plc::ScanImage& plc_image() const;

    // Ordered, idempotent teardown: collector, proxies, PLC, plant.
    void shutdown() noexcept;

private:
    void tick();

    TestbedConfig config_;
    Platform platform_;
    std::optional<mitm::AttackScenario> scenario_;
    std::uint64_t seed_;
    sim::SimClock clock_;
    collect::PlatformSchema schema_;

    std::unique_ptr<plant::ChemPlant> chem_plant_;
    std::unique_ptr<plant::LinePlant> line_plant_;
    std::vector<std::unique_ptr<modbus::ModbusTcpServer>> plant_servers_;
    std::vector<std::unique_ptr<mitm::MitmProxy>> proxies_;
    std::unique_ptr<plc::ChemPlc> chem_plc_;
    std::unique_ptr<plc::LinePlc> line_plc_;
    std::unique_ptr<modbus::ModbusTcpClient> collector_;
    bool down_ = false;
};

} // namespace icsim::harness

#endif
