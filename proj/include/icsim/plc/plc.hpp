#ifndef ICSIM_PLC_PLC_HPP
#define ICSIM_PLC_PLC_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "icsim/modbus/client.hpp"
#include "icsim/modbus/server.hpp"
#include "icsim/plant/chem.hpp"
#include "icsim/plant/line.hpp"
#include "icsim/plc/control.hpp"

namespace icsim::plc {

struct Endpoint {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;
};

// Snapshot of everything the PLC serves: mirrored sensors, actuator values as
// read back from the plant, and the outputs the control law produced this
// scan. Readbacks and commands live in distinct address ranges; their
// disagreement under attack is exactly what the detector keys on.
struct ScanImage {
    std::vector<double> sensors;
    std::vector<double> actuator_readback;
    std::vector<double> commanded;
    std::uint64_t scan_count = 0;
    std::uint64_t error_count = 0;
    std::uint64_t consecutive_stale = 0;
};

// Address layout of the PLC's own served bank. Sensors are mirrored
// contiguously from address 0 in canonical order.
struct PlcMap {
    static constexpr std::uint16_t sensor_base = 0;
    static constexpr std::uint16_t readback_base = 100;
    static constexpr std::uint16_t commanded_base = 200;
};

// Soft PLC for the chemical plant: 1 Hz scan over five component servers.
class ChemPlc {
public:
    ChemPlc(std::array<Endpoint, plant::chem_server_count> plant,
            const ChemControlLaw::Schedule& schedule, std::uint16_t serve_port = 0);

    void connect();
    void scan(double t, double dt);

    const ScanImage& image() const { return image_; }
    std::uint16_t port() const { return server_->port(); }
    void stop() noexcept { server_->stop(); }

private:
    std::array<Endpoint, plant::chem_server_count> endpoints_;
    std::array<std::unique_ptr<modbus::ModbusTcpClient>, plant::chem_server_count> clients_;
    ChemControlLaw law_;
    std::shared_ptr<modbus::RegisterBank> bank_;
    std::unique_ptr<modbus::ModbusTcpServer> server_;
    ScanImage image_;
};

// Soft PLC for the production line: sequencer over a single plant server.
class LinePlc {
public:
    explicit LinePlc(Endpoint plant, std::uint16_t serve_port = 0);

    void connect();
    void scan(double t, double dt);

    const ScanImage& image() const { return image_; }
    std::uint16_t port() const { return server_->port(); }
    void stop() noexcept { server_->stop(); }

private:
    Endpoint endpoint_;
    std::unique_ptr<modbus::ModbusTcpClient> client_;
    LineControlLaw law_;
    std::shared_ptr<modbus::RegisterBank> bank_;
    std::unique_ptr<modbus::ModbusTcpServer> server_;
    ScanImage image_;
};

} // namespace icsim::plc

#endif
