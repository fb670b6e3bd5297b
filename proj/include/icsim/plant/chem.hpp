#ifndef ICSIM_PLANT_CHEM_HPP
#define ICSIM_PLANT_CHEM_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <random>

#include "icsim/modbus/register_bank.hpp"

namespace icsim::plant {

// Continuous two-feed tank process with the 9-sensor / 4-valve topology:
// Tank (level, pressure), Feed 1, Feed 2, Product, Purge plus a three-way
// composition measurement on the purge stream. All process variables are
// fractions of range.
struct ChemState {
    double tank_level = 0.5;
    double tank_pressure = 0.45;
    double flow_feed1 = 0.0;
    double flow_feed2 = 0.0;
    double flow_product = 0.0;
    double flow_purge = 0.0;
    double composition_a = 0.34;
    double composition_b = 0.33;
    double composition_c = 0.33;
};

struct ValveCommand {
    double v_feed1 = 0.0;
    double v_feed2 = 0.0;
    double v_product = 0.0;
    double v_purge = 0.0;
};

struct ChemParams {
    double k_in = 0.0076;   // inflow gain, fraction/s at full feed
    double k_out = 0.02;    // outflow gain
    double f1_max = 1.0;    // feed availabilities
    double f2_max = 0.85;
    double pressure_lag_s = 30.0;
    double composition_lag_s = 45.0;
    double pressure_base = 0.2;
    double pressure_level_gain = 0.6;
    double pressure_purge_relief = 0.25;
    double yield_base = 0.25;
    double yield_pressure_gain = 0.3;
    double noise_sigma = 0.002; // fraction of range, sensor encoding only
};

// One integration step of the surrogate dynamics. Deterministic; sensor
// noise is applied later, at register encoding.
ChemState step_chem(const ChemState& state, const ValveCommand& valves, double dt,
                    const ChemParams& params);

std::uint16_t to_register(double fraction);
double from_register(std::uint16_t raw);
// round(s*65535) plus seeded gaussian noise, clamped to the register range.
std::uint16_t to_register_noisy(double fraction, double sigma, std::mt19937_64& rng);

std::array<double, 9> chem_sensor_values(const ChemState& s);

// Fixed sensor/actuator map. Component servers use disjoint address blocks,
// so (table, address) identifies a point plant-wide.
enum class ChemServer : std::uint8_t { tank = 0, feed1, feed2, product, purge };
constexpr std::size_t chem_server_count = 5;

struct ChemAddress {
    static constexpr std::uint16_t level = 0;        // tank, input
    static constexpr std::uint16_t pressure = 1;     // tank, input
    static constexpr std::uint16_t flow_feed1 = 10;  // feed1, input
    static constexpr std::uint16_t valve_feed1 = 10; // feed1, holding
    static constexpr std::uint16_t flow_feed2 = 20;  // feed2, input
    static constexpr std::uint16_t valve_feed2 = 20; // feed2, holding
    static constexpr std::uint16_t flow_product = 30;
    static constexpr std::uint16_t valve_product = 30;
    static constexpr std::uint16_t flow_purge = 40;
    static constexpr std::uint16_t valve_purge = 40;
    static constexpr std::uint16_t composition_a = 41;
    static constexpr std::uint16_t composition_b = 42;
    static constexpr std::uint16_t composition_c = 43;
};

// Plant process bound to its five Modbus register banks. Each tick reads the
// valve setpoints back from the holding registers (so spoofed writes take
// physical effect), steps the dynamics, and encodes the sensors.
class ChemPlant {
public:
    ChemPlant(const ChemParams& params, std::uint64_t noise_seed);

    void tick(double dt);

    const ChemState& state() const { return state_; }
    ValveCommand valves() const;
    std::shared_ptr<modbus::RegisterBank> bank(ChemServer server) const;

    // Settled operating point used as the boot state, so runs start on-cycle.
    static ChemState reference_initial_state();
    static ValveCommand reference_initial_valves();

private:
    void encode_sensors();

    ChemParams params_;
    ChemState state_;
    std::mt19937_64 rng_;
    std::array<std::shared_ptr<modbus::RegisterBank>, chem_server_count> banks_;
};

} // namespace icsim::plant

#endif
