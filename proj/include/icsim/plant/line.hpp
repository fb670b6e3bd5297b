#ifndef ICSIM_PLANT_LINE_HPP
#define ICSIM_PLANT_LINE_HPP

#include <array>
#include <cstdint>
#include <memory>

#include "icsim/modbus/register_bank.hpp"

namespace icsim::plant {

// Discrete production line: two independent machining cells, each with an
// infeed conveyor, a robotic arm, a machining center and an outfeed conveyor.
// 12 sensors (10 bits + 2 continuous arm positions), 15 coil actuators.

enum class CenterPhase : std::uint8_t { idle, loading, machining, unloading };
const char* to_string(CenterPhase p);

// Where the (single in-flight) part of a cell currently is.
enum class PartLocation : std::uint8_t {
    none,
    infeed,
    at_pickup,
    on_arm,
    in_center,
    on_arm_return,
    outfeed,
};

struct CenterState {
    PartLocation part = PartLocation::none;
    double belt_pos = 0.0;         // progress along infeed/outfeed
    double arm_pos = 0.0;          // 0 = conveyor side, 1 = machine side
    bool machining_done = false;
    double machining_elapsed = 0.0;
    double feeder_wait = 0.0;      // time before the feeder may emit again

    CenterPhase phase() const;
};

struct LineState {
    CenterState a;
    CenterState b;
};

struct LineParams {
    double infeed_len_s = 20.0;   // belt transit times at 1 step/s
    double outfeed_len_s = 25.0;
    double arm_rate = 0.04;       // fraction of travel per second
    double machining_dwell_s = 278.0;
    double feeder_gap_s = 10.0;
    double stagger_b_s = 200.0;   // center B first-part delay
};

// Actuator coil layout (7 per cell + master run enable).
struct LineCoil {
    static constexpr std::uint16_t a_feeder = 0;
    static constexpr std::uint16_t a_infeed_run = 1;
    static constexpr std::uint16_t a_outfeed_run = 2;
    static constexpr std::uint16_t a_arm_fwd = 3;
    static constexpr std::uint16_t a_arm_rev = 4;
    static constexpr std::uint16_t a_grab = 5;
    static constexpr std::uint16_t a_machine_start = 6;
    static constexpr std::uint16_t b_feeder = 7;
    static constexpr std::uint16_t b_infeed_run = 8;
    static constexpr std::uint16_t b_outfeed_run = 9;
    static constexpr std::uint16_t b_arm_fwd = 10;
    static constexpr std::uint16_t b_arm_rev = 11;
    static constexpr std::uint16_t b_grab = 12;
    static constexpr std::uint16_t b_machine_start = 13;
    static constexpr std::uint16_t master_run = 14;
};

// Sensor layout: discrete inputs 0..9, input registers 0..1.
struct LineSensor {
    static constexpr std::uint16_t a_entry = 0;
    static constexpr std::uint16_t a_pickup = 1;
    static constexpr std::uint16_t a_in_center = 2;
    static constexpr std::uint16_t a_done = 3;
    static constexpr std::uint16_t a_exit = 4;
    static constexpr std::uint16_t b_entry = 5;
    static constexpr std::uint16_t b_pickup = 6;
    static constexpr std::uint16_t b_in_center = 7;
    static constexpr std::uint16_t b_done = 8;
    static constexpr std::uint16_t b_exit = 9;
    static constexpr std::uint16_t arm_a = 0; // input register
    static constexpr std::uint16_t arm_b = 1;
};

constexpr std::size_t line_sensor_bits = 10;
constexpr std::size_t line_sensor_regs = 2;
constexpr std::size_t line_actuator_count = 15;

struct LineActuators {
    std::array<bool, line_actuator_count> coils{};
    bool operator[](std::size_t i) const { return coils[i]; }
};

LineState step_line(const LineState& state, const LineActuators& actuators, double dt,
                    const LineParams& params);

std::array<bool, line_sensor_bits> line_sensor_bits_of(const LineState& s,
                                                       const LineParams& params);
std::array<std::uint16_t, line_sensor_regs> line_sensor_regs_of(const LineState& s);

// Plant process bound to its single Modbus bank: coils in, sensors out.
class LinePlant {
public:
    explicit LinePlant(const LineParams& params);

    void tick(double dt);
    const LineState& state() const { return state_; }
    LineActuators actuators() const;
    std::shared_ptr<modbus::RegisterBank> bank() const { return bank_; }

private:
    void encode_sensors();

    LineParams params_;
    LineState state_;
    std::shared_ptr<modbus::RegisterBank> bank_;
};

} // namespace icsim::plant

#endif
