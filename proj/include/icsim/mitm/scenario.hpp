#ifndef ICSIM_MITM_SCENARIO_HPP
#define ICSIM_MITM_SCENARIO_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "icsim/modbus/register_bank.hpp"

namespace icsim::mitm {

// Traffic direction through the proxy. Values flowing toward the PLC are
// sensor evidence; values flowing toward the plant are actuator commands.
enum class Direction : std::uint8_t { plant_to_plc, plc_to_plant };
const char* to_string(Direction d);

enum class TransformKind : std::uint8_t { set_constant, add_offset, scale, bit_set };
const char* to_string(TransformKind k);

struct Transform {
    TransformKind kind = TransformKind::set_constant;
    std::uint16_t constant = 0; // set_constant
    std::int32_t offset = 0;    // add_offset
    double factor = 1.0;        // scale
    bool bit_value = false;     // bit_set

    std::uint16_t apply_register(std::uint16_t value) const;
    bool apply_bit(bool value) const { return bit_value; }
};

// One spoofed point: which table/address, how to transform it, and when the
// rule is live (capture-relative seconds).
struct SpoofRule {
    Direction direction = Direction::plant_to_plc;
    modbus::Table table = modbus::Table::input_register;
    std::uint16_t address = 0;
    Transform transform;
    double t_start = 0.0;
    double t_end = std::numeric_limits<double>::infinity();

    bool is_sensor_rule() const { return direction == Direction::plant_to_plc; }
    bool active_at(double t) const { return t >= t_start && t <= t_end; }
};

enum class AttackCategory : std::uint8_t {
    single_sensor,
    single_actuator,
    multiple_sensor,
    multiple_actuator,
    complex_attack,
};
const char* to_string(AttackCategory c);

struct AttackScenario {
    std::string name;
    std::string platform; // "chem" | "line"
    bool stealthy = false;
    double onset_s = 0.0; // default rule start, also the detection-time origin
    std::vector<SpoofRule> rules;

    // Throws std::invalid_argument on schema violations (empty rule list,
    // bit transform on a register point, unbounded stealthy transform, ...).
    void validate() const;
};

// Exactly one category per nonempty scenario; stealthiness is orthogonal.
AttackCategory categorize(const AttackScenario& scenario);

std::string to_json(const AttackScenario& scenario);
AttackScenario scenario_from_json(const std::string& text);
AttackScenario load_scenario(const std::string& path);
void save_scenario(const AttackScenario& scenario, const std::string& path);

} // namespace icsim::mitm

#endif
