#include "icsim/harness/suite.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "icsim/plant/chem.hpp"
#include "icsim/plant/line.hpp"

namespace icsim::harness {

namespace fs = std::filesystem;
using mitm::AttackScenario;
using mitm::Direction;
using mitm::SpoofRule;
using mitm::Transform;
using mitm::TransformKind;
using modbus::Table;

namespace {

constexpr std::int32_t ten_percent = 6554; // round(0.10 * 65535)

Transform set_const(std::uint16_t v)
{
    Transform t;
    t.kind = TransformKind::set_constant;
    t.constant = v;
    return t;
}

Transform offset(std::int32_t v)
{
    Transform t;
    t.kind = TransformKind::add_offset;
    t.offset = v;
    return t;
}

Transform scale(double f)
{
    Transform t;
    t.kind = TransformKind::scale;
    t.factor = f;
    return t;
}

Transform bit(bool v)
{
    Transform t;
    t.kind = TransformKind::bit_set;
    t.bit_value = v;
    return t;
}

SpoofRule sensor_rule(std::uint16_t address, Transform t, double onset)
{
    SpoofRule r;
    r.direction = Direction::plant_to_plc;
    r.table = Table::input_register;
    r.address = address;
    r.transform = t;
    r.t_start = onset;
    return r;
}

SpoofRule actuator_rule(std::uint16_t address, Transform t, double onset)
{
    SpoofRule r;
    r.direction = Direction::plc_to_plant;
    r.table = Table::holding_register;
    r.address = address;
    r.transform = t;
    r.t_start = onset;
    return r;
}

SpoofRule bit_sensor_rule(std::uint16_t address, bool v, double onset)
{
    SpoofRule r;
    r.direction = Direction::plant_to_plc;
    r.table = Table::discrete_input;
    r.address = address;
    r.transform = bit(v);
    r.t_start = onset;
    return r;
}

SpoofRule coil_rule(std::uint16_t address, bool v, double onset)
{
    SpoofRule r;
    r.direction = Direction::plc_to_plant;
    r.table = Table::coil;
    r.address = address;
    r.transform = bit(v);
    r.t_start = onset;
    return r;
}

AttackScenario make(const std::string& name, const std::string& platform, bool stealthy,
                    double onset, std::vector<SpoofRule> rules)
{
    AttackScenario s;
    s.name = name;
    s.platform = platform;
    s.stealthy = stealthy;
    s.onset_s = onset;
    s.rules = std::move(rules);
    s.validate();
    return s;
}

std::string numbered(const std::string& stem, std::size_t i)
{
    std::ostringstream ss;
    ss << stem << "_" << std::setw(2) << std::setfill('0') << i;
    return ss.str();
}

} // namespace

std::vector<AttackScenario> chem_attack_suite(double onset)
{
    using A = plant::ChemAddress;
    const std::array<std::uint16_t, 9> sensors = {
        A::level,      A::pressure,      A::flow_feed1,    A::flow_feed2,   A::flow_product,
        A::flow_purge, A::composition_a, A::composition_b, A::composition_c};
    const std::array<std::uint16_t, 4> valves = {A::valve_feed1, A::valve_feed2, A::valve_product,
                                                 A::valve_purge};

    std::vector<AttackScenario> suite;
    std::size_t n = 0;

    // Single sensor, 28: 18 blunt constants + 10 stealthy 10%-of-range shifts.
    for (auto addr : sensors)
        suite.push_back(make(numbered("chem_ss", ++n), "chem", false, onset,
                             {sensor_rule(addr, set_const(60000), onset)}));
    for (auto addr : sensors)
        suite.push_back(make(numbered("chem_ss", ++n), "chem", false, onset,
                             {sensor_rule(addr, set_const(3000), onset)}));
    for (auto addr : sensors)
        suite.push_back(make(numbered("chem_ss", ++n), "chem", true, onset,
                             {sensor_rule(addr, offset(ten_percent), onset)}));
    suite.push_back(make(numbered("chem_ss", ++n), "chem", true, onset,
                         {sensor_rule(A::level, offset(-ten_percent), onset)}));

    // Single actuator, 8: 6 blunt + 2 stealthy.
    n = 0;
    suite.push_back(make(numbered("chem_sa", ++n), "chem", false, onset,
                         {actuator_rule(A::valve_feed1, set_const(65535), onset)}));
    suite.push_back(make(numbered("chem_sa", ++n), "chem", false, onset,
                         {actuator_rule(A::valve_feed2, set_const(0), onset)}));
    suite.push_back(make(numbered("chem_sa", ++n), "chem", false, onset,
                         {actuator_rule(A::valve_product, set_const(65535), onset)}));
    suite.push_back(make(numbered("chem_sa", ++n), "chem", false, onset,
                         {actuator_rule(A::valve_purge, set_const(0), onset)}));
    suite.push_back(make(numbered("chem_sa", ++n), "chem", false, onset,
                         {actuator_rule(A::valve_feed1, set_const(0), onset)}));
    suite.push_back(make(numbered("chem_sa", ++n), "chem", false, onset,
                         {actuator_rule(A::valve_product, set_const(0), onset)}));
    suite.push_back(make(numbered("chem_sa", ++n), "chem", true, onset,
                         {actuator_rule(A::valve_product, offset(ten_percent), onset)}));
    suite.push_back(make(numbered("chem_sa", ++n), "chem", true, onset,
                         {actuator_rule(A::valve_feed1, offset(-ten_percent), onset)}));

    // Multiple sensor, 10: 8 blunt + 2 stealthy.
    n = 0;
    suite.push_back(make(numbered("chem_ms", ++n), "chem", false, onset,
                         {sensor_rule(A::level, set_const(60000), onset),
                          sensor_rule(A::pressure, set_const(60000), onset)}));
    suite.push_back(make(numbered("chem_ms", ++n), "chem", false, onset,
                         {sensor_rule(A::flow_feed1, set_const(3000), onset),
                          sensor_rule(A::flow_feed2, set_const(3000), onset)}));
    suite.push_back(make(numbered("chem_ms", ++n), "chem", false, onset,
                         {sensor_rule(A::composition_a, set_const(0), onset),
                          sensor_rule(A::composition_b, set_const(0), onset),
                          sensor_rule(A::composition_c, set_const(65535), onset)}));
    suite.push_back(make(numbered("chem_ms", ++n), "chem", false, onset,
                         {sensor_rule(A::level, set_const(3000), onset),
                          sensor_rule(A::flow_product, set_const(60000), onset)}));
    suite.push_back(make(numbered("chem_ms", ++n), "chem", false, onset,
                         {sensor_rule(A::flow_feed1, set_const(60000), onset),
                          sensor_rule(A::flow_purge, set_const(60000), onset)}));
    suite.push_back(make(numbered("chem_ms", ++n), "chem", false, onset,
                         {sensor_rule(A::pressure, set_const(3000), onset),
                          sensor_rule(A::level, set_const(60000), onset)}));
    suite.push_back(make(numbered("chem_ms", ++n), "chem", false, onset,
                         {sensor_rule(A::composition_a, set_const(21845), onset),
                          sensor_rule(A::composition_b, set_const(21845), onset),
                          sensor_rule(A::composition_c, set_const(21845), onset)}));
    suite.push_back(make(numbered("chem_ms", ++n), "chem", false, onset,
                         {sensor_rule(A::flow_product, set_const(3000), onset),
                          sensor_rule(A::flow_purge, set_const(3000), onset)}));
    suite.push_back(make(numbered("chem_ms", ++n), "chem", true, onset,
                         {sensor_rule(A::level, offset(ten_percent), onset),
                          sensor_rule(A::pressure, offset(ten_percent), onset)}));
    suite.push_back(make(numbered("chem_ms", ++n), "chem", true, onset,
                         {sensor_rule(A::flow_feed1, offset(-ten_percent), onset),
                          sensor_rule(A::flow_feed2, offset(ten_percent), onset)}));

    // Multiple actuator, 6: 4 blunt + 2 stealthy.
    n = 0;
    suite.push_back(make(numbered("chem_ma", ++n), "chem", false, onset,
                         {actuator_rule(A::valve_feed1, set_const(0), onset),
                          actuator_rule(A::valve_feed2, set_const(0), onset)}));
    suite.push_back(make(numbered("chem_ma", ++n), "chem", false, onset,
                         {actuator_rule(A::valve_product, set_const(65535), onset),
                          actuator_rule(A::valve_purge, set_const(65535), onset)}));
    suite.push_back(make(numbered("chem_ma", ++n), "chem", false, onset,
                         {actuator_rule(A::valve_feed1, set_const(65535), onset),
                          actuator_rule(A::valve_product, set_const(0), onset)}));
    suite.push_back(make(numbered("chem_ma", ++n), "chem", false, onset,
                         {actuator_rule(A::valve_feed2, set_const(0), onset),
                          actuator_rule(A::valve_purge, set_const(65535), onset)}));
    suite.push_back(make(numbered("chem_ma", ++n), "chem", true, onset,
                         {actuator_rule(A::valve_product, offset(ten_percent), onset),
                          actuator_rule(A::valve_purge, offset(-ten_percent), onset)}));
    suite.push_back(make(numbered("chem_ma", ++n), "chem", true, onset,
                         {actuator_rule(A::valve_feed1, offset(-ten_percent), onset),
                          actuator_rule(A::valve_feed2, offset(ten_percent), onset)}));

    // Complex, 2: at least one sensor and one actuator each.
    n = 0;
    suite.push_back(make(numbered("chem_cx", ++n), "chem", false, onset,
                         {sensor_rule(A::level, set_const(60000), onset),
                          actuator_rule(A::valve_purge, set_const(0), onset)}));
    suite.push_back(make(numbered("chem_cx", ++n), "chem", false, onset,
                         {sensor_rule(A::flow_product, set_const(3000), onset),
                          actuator_rule(A::valve_product, set_const(65535), onset)}));
    return suite;
}

std::vector<AttackScenario> line_attack_suite(double onset)
{
    using S = plant::LineSensor;
    using C = plant::LineCoil;

    std::vector<AttackScenario> suite;
    // Multiple sensor: one single-center and one both-center variant.
    suite.push_back(make("line_ms_center_a", "line", false, onset,
                         {bit_sensor_rule(S::a_entry, true, onset),
                          bit_sensor_rule(S::a_pickup, true, onset)}));
    suite.push_back(make("line_ms_both_centers", "line", false, onset,
                         {bit_sensor_rule(S::a_pickup, true, onset),
                          bit_sensor_rule(S::b_pickup, true, onset)}));
    // Complex: sensor + actuator mixes, single- and both-center.
    suite.push_back(make("line_cx_center_a", "line", false, onset,
                         {bit_sensor_rule(S::a_in_center, false, onset),
                          coil_rule(C::a_grab, false, onset)}));
    suite.push_back(make("line_cx_center_b", "line", false, onset,
                         {bit_sensor_rule(S::b_in_center, false, onset),
                          coil_rule(C::b_grab, false, onset)}));
    suite.push_back(make("line_cx_both_infeed", "line", false, onset,
                         {bit_sensor_rule(S::a_pickup, true, onset),
                          bit_sensor_rule(S::b_pickup, true, onset),
                          coil_rule(C::a_infeed_run, false, onset),
                          coil_rule(C::b_infeed_run, false, onset)}));
    {
        SpoofRule arm;
        arm.direction = Direction::plant_to_plc;
        arm.table = Table::input_register;
        arm.address = S::arm_a;
        arm.transform = scale(0.5);
        arm.t_start = onset;
        suite.push_back(make("line_cx_arm_machine", "line", false, onset,
                             {arm, coil_rule(C::a_machine_start, false, onset)}));
    }
    suite.push_back(make("line_cx_done_both", "line", false, onset,
                         {bit_sensor_rule(S::a_done, true, onset),
                          bit_sensor_rule(S::b_done, true, onset),
                          coil_rule(C::a_outfeed_run, false, onset),
                          coil_rule(C::b_outfeed_run, false, onset)}));
    return suite;
}

std::vector<AttackScenario> smoke_attack_suite(double onset)
{
    const auto full = chem_attack_suite(onset);
    const std::array<const char*, 10> picks = {
        "chem_ss_01", "chem_ss_10", "chem_sa_01", "chem_sa_04", "chem_ms_01",
        "chem_ms_02", "chem_ms_09", "chem_ma_01", "chem_ma_05", "chem_cx_01"};
    std::vector<AttackScenario> suite;
    for (const auto* name : picks) {
        auto it = std::find_if(full.begin(), full.end(),
                               [&](const AttackScenario& s) { return s.name == name; });
        if (it == full.end())
            throw std::logic_error("smoke suite refers to unknown scenario");
        suite.push_back(*it);
    }
    return suite;
}

void write_suite(const std::vector<AttackScenario>& suite, const std::string& dir)
{
    fs::create_directories(dir);
    for (const auto& s : suite)
        mitm::save_scenario(s, (fs::path(dir) / (s.name + ".json")).string());
}

std::vector<AttackScenario> load_suite_dir(const std::string& dir)
{
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());

    std::vector<AttackScenario> suite;
    for (const auto& p : paths)
        suite.push_back(mitm::load_scenario(p));
    return suite;
}

} // namespace icsim::harness
