#include "icsim/mitm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace icsim::mitm {

using nlohmann::json;

namespace {
// 10% of the 0..65535 sensor range, the stealthy-attack bound.
constexpr std::int32_t stealthy_max_offset = 6554;
} // namespace

const char* to_string(Direction d)
{
    return d == Direction::plant_to_plc ? "plant_to_plc" : "plc_to_plant";
}

const char* to_string(TransformKind k)
{
    switch (k) {
    case TransformKind::set_constant: return "set_constant";
    case TransformKind::add_offset: return "add_offset";
    case TransformKind::scale: return "scale";
    case TransformKind::bit_set: return "bit_set";
    }
    return "unknown";
}

const char* to_string(AttackCategory c)
{
    switch (c) {
    case AttackCategory::single_sensor: return "SingleSensor";
    case AttackCategory::single_actuator: return "SingleActuator";
    case AttackCategory::multiple_sensor: return "MultipleSensor";
    case AttackCategory::multiple_actuator: return "MultipleActuator";
    case AttackCategory::complex_attack: return "Complex";
    }
    return "unknown";
}

std::uint16_t Transform::apply_register(std::uint16_t value) const
{
    switch (kind) {
    case TransformKind::set_constant:
        return constant;
    case TransformKind::add_offset: {
        const std::int64_t v = static_cast<std::int64_t>(value) + offset;
        return static_cast<std::uint16_t>(std::clamp<std::int64_t>(v, 0, 65535));
    }
    case TransformKind::scale: {
        const double v = std::round(static_cast<double>(value) * factor);
        return static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
    }
    case TransformKind::bit_set:
        break;
    }
    throw std::logic_error("apply_register: bit transform on a register");
}

void AttackScenario::validate() const
{
    if (rules.empty())
        throw std::invalid_argument("scenario '" + name + "': needs at least one rule");
    if (platform != "chem" && platform != "line")
        throw std::invalid_argument("scenario '" + name + "': unknown platform " + platform);

    for (const auto& r : rules) {
        const bool bit_table =
            r.table == modbus::Table::coil || r.table == modbus::Table::discrete_input;
        if (bit_table && r.transform.kind != TransformKind::bit_set)
            throw std::invalid_argument("scenario '" + name +
                                        "': coil points take bit_set only");
        if (!bit_table && r.transform.kind == TransformKind::bit_set)
            throw std::invalid_argument("scenario '" + name +
                                        "': bit_set on a register point");
        if (r.t_end < r.t_start)
            throw std::invalid_argument("scenario '" + name + "': window ends before it starts");
        if (stealthy && !bit_table) {
            switch (r.transform.kind) {
            case TransformKind::add_offset:
                if (std::abs(r.transform.offset) > stealthy_max_offset)
                    throw std::invalid_argument("scenario '" + name +
                                                "': stealthy offset beyond 10% of range");
                break;
            case TransformKind::scale:
                if (std::abs(r.transform.factor - 1.0) > 0.1)
                    throw std::invalid_argument("scenario '" + name +
                                                "': stealthy scale beyond 10% of range");
                break;
            default:
                throw std::invalid_argument(
                    "scenario '" + name +
                    "': stealthy register rules must bound their change (add_offset/scale)");
            }
        }
    }
}

AttackCategory categorize(const AttackScenario& scenario)
{
    if (scenario.rules.empty())
        throw std::invalid_argument("categorize: empty scenario");

    std::set<std::pair<modbus::Table, std::uint16_t>> sensor_points;
    std::set<std::pair<modbus::Table, std::uint16_t>> actuator_points;
    for (const auto& r : scenario.rules) {
        auto& dst = r.is_sensor_rule() ? sensor_points : actuator_points;
        dst.emplace(r.table, r.address);
    }

    const std::size_t s = sensor_points.size();
    const std::size_t a = actuator_points.size();
    if (s >= 1 && a >= 1)
        return AttackCategory::complex_attack;
    if (s == 1)
        return AttackCategory::single_sensor;
    if (a == 1)
        return AttackCategory::single_actuator;
    if (s >= 2)
        return AttackCategory::multiple_sensor;
    return AttackCategory::multiple_actuator;
}

namespace {

json transform_to_json(const Transform& t)
{
    json j;
    j["kind"] = to_string(t.kind);
    switch (t.kind) {
    case TransformKind::set_constant: j["value"] = t.constant; break;
    case TransformKind::add_offset: j["value"] = t.offset; break;
    case TransformKind::scale: j["factor"] = t.factor; break;
    case TransformKind::bit_set: j["value"] = t.bit_value; break;
    }
    return j;
}

Transform transform_from_json(const json& j)
{
    Transform t;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "set_constant") {
        t.kind = TransformKind::set_constant;
        t.constant = j.at("value").get<std::uint16_t>();
    } else if (kind == "add_offset") {
        t.kind = TransformKind::add_offset;
        t.offset = j.at("value").get<std::int32_t>();
    } else if (kind == "scale") {
        t.kind = TransformKind::scale;
        t.factor = j.at("factor").get<double>();
    } else if (kind == "bit_set") {
        t.kind = TransformKind::bit_set;
        t.bit_value = j.at("value").get<bool>();
    } else {
        throw std::invalid_argument("unknown transform kind: " + kind);
    }
    return t;
}

} // namespace

std::string to_json(const AttackScenario& s)
{
    json j;
    j["name"] = s.name;
    j["platform"] = s.platform;
    j["stealthy"] = s.stealthy;
    j["onset_s"] = s.onset_s;
    j["category"] = to_string(categorize(s));
    j["rules"] = json::array();
    for (const auto& r : s.rules) {
        json jr;
        jr["direction"] = to_string(r.direction);
        jr["table"] = modbus::to_string(r.table);
        jr["address"] = r.address;
        jr["transform"] = transform_to_json(r.transform);
        jr["t_start"] = r.t_start;
        if (std::isfinite(r.t_end))
            jr["t_end"] = r.t_end;
        j["rules"].push_back(std::move(jr));
    }
    return j.dump(2) + "\n";
}

AttackScenario scenario_from_json(const std::string& text)
{
    const json j = json::parse(text);
    AttackScenario s;
    s.name = j.at("name").get<std::string>();
    s.platform = j.at("platform").get<std::string>();
    s.stealthy = j.value("stealthy", false);
    s.onset_s = j.value("onset_s", 0.0);
    for (const auto& jr : j.at("rules")) {
        SpoofRule r;
        const std::string dir = jr.at("direction").get<std::string>();
        if (dir == "plant_to_plc")
            r.direction = Direction::plant_to_plc;
        else if (dir == "plc_to_plant")
            r.direction = Direction::plc_to_plant;
        else
            throw std::invalid_argument("unknown direction: " + dir);
        const auto table = modbus::table_from_string(jr.at("table").get<std::string>());
        if (!table)
            throw std::invalid_argument("unknown table: " + jr.at("table").get<std::string>());
        r.table = *table;
        r.address = jr.at("address").get<std::uint16_t>();
        r.transform = transform_from_json(jr.at("transform"));
        r.t_start = jr.value("t_start", s.onset_s);
        r.t_end = jr.contains("t_end") ? jr.at("t_end").get<double>()
                                       : std::numeric_limits<double>::infinity();
        s.rules.push_back(std::move(r));
    }
    s.validate();

    // A declared category must agree with the rule set.
    if (j.contains("category")) {
        const std::string declared = j.at("category").get<std::string>();
        if (declared != to_string(categorize(s)))
            throw std::invalid_argument("scenario '" + s.name + "': declared category " +
                                        declared + " but rules say " +
                                        to_string(categorize(s)));
    }
    return s;
}

AttackScenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

void save_scenario(const AttackScenario& scenario, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write scenario file: " + path);
    out << to_json(scenario);
}

} // namespace icsim::mitm
