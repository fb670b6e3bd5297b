#include "icsim/harness/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace icsim::harness {

using nlohmann::json;

const char* to_string(Platform p) { return p == Platform::chem ? "chem" : "line"; }

Platform platform_from_string(const std::string& s)
{
    if (s == "chem")
        return Platform::chem;
    if (s == "line")
        return Platform::line;
    throw std::invalid_argument("unknown platform: " + s);
}

TestbedConfig default_config()
{
    TestbedConfig cfg;
    cfg.chem.schedule.cycle_s = cfg.chem.cycle_s;
    return cfg;
}

namespace {

json chem_to_json(const ChemConfig& c)
{
    json j;
    j["cycle_s"] = c.cycle_s;
    j["window"] = {{"size", c.window.size}, {"theta", c.window.theta}};
    j["warmup_s"] = c.warmup_s;
    j["onset_s"] = c.onset_s;
    j["plant"] = {{"k_in", c.plant.k_in},
                  {"k_out", c.plant.k_out},
                  {"f1_max", c.plant.f1_max},
                  {"f2_max", c.plant.f2_max},
                  {"pressure_lag_s", c.plant.pressure_lag_s},
                  {"composition_lag_s", c.plant.composition_lag_s},
                  {"pressure_base", c.plant.pressure_base},
                  {"pressure_level_gain", c.plant.pressure_level_gain},
                  {"pressure_purge_relief", c.plant.pressure_purge_relief},
                  {"yield_base", c.plant.yield_base},
                  {"yield_pressure_gain", c.plant.yield_pressure_gain},
                  {"noise_sigma", c.plant.noise_sigma}};
    j["schedule"] = {{"demand_base", c.schedule.demand_base},
                     {"demand_swing", c.schedule.demand_swing},
                     {"blend_base", c.schedule.blend_base},
                     {"blend_swing", c.schedule.blend_swing}};
    return j;
}

void chem_from_json(const json& j, ChemConfig& c)
{
    c.cycle_s = j.value("cycle_s", c.cycle_s);
    if (j.contains("window")) {
        c.window.size = j["window"].value("size", c.window.size);
        c.window.theta = j["window"].value("theta", c.window.theta);
    }
    c.warmup_s = j.value("warmup_s", c.warmup_s);
    c.onset_s = j.value("onset_s", c.onset_s);
    if (j.contains("plant")) {
        const auto& p = j["plant"];
        c.plant.k_in = p.value("k_in", c.plant.k_in);
        c.plant.k_out = p.value("k_out", c.plant.k_out);
        c.plant.f1_max = p.value("f1_max", c.plant.f1_max);
        c.plant.f2_max = p.value("f2_max", c.plant.f2_max);
        c.plant.pressure_lag_s = p.value("pressure_lag_s", c.plant.pressure_lag_s);
        c.plant.composition_lag_s = p.value("composition_lag_s", c.plant.composition_lag_s);
        c.plant.pressure_base = p.value("pressure_base", c.plant.pressure_base);
        c.plant.pressure_level_gain = p.value("pressure_level_gain", c.plant.pressure_level_gain);
        c.plant.pressure_purge_relief =
            p.value("pressure_purge_relief", c.plant.pressure_purge_relief);
        c.plant.yield_base = p.value("yield_base", c.plant.yield_base);
        c.plant.yield_pressure_gain = p.value("yield_pressure_gain", c.plant.yield_pressure_gain);
        c.plant.noise_sigma = p.value("noise_sigma", c.plant.noise_sigma);
    }
    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        c.schedule.demand_base = s.value("demand_base", c.schedule.demand_base);
        c.schedule.demand_swing = s.value("demand_swing", c.schedule.demand_swing);
        c.schedule.blend_base = s.value("blend_base", c.schedule.blend_base);
        c.schedule.blend_swing = s.value("blend_swing", c.schedule.blend_swing);
    }
    c.schedule.cycle_s = c.cycle_s;
}

json line_to_json(const LineConfig& c)
{
    json j;
    j["cycle_s"] = c.cycle_s;
    j["window"] = {{"size", c.window.size}, {"theta", c.window.theta}};
    j["warmup_s"] = c.warmup_s;
    j["onset_s"] = c.onset_s;
    j["plant"] = {{"infeed_len_s", c.plant.infeed_len_s},
                  {"outfeed_len_s", c.plant.outfeed_len_s},
                  {"arm_rate", c.plant.arm_rate},
                  {"machining_dwell_s", c.plant.machining_dwell_s},
                  {"feeder_gap_s", c.plant.feeder_gap_s},
                  {"stagger_b_s", c.plant.stagger_b_s}};
    return j;
}

void line_from_json(const json& j, LineConfig& c)
{
    c.cycle_s = j.value("cycle_s", c.cycle_s);
    if (j.contains("window")) {
        c.window.size = j["window"].value("size", c.window.size);
        c.window.theta = j["window"].value("theta", c.window.theta);
    }
    c.warmup_s = j.value("warmup_s", c.warmup_s);
    c.onset_s = j.value("onset_s", c.onset_s);
    if (j.contains("plant")) {
        const auto& p = j["plant"];
        c.plant.infeed_len_s = p.value("infeed_len_s", c.plant.infeed_len_s);
        c.plant.outfeed_len_s = p.value("outfeed_len_s", c.plant.outfeed_len_s);
        c.plant.arm_rate = p.value("arm_rate", c.plant.arm_rate);
        c.plant.machining_dwell_s = p.value("machining_dwell_s", c.plant.machining_dwell_s);
        c.plant.feeder_gap_s = p.value("feeder_gap_s", c.plant.feeder_gap_s);
        c.plant.stagger_b_s = p.value("stagger_b_s", c.plant.stagger_b_s);
    }
}

} // namespace

TestbedConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config: " + path);
    json j;
    in >> j;

    TestbedConfig cfg = default_config();
    cfg.seed = j.value("seed", cfg.seed);
    cfg.acceleration = j.value("acceleration", cfg.acceleration);
    cfg.dt_s = j.value("dt_s", cfg.dt_s);
    if (j.contains("chem"))
        chem_from_json(j["chem"], cfg.chem);
    if (j.contains("line"))
        line_from_json(j["line"], cfg.line);
    return cfg;
}

void save_config(const TestbedConfig& cfg, const std::string& path)
{
    json j;
    j["seed"] = cfg.seed;
    j["acceleration"] = cfg.acceleration;
    j["dt_s"] = cfg.dt_s;
    j["chem"] = chem_to_json(cfg.chem);
    j["line"] = line_to_json(cfg.line);
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write config: " + path);
    out << j.dump(2) << "\n";
}

} // namespace icsim::harness
