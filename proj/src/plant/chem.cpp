#include "icsim/plant/chem.hpp"

#include <algorithm>
#include <cmath>

namespace icsim::plant {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

} // namespace

ChemState step_chem(const ChemState& state, const ValveCommand& valves, double dt,
                    const ChemParams& p)
{
    if (dt <= 0.0)
        throw std::invalid_argument("step_chem: dt must be positive");

    const double v1 = clamp01(valves.v_feed1);
    const double v2 = clamp01(valves.v_feed2);
    const double vp = clamp01(valves.v_product);
    const double vg = clamp01(valves.v_purge);

    ChemState next = state;

    // Mass balance on the tank; outflow availability is the tank level.
    const double inflow = p.k_in * (v1 * p.f1_max + v2 * p.f2_max);
    const double outflow = p.k_out * (vp * state.tank_level + vg * state.tank_level);
    next.tank_level = clamp01(state.tank_level + dt * (inflow - outflow));

    next.flow_feed1 = clamp01(v1 * p.f1_max);
    next.flow_feed2 = clamp01(v2 * p.f2_max);
    next.flow_product = clamp01(vp * next.tank_level);
    next.flow_purge = clamp01(vg * next.tank_level);

    // Pressure tracks a monotone function of level, vented by the purge valve.
    const double pressure_target =
        clamp01(p.pressure_base + p.pressure_level_gain * next.tank_level -
                p.pressure_purge_relief * vg);
    next.tank_pressure = clamp01(state.tank_pressure +
                                 dt * (pressure_target - state.tank_pressure) / p.pressure_lag_s);

    // Purge composition mixes the feed ratio with the reaction yield.
    const double feed_total = next.flow_feed1 + next.flow_feed2;
    const double r1 = feed_total > 1e-9 ? next.flow_feed1 / feed_total : 0.5;
    const double yield = clamp01(p.yield_base + p.yield_pressure_gain * next.tank_pressure);
    const double target_a = (1.0 - yield) * r1;
    const double target_b = (1.0 - yield) * (1.0 - r1);
    const double target_c = yield;
    const double lag = dt / p.composition_lag_s;
    next.composition_a = clamp01(state.composition_a + lag * (target_a - state.composition_a));
    next.composition_b = clamp01(state.composition_b + lag * (target_b - state.composition_b));
    next.composition_c = clamp01(state.composition_c + lag * (target_c - state.composition_c));

    const double total = next.composition_a + next.composition_b + next.composition_c;
    if (total > 1e-12) {
        next.composition_a /= total;
        next.composition_b /= total;
        next.composition_c /= total;
    } else {
        next.composition_a = next.composition_b = next.composition_c = 1.0 / 3.0;
    }
    return next;
}

std::uint16_t to_register(double fraction)
{
    const double v = std::lround(clamp01(fraction) * 65535.0);
    return static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
}

double from_register(std::uint16_t raw) { return static_cast<double>(raw) / 65535.0; }

std::uint16_t to_register_noisy(double fraction, double sigma, std::mt19937_64& rng)
{
    double v = clamp01(fraction) * 65535.0;
    if (sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, sigma * 65535.0);
        v += noise(rng);
    }
    return static_cast<std::uint16_t>(std::clamp(std::round(v), 0.0, 65535.0));
}

std::array<double, 9> chem_sensor_values(const ChemState& s)
{
    return {s.tank_level,  s.tank_pressure, s.flow_feed1,    s.flow_feed2,    s.flow_product,
            s.flow_purge,  s.composition_a, s.composition_b, s.composition_c};
}

ChemState ChemPlant::reference_initial_state()
{
    // Operating point of the reference closed loop (see plc chem law), taken
    // from a settled run at schedule phase zero.
    ChemState s;
    s.tank_level = 0.4930;
    s.tank_pressure = 0.4482;
    s.flow_feed1 = 0.6065;
    s.flow_feed2 = 0.2776;
    s.flow_product = 0.2435;
    s.flow_purge = 0.0936;
    s.composition_a = 0.4158;
    s.composition_b = 0.1997;
    s.composition_c = 0.3844;
    return s;
}

ValveCommand ChemPlant::reference_initial_valves()
{
    ValveCommand v;
    v.v_feed1 = 0.6065;
    v.v_feed2 = 0.3266;
    v.v_product = 0.4939;
    v.v_purge = 0.1899;
    return v;
}

ChemPlant::ChemPlant(const ChemParams& params, std::uint64_t noise_seed)
    : params_(params), state_(reference_initial_state()), rng_(noise_seed)
{
    for (auto& b : banks_)
        b = std::make_shared<modbus::RegisterBank>();
    using modbus::Table;
    const ValveCommand v0 = reference_initial_valves();

    banks_[0]->map_input(ChemAddress::level);
    banks_[0]->map_input(ChemAddress::pressure);
    banks_[1]->map_input(ChemAddress::flow_feed1);
    banks_[1]->map_holding(ChemAddress::valve_feed1, to_register(v0.v_feed1));
    banks_[2]->map_input(ChemAddress::flow_feed2);
    banks_[2]->map_holding(ChemAddress::valve_feed2, to_register(v0.v_feed2));
    banks_[3]->map_input(ChemAddress::flow_product);
    banks_[3]->map_holding(ChemAddress::valve_product, to_register(v0.v_product));
    banks_[4]->map_input(ChemAddress::flow_purge);
    banks_[4]->map_input(ChemAddress::composition_a);
    banks_[4]->map_input(ChemAddress::composition_b);
    banks_[4]->map_input(ChemAddress::composition_c);
    banks_[4]->map_holding(ChemAddress::valve_purge, to_register(v0.v_purge));

    encode_sensors();
}

ValveCommand ChemPlant::valves() const
{
    using modbus::Table;
    ValveCommand v;
    v.v_feed1 = from_register(banks_[1]->register_at(Table::holding_register, ChemAddress::valve_feed1));
    v.v_feed2 = from_register(banks_[2]->register_at(Table::holding_register, ChemAddress::valve_feed2));
    v.v_product =
        from_register(banks_[3]->register_at(Table::holding_register, ChemAddress::valve_product));
    v.v_purge = from_register(banks_[4]->register_at(Table::holding_register, ChemAddress::valve_purge));
    return v;
}

std::shared_ptr<modbus::RegisterBank> ChemPlant::bank(ChemServer server) const
{
    return banks_[static_cast<std::size_t>(server)];
}

void ChemPlant::tick(double dt)
{
    state_ = step_chem(state_, valves(), dt, params_);
    encode_sensors();
}

void ChemPlant::encode_sensors()
{
    using modbus::Table;
    const double sigma = params_.noise_sigma;
    auto enc = [&](std::size_t bank, std::uint16_t addr, double value) {
        banks_[bank]->set_register(Table::input_register, addr,
                                   to_register_noisy(value, sigma, rng_));
    };
    enc(0, ChemAddress::level, state_.tank_level);
    enc(0, ChemAddress::pressure, state_.tank_pressure);
    enc(1, ChemAddress::flow_feed1, state_.flow_feed1);
    enc(2, ChemAddress::flow_feed2, state_.flow_feed2);
    enc(3, ChemAddress::flow_product, state_.flow_product);
    enc(4, ChemAddress::flow_purge, state_.flow_purge);
    enc(4, ChemAddress::composition_a, state_.composition_a);
    enc(4, ChemAddress::composition_b, state_.composition_b);
    enc(4, ChemAddress::composition_c, state_.composition_c);
}

} // namespace icsim::plant
