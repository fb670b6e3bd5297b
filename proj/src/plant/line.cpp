#include "icsim/plant/line.hpp"

#include <algorithm>
#include <stdexcept>

#include "icsim/plant/chem.hpp"

namespace icsim::plant {

const char* to_string(CenterPhase p)
{
    switch (p) {
    case CenterPhase::idle: return "idle";
    case CenterPhase::loading: return "loading";
    case CenterPhase::machining: return "machining";
    case CenterPhase::unloading: return "unloading";
    }
    return "unknown";
}

CenterPhase CenterState::phase() const
{
    switch (part) {
    case PartLocation::none: return CenterPhase::idle;
    case PartLocation::infeed:
    case PartLocation::at_pickup:
    case PartLocation::on_arm: return CenterPhase::loading;
    case PartLocation::in_center: return CenterPhase::machining;
    case PartLocation::on_arm_return:
    case PartLocation::outfeed: return CenterPhase::unloading;
    }
    return CenterPhase::idle;
}

namespace {

struct CellCoils {
    bool feeder, infeed_run, outfeed_run, arm_fwd, arm_rev, grab, machine_start;
};

CenterState step_cell(const CenterState& cell, const CellCoils& c, double dt,
                      const LineParams& p)
{
    CenterState next = cell;

    if (next.feeder_wait > 0.0)
        next.feeder_wait = std::max(0.0, next.feeder_wait - dt);

    // Arm drive; opposing commands cancel.
    double drive = 0.0;
    if (c.arm_fwd)
        drive += p.arm_rate;
    if (c.arm_rev)
        drive -= p.arm_rate;
    next.arm_pos = std::clamp(next.arm_pos + drive * dt, 0.0, 1.0);

    switch (next.part) {
    case PartLocation::none:
        if (c.feeder && next.feeder_wait <= 0.0) {
            next.part = PartLocation::infeed;
            next.belt_pos = 0.0;
        }
        break;

    case PartLocation::infeed:
        if (c.infeed_run)
            next.belt_pos += dt;
        if (next.belt_pos >= p.infeed_len_s)
            next.part = PartLocation::at_pickup;
        break;

    case PartLocation::at_pickup:
        if (c.grab && next.arm_pos <= 0.02)
            next.part = PartLocation::on_arm;
        break;

    case PartLocation::on_arm:
        if (!c.grab && next.arm_pos >= 0.98) {
            next.part = PartLocation::in_center;
            next.machining_done = false;
            next.machining_elapsed = 0.0;
        }
        break;

    case PartLocation::in_center:
        if (c.machine_start && !next.machining_done) {
            next.machining_elapsed += dt;
            if (next.machining_elapsed >= p.machining_dwell_s)
                next.machining_done = true;
        }
        if (next.machining_done && c.grab && next.arm_pos >= 0.98) {
            next.part = PartLocation::on_arm_return;
            next.machining_done = false;
        }
        break;

    case PartLocation::on_arm_return:
        if (!c.grab && next.arm_pos <= 0.02) {
            next.part = PartLocation::outfeed;
            next.belt_pos = 0.0;
        }
        break;

    case PartLocation::outfeed:
        if (c.outfeed_run)
            next.belt_pos += dt;
        if (next.belt_pos >= p.outfeed_len_s) {
            next.part = PartLocation::none;
            next.feeder_wait = p.feeder_gap_s;
        }
        break;
    }
    return next;
}

} // namespace

LineState step_line(const LineState& state, const LineActuators& act, double dt,
                    const LineParams& p)
{
    if (dt <= 0.0)
        throw std::invalid_argument("step_line: dt must be positive");

    LineState next = state;
    if (!act[LineCoil::master_run]) {
        // Everything halted; only the feeder gap timers run down.
        if (next.a.feeder_wait > 0.0)
            next.a.feeder_wait = std::max(0.0, next.a.feeder_wait - dt);
        if (next.b.feeder_wait > 0.0)
            next.b.feeder_wait = std::max(0.0, next.b.feeder_wait - dt);
        return next;
    }

    const CellCoils a{act[LineCoil::a_feeder],  act[LineCoil::a_infeed_run],
                      act[LineCoil::a_outfeed_run], act[LineCoil::a_arm_fwd],
                      act[LineCoil::a_arm_rev], act[LineCoil::a_grab],
                      act[LineCoil::a_machine_start]};
    const CellCoils b{act[LineCoil::b_feeder],  act[LineCoil::b_infeed_run],
                      act[LineCoil::b_outfeed_run], act[LineCoil::b_arm_fwd],
                      act[LineCoil::b_arm_rev], act[LineCoil::b_grab],
                      act[LineCoil::b_machine_start]};
    next.a = step_cell(state.a, a, dt, p);
    next.b = step_cell(state.b, b, dt, p);
    return next;
}

namespace {

void cell_bits(const CenterState& s, const LineParams& p, bool* out)
{
    out[0] = s.part == PartLocation::infeed && s.belt_pos < 1.0;          // entry
    out[1] = s.part == PartLocation::at_pickup;                          // pickup
    out[2] = s.part == PartLocation::in_center;                          // in center
    out[3] = s.part == PartLocation::in_center && s.machining_done;      // done
    out[4] = s.part == PartLocation::outfeed && s.belt_pos >= p.outfeed_len_s - 1.0; // exit
}

} // namespace

std::array<bool, line_sensor_bits> line_sensor_bits_of(const LineState& s, const LineParams& p)
{
    std::array<bool, line_sensor_bits> bits{};
    bool tmp[5];
    cell_bits(s.a, p, tmp);
    std::copy(tmp, tmp + 5, bits.begin());
    cell_bits(s.b, p, tmp);
    std::copy(tmp, tmp + 5, bits.begin() + 5);
    return bits;
}

std::array<std::uint16_t, line_sensor_regs> line_sensor_regs_of(const LineState& s)
{
    return {to_register(s.a.arm_pos), to_register(s.b.arm_pos)};
}

LinePlant::LinePlant(const LineParams& params)
    : params_(params), bank_(std::make_shared<modbus::RegisterBank>())
{
    state_.b.feeder_wait = params_.stagger_b_s;

    using modbus::Table;
    bank_->map_range(Table::discrete_input, 0, line_sensor_bits);
    bank_->map_range(Table::input_register, 0, line_sensor_regs);
    bank_->map_range(Table::coil, 0, line_actuator_count);
    encode_sensors();
}

LineActuators LinePlant::actuators() const
{
    LineActuators act;
    for (std::uint16_t i = 0; i < line_actuator_count; ++i)
        act.coils[i] = bank_->bit_at(modbus::Table::coil, i);
    return act;
}

void LinePlant::tick(double dt)
{
    state_ = step_line(state_, actuators(), dt, params_);
    encode_sensors();
}

void LinePlant::encode_sensors()
{
    using modbus::Table;
    const auto bits = line_sensor_bits_of(state_, params_);
    for (std::uint16_t i = 0; i < line_sensor_bits; ++i)
        bank_->set_bit(Table::discrete_input, i, bits[i]);
    const auto regs = line_sensor_regs_of(state_);
    for (std::uint16_t i = 0; i < line_sensor_regs; ++i)
        bank_->set_register(Table::input_register, i, regs[i]);
}

} // namespace icsim::plant
