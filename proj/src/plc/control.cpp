#include "icsim/plc/control.hpp"

#include <algorithm>
#include <cmath>

namespace icsim::plc {

namespace {
constexpr double pi = 3.14159265358979323846;
}

ChemControlLaw::ChemControlLaw() : ChemControlLaw(Schedule{}) {}

ChemControlLaw::ChemControlLaw(const Schedule& schedule) : schedule_(schedule)
{
    level_pi_ = PiController{.kp = 5.0, .ki = 0.1, .setpoint = 0.5};
    level_pi_.integral = 4.665; // settled feed duty at the operating point
    pressure_pi_ = PiController{.kp = -4.0, .ki = -0.05, .setpoint = 0.45};
    pressure_pi_.integral = -3.80; // settled purge duty
    flow_pi_ = PiController{.kp = 1.0, .ki = 0.2, .setpoint = schedule_.demand_base};
    flow_pi_.integral = 2.47; // settled product duty
}

std::array<double, 4> ChemControlLaw::compute(const std::array<double, 9>& sensors, double t,
                                              double dt)
{
    const double level = sensors[0];
    const double pressure = sensors[1];
    const double flow_product = sensors[4];

    const double phase = 2.0 * pi * t / schedule_.cycle_s;
    const double demand = schedule_.demand_base + schedule_.demand_swing * std::sin(phase);
    const double blend =
        schedule_.blend_base + schedule_.blend_swing * std::sin(phase + 0.5 * pi);

    const double feed_duty = level_pi_.step(level, dt);
    flow_pi_.setpoint = demand;
    const double v_product = flow_pi_.step(flow_product, dt);
    const double v_purge = pressure_pi_.step(pressure, dt);

    std::array<double, 4> cmd;
    cmd[0] = std::clamp(2.0 * feed_duty * blend, 0.0, 1.0);
    cmd[1] = std::clamp(2.0 * feed_duty * (1.0 - blend), 0.0, 1.0);
    cmd[2] = v_product;
    cmd[3] = v_purge;
    return cmd;
}

CellSequencer::Outputs CellSequencer::step(const Inputs& in)
{
    // Transition on the scan that observes the condition, then emit the new
    // step's outputs, so each handoff occupies as few scans as possible.
    switch (step_) {
    case Step::feed:
        if (in.pickup)
            step_ = Step::grab_in;
        break;
    case Step::grab_in:
        if (!in.pickup) // part attached to the arm
            step_ = Step::carry_in;
        break;
    case Step::carry_in:
        if (in.arm_pos >= 0.975)
            step_ = Step::drop_in;
        break;
    case Step::drop_in:
        if (in.in_center)
            step_ = Step::machine;
        break;
    case Step::machine:
        if (in.done)
            step_ = Step::grab_out;
        break;
    case Step::grab_out:
        if (!in.in_center) // finished part lifted out
            step_ = Step::carry_out;
        break;
    case Step::carry_out:
        if (in.arm_pos <= 0.015)
            step_ = Step::drop_out;
        break;
    case Step::drop_out:
        step_ = Step::discharge;
        break;
    case Step::discharge:
        if (in.exit)
            saw_exit_ = true;
        else if (saw_exit_) { // part left the line
            saw_exit_ = false;
            step_ = Step::feed;
        }
        break;
    }

    Outputs out;
    out.infeed_run = true; // conveyors run continuously
    out.outfeed_run = true;
    switch (step_) {
    case Step::feed:
        out.feeder = true;
        break;
    case Step::grab_in:
    case Step::grab_out:
        out.grab = true;
        break;
    case Step::carry_in:
        out.grab = true;
        out.arm_fwd = true;
        break;
    case Step::carry_out:
        out.grab = true;
        out.arm_rev = true;
        break;
    case Step::machine:
        out.machine_start = true;
        break;
    case Step::drop_in:
    case Step::drop_out:
    case Step::discharge:
        break;
    }
    return out;
}

std::array<bool, plant::line_actuator_count>
LineControlLaw::compute(const std::array<bool, plant::line_sensor_bits>& bits,
                        const std::array<double, plant::line_sensor_regs>& arms)
{
    using plant::LineCoil;
    using plant::LineSensor;

    CellSequencer::Inputs ia{bits[LineSensor::a_entry], bits[LineSensor::a_pickup],
                             bits[LineSensor::a_in_center], bits[LineSensor::a_done],
                             bits[LineSensor::a_exit], arms[0]};
    CellSequencer::Inputs ib{bits[LineSensor::b_entry], bits[LineSensor::b_pickup],
                             bits[LineSensor::b_in_center], bits[LineSensor::b_done],
                             bits[LineSensor::b_exit], arms[1]};
    const auto oa = a_.step(ia);
    const auto ob = b_.step(ib);

    std::array<bool, plant::line_actuator_count> coils{};
    coils[LineCoil::a_feeder] = oa.feeder;
    coils[LineCoil::a_infeed_run] = oa.infeed_run;
    coils[LineCoil::a_outfeed_run] = oa.outfeed_run;
    coils[LineCoil::a_arm_fwd] = oa.arm_fwd;
    coils[LineCoil::a_arm_rev] = oa.arm_rev;
    coils[LineCoil::a_grab] = oa.grab;
    coils[LineCoil::a_machine_start] = oa.machine_start;
    coils[LineCoil::b_feeder] = ob.feeder;
    coils[LineCoil::b_infeed_run] = ob.infeed_run;
    coils[LineCoil::b_outfeed_run] = ob.outfeed_run;
    coils[LineCoil::b_arm_fwd] = ob.arm_fwd;
    coils[LineCoil::b_arm_rev] = ob.arm_rev;
    coils[LineCoil::b_grab] = ob.grab;
    coils[LineCoil::b_machine_start] = ob.machine_start;
    coils[LineCoil::master_run] = true;
    return coils;
}

} // namespace icsim::plc
