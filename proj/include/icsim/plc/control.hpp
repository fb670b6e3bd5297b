#ifndef ICSIM_PLC_CONTROL_HPP
#define ICSIM_PLC_CONTROL_HPP

#include <array>
#include <cstdint>

#include "icsim/plant/line.hpp"

namespace icsim::plc {

// PI loop with clamped output and conditional anti-windup: the integral is
// frozen while the output is saturated in the direction of the error.
struct PiController {
    double kp = 1.0;
    double ki = 0.0;
    double setpoint = 0.5;
    double out_min = 0.0;
    double out_max = 1.0;
    double integral = 0.0;

    double step(double measurement, double dt)
    {
        const double error = setpoint - measurement;
        double out = kp * error + ki * (integral + error * dt);
        const bool saturated_high = out > out_max && error > 0.0;
        const bool saturated_low = out < out_min && error < 0.0;
        if (!saturated_high && !saturated_low)
            integral += error * dt;
        out = kp * error + ki * integral;
        return out < out_min ? out_min : (out > out_max ? out_max : out);
    }
};

// Reference control law for the chemical plant: PI loops hold tank level and
// pressure, and the product valve tracks a periodic production schedule whose
// period sets the plant's control cycle.
class ChemControlLaw {
public:
    struct Schedule {
        double cycle_s = 1000.0;
        double demand_base = 0.25;  // product flow demand, fraction of range
        double demand_swing = 0.10;
        double blend_base = 0.5;    // feed 1 share of total feed
        double blend_swing = 0.15;
    };

    ChemControlLaw();
    explicit ChemControlLaw(const Schedule& schedule);

    // sensors in canonical order (level, pressure, f1, f2, fprod, fpurge, ca, cb, cc).
    std::array<double, 4> compute(const std::array<double, 9>& sensors, double t, double dt);

    const Schedule& schedule() const { return schedule_; }

private:
    Schedule schedule_;
    PiController level_pi_;
    PiController pressure_pi_;
    PiController flow_pi_;
};

// Per-cell sequencer for the production line; drives the four-phase cycle
// from sensor bits and the arm position register.
class CellSequencer {
public:
    enum class Step : std::uint8_t {
        feed,      // feeder + infeed until the part reaches pickup
        grab_in,   // close gripper at the conveyor side
        carry_in,  // move arm to the machine side
        drop_in,   // open gripper, part enters the center
        machine,   // run the machining center until the done bit
        grab_out,  // close gripper at the machine side
        carry_out, // move arm back to the conveyor side
        drop_out,  // open gripper, part lands on the outfeed
        discharge, // run outfeed until the part exits
    };

    struct Inputs {
        bool entry = false, pickup = false, in_center = false, done = false, exit = false;
        double arm_pos = 0.0;
    };
    struct Outputs {
        bool feeder = false, infeed_run = false, outfeed_run = false;
        bool arm_fwd = false, arm_rev = false, grab = false, machine_start = false;
    };

    Outputs step(const Inputs& in);
    Step current() const { return step_; }

private:
    Step step_ = Step::feed;
    bool saw_exit_ = false;
};

// Full line control law: two independent sequencers plus the master-run coil.
class LineControlLaw {
public:
    std::array<bool, plant::line_actuator_count>
    compute(const std::array<bool, plant::line_sensor_bits>& bits,
            const std::array<double, plant::line_sensor_regs>& arms);

private:
    CellSequencer a_;
    CellSequencer b_;
};

} // namespace icsim::plc

#endif
