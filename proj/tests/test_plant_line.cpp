#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <vector>

#include "icsim/plant/line.hpp"
#include "icsim/plc/control.hpp"

using namespace icsim;
using plant::CenterPhase;
using plant::LineActuators;
using plant::LineParams;
using plant::LineState;

namespace {

// Directly coupled reference loop (no sockets).
struct LineLoop {
    LineParams params;
    LineState state;
    plc::LineControlLaw law;
    LineActuators act;

    explicit LineLoop(const LineParams& p = LineParams{}) : params(p)
    {
        state.b.feeder_wait = params.stagger_b_s;
    }

    void step()
    {
        const auto bits = plant::line_sensor_bits_of(state, params);
        const auto regs = plant::line_sensor_regs_of(state);
        const std::array<double, 2> arms = {regs[0] / 65535.0, regs[1] / 65535.0};
        const auto coils = law.compute(bits, arms);
        for (std::size_t i = 0; i < coils.size(); ++i)
            act.coils[i] = coils[i];
        state = plant::step_line(state, act, 1.0, params);
    }
};

std::vector<bool> sensor_trace_a(const LineState& s, const LineParams& p)
{
    const auto bits = plant::line_sensor_bits_of(s, p);
    return {bits[0], bits[1], bits[2], bits[3], bits[4]};
}

} // namespace

TEST_CASE("all actuators off leaves the state unchanged except timers")
{
    LineParams p;
    LineState s;
    s.a.part = plant::PartLocation::infeed;
    s.a.belt_pos = 3.0;
    s.a.arm_pos = 0.4;
    s.b.feeder_wait = 5.0;

    LineActuators none{};
    none.coils[plant::LineCoil::master_run] = true;
    const LineState next = plant::step_line(s, none, 1.0, p);
    CHECK(next.a.part == s.a.part);
    CHECK(next.a.belt_pos == s.a.belt_pos);
    CHECK(next.a.arm_pos == s.a.arm_pos);
    CHECK(next.b.feeder_wait == doctest::Approx(4.0));
}

TEST_CASE("arm ramps at its rate and saturates")
{
    LineParams p;
    p.arm_rate = 0.3;
    LineState s;
    LineActuators act{};
    act.coils[plant::LineCoil::master_run] = true;
    act.coils[plant::LineCoil::a_arm_fwd] = true;

    LineState next = plant::step_line(s, act, 1.0, p);
    CHECK(next.a.arm_pos == doctest::Approx(0.3));
    for (int i = 0; i < 10; ++i)
        next = plant::step_line(next, act, 1.0, p);
    CHECK(next.a.arm_pos == doctest::Approx(1.0));
}

TEST_CASE("dt must be positive")
{
    CHECK_THROWS_AS(plant::step_line(LineState{}, LineActuators{}, 0.0, LineParams{}),
                    std::invalid_argument);
}

TEST_CASE("sensor encoding maps bits and scaled arm positions")
{
    LineParams p;
    LineState s;
    s.a.part = plant::PartLocation::at_pickup;
    s.b.arm_pos = 1.0;
    const auto bits = plant::line_sensor_bits_of(s, p);
    CHECK(bits[plant::LineSensor::a_pickup]);
    CHECK(!bits[plant::LineSensor::a_entry]);
    const auto regs = plant::line_sensor_regs_of(s);
    CHECK(regs[plant::LineSensor::arm_b] == 65535);

    // Idle line: everything dark.
    const auto idle = plant::line_sensor_bits_of(LineState{}, p);
    for (bool b : idle)
        CHECK(!b);
}

TEST_CASE("plant bank exposes 12 sensors and 15 actuators")
{
    plant::LinePlant plant_proc{LineParams{}};
    auto bank = plant_proc.bank();
    using modbus::Table;
    for (std::uint16_t i = 0; i < plant::line_sensor_bits; ++i)
        CHECK_NOTHROW(bank->bit_at(Table::discrete_input, i));
    CHECK_THROWS(bank->bit_at(Table::discrete_input, plant::line_sensor_bits));
    for (std::uint16_t i = 0; i < plant::line_sensor_regs; ++i)
        CHECK_NOTHROW(bank->register_at(Table::input_register, i));
    for (std::uint16_t i = 0; i < plant::line_actuator_count; ++i)
        CHECK_NOTHROW(bank->bit_at(Table::coil, i));
    CHECK_THROWS(bank->bit_at(Table::coil, plant::line_actuator_count));
}

TEST_CASE("phases advance only along the four-phase cycle")
{
    LineLoop loop;
    CenterPhase prev_a = loop.state.a.phase();
    CenterPhase prev_b = loop.state.b.phase();
    auto legal = [](CenterPhase from, CenterPhase to) {
        if (from == to)
            return true;
        switch (from) {
        case CenterPhase::idle: return to == CenterPhase::loading;
        case CenterPhase::loading: return to == CenterPhase::machining;
        case CenterPhase::machining: return to == CenterPhase::unloading;
        case CenterPhase::unloading: return to == CenterPhase::idle;
        }
        return false;
    };
    for (int t = 0; t < 2500; ++t) {
        loop.step();
        const CenterPhase a = loop.state.a.phase();
        const CenterPhase b = loop.state.b.phase();
        REQUIRE(legal(prev_a, a));
        REQUIRE(legal(prev_b, b));
        prev_a = a;
        prev_b = b;
    }
}

TEST_CASE("reference loop completes full cycles near 400 s, centers interleaved")
{
    LineLoop loop;
    int exits_a = 0, exits_b = 0;
    int first_a = -1, second_a = -1;
    bool prev_exit_a = false, prev_exit_b = false;
    for (int t = 1; t <= 1000; ++t) {
        loop.step();
        const auto bits = plant::line_sensor_bits_of(loop.state, loop.params);
        const bool ea = bits[plant::LineSensor::a_exit];
        const bool eb = bits[plant::LineSensor::b_exit];
        if (ea && !prev_exit_a) {
            ++exits_a;
            (first_a < 0 ? first_a : second_a) = t;
        }
        if (eb && !prev_exit_b)
            ++exits_b;
        prev_exit_a = ea;
        prev_exit_b = eb;
    }
    CHECK(exits_a >= 2); // both centers complete at least one full part cycle
    CHECK(exits_b >= 1);
    const int period = second_a - first_a;
    CHECK(period >= 360);
    CHECK(period <= 440);
}

TEST_CASE("centers are independent: freezing B leaves A's trace bit-identical")
{
    LineParams p;
    LineLoop both(p);

    // Solo-A loop: B's actuator coils forced off every step.
    LineState solo_state;
    solo_state.b.feeder_wait = p.stagger_b_s;
    plc::LineControlLaw solo_law;
    for (int t = 0; t < 1200; ++t) {
        both.step();

        const auto bits = plant::line_sensor_bits_of(solo_state, p);
        const auto regs = plant::line_sensor_regs_of(solo_state);
        const std::array<double, 2> arms = {regs[0] / 65535.0, regs[1] / 65535.0};
        auto coils = solo_law.compute(bits, arms);
        LineActuators act{};
        for (std::size_t i = 0; i < coils.size(); ++i)
            act.coils[i] = coils[i];
        for (std::uint16_t c = plant::LineCoil::b_feeder; c <= plant::LineCoil::b_machine_start; ++c)
            act.coils[c] = false; // frozen center B
        solo_state = plant::step_line(solo_state, act, 1.0, p);

        REQUIRE(sensor_trace_a(both.state, p) == sensor_trace_a(solo_state, p));
        REQUIRE(plant::line_sensor_regs_of(both.state)[0] ==
                plant::line_sensor_regs_of(solo_state)[0]);
    }
}
