#include "icsim/plc/plc.hpp"

#include <cmath>

namespace icsim::plc {

using modbus::Table;
using plant::ChemAddress;
using plant::from_register;
using plant::to_register;

namespace {

constexpr std::chrono::milliseconds plc_io_timeout{1000};

} // namespace

ChemPlc::ChemPlc(std::array<Endpoint, plant::chem_server_count> plant,
                 const ChemControlLaw::Schedule& schedule, std::uint16_t serve_port)
    : endpoints_(std::move(plant)), law_(schedule),
      bank_(std::make_shared<modbus::RegisterBank>())
{
    bank_->map_range(Table::input_register, PlcMap::sensor_base, 9);
    bank_->map_range(Table::holding_register, PlcMap::readback_base, 4);
    bank_->map_range(Table::holding_register, PlcMap::commanded_base, 4);
    image_.sensors.assign(9, 0.0);
    image_.actuator_readback.assign(4, 0.0);
    image_.commanded.assign(4, 0.0);
    server_ = std::make_unique<modbus::ModbusTcpServer>(bank_, serve_port);
}

void ChemPlc::connect()
{
    for (std::size_t i = 0; i < endpoints_.size(); ++i)
        clients_[i] = std::make_unique<modbus::ModbusTcpClient>(endpoints_[i].host,
                                                                endpoints_[i].port, plc_io_timeout);
}

void ChemPlc::scan(double t, double dt)
{
    std::array<std::uint16_t, 9> raw_sensors;
    std::array<std::uint16_t, 4> raw_readback;
    try {
        if (!clients_[0])
            connect();
        const auto tank = clients_[0]->read_registers(Table::input_register, ChemAddress::level, 2);
        const auto f1 =
            clients_[1]->read_registers(Table::input_register, ChemAddress::flow_feed1, 1);
        const auto f2 =
            clients_[2]->read_registers(Table::input_register, ChemAddress::flow_feed2, 1);
        const auto fp =
            clients_[3]->read_registers(Table::input_register, ChemAddress::flow_product, 1);
        const auto purge =
            clients_[4]->read_registers(Table::input_register, ChemAddress::flow_purge, 4);
        raw_sensors = {tank[0], tank[1], f1[0], f2[0], fp[0], purge[0], purge[1], purge[2],
                       purge[3]};

        raw_readback = {
            clients_[1]->read_registers(Table::holding_register, ChemAddress::valve_feed1, 1)[0],
            clients_[2]->read_registers(Table::holding_register, ChemAddress::valve_feed2, 1)[0],
            clients_[3]->read_registers(Table::holding_register, ChemAddress::valve_product, 1)[0],
            clients_[4]->read_registers(Table::holding_register, ChemAddress::valve_purge, 1)[0]};
    } catch (const std::runtime_error&) {
        ++image_.error_count;
        ++image_.consecutive_stale;
        return; // image stays frozen at the previous scan
    }

    std::array<double, 9> sensors;
    for (std::size_t i = 0; i < 9; ++i)
        sensors[i] = from_register(raw_sensors[i]);
    const auto cmd = law_.compute(sensors, t, dt);

    std::array<std::uint16_t, 4> raw_cmd;
    for (std::size_t i = 0; i < 4; ++i)
        raw_cmd[i] = to_register(cmd[i]);
    try {
        clients_[1]->write_register(ChemAddress::valve_feed1, raw_cmd[0]);
        clients_[2]->write_register(ChemAddress::valve_feed2, raw_cmd[1]);
        clients_[3]->write_register(ChemAddress::valve_product, raw_cmd[2]);
        clients_[4]->write_register(ChemAddress::valve_purge, raw_cmd[3]);
    } catch (const std::runtime_error&) {
        ++image_.error_count;
        ++image_.consecutive_stale;
        return;
    }

    for (std::size_t i = 0; i < 9; ++i) {
        image_.sensors[i] = sensors[i];
        bank_->set_register(Table::input_register,
                            static_cast<std::uint16_t>(PlcMap::sensor_base + i), raw_sensors[i]);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        image_.actuator_readback[i] = from_register(raw_readback[i]);
        image_.commanded[i] = from_register(raw_cmd[i]);
        bank_->set_register(Table::holding_register,
                            static_cast<std::uint16_t>(PlcMap::readback_base + i),
                            raw_readback[i]);
        bank_->set_register(Table::holding_register,
                            static_cast<std::uint16_t>(PlcMap::commanded_base + i), raw_cmd[i]);
    }
    ++image_.scan_count;
    image_.consecutive_stale = 0;
}

LinePlc::LinePlc(Endpoint plant, std::uint16_t serve_port)
    : endpoint_(std::move(plant)), bank_(std::make_shared<modbus::RegisterBank>())
{
    bank_->map_range(Table::discrete_input, PlcMap::sensor_base, plant::line_sensor_bits);
    bank_->map_range(Table::input_register, PlcMap::sensor_base, plant::line_sensor_regs);
    bank_->map_range(Table::coil, PlcMap::readback_base, plant::line_actuator_count);
    bank_->map_range(Table::coil, PlcMap::commanded_base, plant::line_actuator_count);
    image_.sensors.assign(plant::line_sensor_bits + plant::line_sensor_regs, 0.0);
    image_.actuator_readback.assign(plant::line_actuator_count, 0.0);
    image_.commanded.assign(plant::line_actuator_count, 0.0);
    server_ = std::make_unique<modbus::ModbusTcpServer>(bank_, serve_port);
}

void LinePlc::connect()
{
    client_ = std::make_unique<modbus::ModbusTcpClient>(endpoint_.host, endpoint_.port,
                                                        plc_io_timeout);
}

void LinePlc::scan(double t, double dt)
{
    (void)t;
    (void)dt;
    std::vector<bool> bits;
    std::vector<std::uint16_t> arms;
    std::vector<bool> readback;
    try {
        if (!client_)
            connect();
        bits = client_->read_bits(Table::discrete_input, 0, plant::line_sensor_bits);
        arms = client_->read_registers(Table::input_register, 0, plant::line_sensor_regs);
        readback = client_->read_bits(Table::coil, 0, plant::line_actuator_count);
    } catch (const std::runtime_error&) {
        ++image_.error_count;
        ++image_.consecutive_stale;
        return;
    }

    std::array<bool, plant::line_sensor_bits> bit_arr{};
    for (std::size_t i = 0; i < plant::line_sensor_bits; ++i)
        bit_arr[i] = bits[i];
    std::array<double, plant::line_sensor_regs> arm_arr{};
    for (std::size_t i = 0; i < plant::line_sensor_regs; ++i)
        arm_arr[i] = from_register(arms[i]);

    const auto coils = law_.compute(bit_arr, arm_arr);
    try {
        client_->write_coils(0, std::vector<bool>(coils.begin(), coils.end()));
    } catch (const std::runtime_error&) {
        ++image_.error_count;
        ++image_.consecutive_stale;
        return;
    }

    for (std::size_t i = 0; i < plant::line_sensor_bits; ++i) {
        image_.sensors[i] = bits[i] ? 1.0 : 0.0;
        bank_->set_bit(Table::discrete_input, static_cast<std::uint16_t>(PlcMap::sensor_base + i),
                       bits[i]);
    }
    for (std::size_t i = 0; i < plant::line_sensor_regs; ++i) {
        image_.sensors[plant::line_sensor_bits + i] = arm_arr[i];
        bank_->set_register(Table::input_register,
                            static_cast<std::uint16_t>(PlcMap::sensor_base + i), arms[i]);
    }
    for (std::size_t i = 0; i < plant::line_actuator_count; ++i) {
        image_.actuator_readback[i] = readback[i] ? 1.0 : 0.0;
        image_.commanded[i] = coils[i] ? 1.0 : 0.0;
        bank_->set_bit(Table::coil, static_cast<std::uint16_t>(PlcMap::readback_base + i),
                       readback[i]);
        bank_->set_bit(Table::coil, static_cast<std::uint16_t>(PlcMap::commanded_base + i),
                       coils[i]);
    }
    ++image_.scan_count;
    image_.consecutive_stale = 0;
}

} // namespace icsim::plc
