#include "icsim/modbus/register_bank.hpp"

namespace icsim::modbus {

const char* to_string(Table t)
{
    switch (t) {
    case Table::holding_register: return "holding_register";
    case Table::input_register: return "input_register";
    case Table::coil: return "coil";
    case Table::discrete_input: return "discrete_input";
    }
    return "unknown";
}

std::optional<Table> table_from_string(const std::string& s)
{
    if (s == "holding_register") return Table::holding_register;
    if (s == "input_register") return Table::input_register;
    if (s == "coil") return Table::coil;
    if (s == "discrete_input") return Table::discrete_input;
    return std::nullopt;
}

Pdu make_exception(FunctionCode fc, ExceptionCode code)
{
    Pdu p;
    p.function = fc;
    p.direction = PduDirection::response;
    p.is_exception = true;
    p.exception = code;
    return p;
}

void RegisterBank::map_holding(std::uint16_t address, std::uint16_t value)
{
    std::lock_guard lock(mutex_);
    holding_[address] = value;
}

void RegisterBank::map_input(std::uint16_t address, std::uint16_t value)
{
    std::lock_guard lock(mutex_);
    input_[address] = value;
}

void RegisterBank::map_coil(std::uint16_t address, bool value)
{
    std::lock_guard lock(mutex_);
    coils_[address] = value;
}

void RegisterBank::map_discrete(std::uint16_t address, bool value)
{
    std::lock_guard lock(mutex_);
    discrete_[address] = value;
}

void RegisterBank::map_range(Table table, std::uint16_t first, std::uint16_t count)
{
    for (std::uint32_t a = first; a < static_cast<std::uint32_t>(first) + count; ++a) {
        switch (table) {
        case Table::holding_register: map_holding(static_cast<std::uint16_t>(a)); break;
        case Table::input_register: map_input(static_cast<std::uint16_t>(a)); break;
        case Table::coil: map_coil(static_cast<std::uint16_t>(a)); break;
        case Table::discrete_input: map_discrete(static_cast<std::uint16_t>(a)); break;
        }
    }
}

void RegisterBank::set_register(Table table, std::uint16_t address, std::uint16_t value)
{
    std::lock_guard lock(mutex_);
    auto& t = table == Table::holding_register ? holding_ : input_;
    if (table != Table::holding_register && table != Table::input_register)
        throw std::invalid_argument("set_register: bit table");
    t[address] = value;
}

void RegisterBank::set_bit(Table table, std::uint16_t address, bool value)
{
    std::lock_guard lock(mutex_);
    if (table != Table::coil && table != Table::discrete_input)
        throw std::invalid_argument("set_bit: register table");
    auto& t = table == Table::coil ? coils_ : discrete_;
    t[address] = value;
}

std::uint16_t RegisterBank::register_at(Table table, std::uint16_t address) const
{
    std::lock_guard lock(mutex_);
    const auto& t = table == Table::holding_register ? holding_ : input_;
    auto it = t.find(address);
    if (it == t.end())
        throw std::out_of_range("register_at: unmapped address " + std::to_string(address));
    return it->second;
}

bool RegisterBank::bit_at(Table table, std::uint16_t address) const
{
    std::lock_guard lock(mutex_);
    const auto& t = table == Table::coil ? coils_ : discrete_;
    auto it = t.find(address);
    if (it == t.end())
        throw std::out_of_range("bit_at: unmapped address " + std::to_string(address));
    return it->second;
}

Pdu RegisterBank::execute(const Pdu& request)
{
    std::lock_guard lock(mutex_);
    return execute_locked(request);
}

Pdu RegisterBank::execute_locked(const Pdu& request)
{
    const FunctionCode fc = request.function;
    auto illegal_address = [&] { return make_exception(fc, ExceptionCode::illegal_data_address); };

    Pdu resp;
    resp.function = fc;
    resp.direction = PduDirection::response;

    switch (fc) {
    case FunctionCode::read_holding_registers:
    case FunctionCode::read_input_registers: {
        const auto& t = fc == FunctionCode::read_holding_registers ? holding_ : input_;
        if (request.count < 1 || request.count > max_read_registers)
            return make_exception(fc, ExceptionCode::illegal_data_value);
        for (std::uint32_t a = request.address; a < request.address + std::uint32_t(request.count); ++a) {
            auto it = t.find(static_cast<std::uint16_t>(a));
            if (a > 0xffff || it == t.end())
                return illegal_address();
            resp.registers.push_back(it->second);
        }
        return resp;
    }

    case FunctionCode::read_coils:
    case FunctionCode::read_discrete_inputs: {
        const auto& t = fc == FunctionCode::read_coils ? coils_ : discrete_;
        if (request.count < 1 || request.count > max_read_bits)
            return make_exception(fc, ExceptionCode::illegal_data_value);
        for (std::uint32_t a = request.address; a < request.address + std::uint32_t(request.count); ++a) {
            auto it = t.find(static_cast<std::uint16_t>(a));
            if (a > 0xffff || it == t.end())
                return illegal_address();
            resp.coils.push_back(it->second);
        }
        // Response carries whole bytes; pad like the wire does.
        resp.coils.resize(((request.count + 7) / 8) * 8, false);
        return resp;
    }

    case FunctionCode::write_single_register: {
        auto it = holding_.find(request.address);
        if (it == holding_.end())
            return illegal_address();
        it->second = request.registers.at(0);
        resp.address = request.address;
        resp.registers = request.registers;
        return resp;
    }

    case FunctionCode::write_single_coil: {
        auto it = coils_.find(request.address);
        if (it == coils_.end())
            return illegal_address();
        it->second = request.coils.at(0);
        resp.address = request.address;
        resp.coils = request.coils;
        return resp;
    }

    case FunctionCode::write_multiple_registers: {
        if (request.count < 1 || request.count > max_write_registers ||
            request.registers.size() != request.count)
            return make_exception(fc, ExceptionCode::illegal_data_value);
        for (std::uint32_t a = request.address; a < request.address + std::uint32_t(request.count); ++a)
            if (a > 0xffff || !holding_.count(static_cast<std::uint16_t>(a)))
                return illegal_address();
        for (std::size_t i = 0; i < request.count; ++i)
            holding_[static_cast<std::uint16_t>(request.address + i)] = request.registers[i];
        resp.address = request.address;
        resp.count = request.count;
        return resp;
    }

    case FunctionCode::write_multiple_coils: {
        if (request.count < 1 || request.count > max_write_bits ||
            request.coils.size() != request.count)
            return make_exception(fc, ExceptionCode::illegal_data_value);
        for (std::uint32_t a = request.address; a < request.address + std::uint32_t(request.count); ++a)
            if (a > 0xffff || !coils_.count(static_cast<std::uint16_t>(a)))
                return illegal_address();
        for (std::size_t i = 0; i < request.count; ++i)
            coils_[static_cast<std::uint16_t>(request.address + i)] = request.coils[i];
        resp.address = request.address;
        resp.count = request.count;
        return resp;
    }
    }
    return make_exception(fc, ExceptionCode::illegal_function);
}

} // namespace icsim::modbus
