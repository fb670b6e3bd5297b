#ifndef ICSIM_MODBUS_REGISTER_BANK_HPP
#define ICSIM_MODBUS_REGISTER_BANK_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "icsim/modbus/frame.hpp"

namespace icsim::modbus {

enum class Table : std::uint8_t {
    holding_register,
    input_register,
    coil,
    discrete_input,
};

const char* to_string(Table t);
std::optional<Table> table_from_string(const std::string& s);

// Addressed storage of 16-bit registers and 1-bit coils/discrete inputs.
// Only mapped addresses exist; touching anything else yields the
// ILLEGAL DATA ADDRESS exception. Mutations are atomic per request.
class RegisterBank {
public:
    void map_holding(std::uint16_t address, std::uint16_t value = 0);
    void map_input(std::uint16_t address, std::uint16_t value = 0);
    void map_coil(std::uint16_t address, bool value = false);
    void map_discrete(std::uint16_t address, bool value = false);
    void map_range(Table table, std::uint16_t first, std::uint16_t count);

    void set_register(Table table, std::uint16_t address, std::uint16_t value);
    void set_bit(Table table, std::uint16_t address, bool value);
    std::uint16_t register_at(Table table, std::uint16_t address) const;
    bool bit_at(Table table, std::uint16_t address) const;

    // Serves one request PDU: reads return current values, writes mutate the
    // bank and echo per the protocol. The whole call holds the bank lock, so
    // no torn multi-register write is ever observable.
    Pdu execute(const Pdu& request);

private:
    Pdu execute_locked(const Pdu& request);

    mutable std::mutex mutex_;
    std::map<std::uint16_t, std::uint16_t> holding_;
    std::map<std::uint16_t, std::uint16_t> input_;
    std::map<std::uint16_t, bool> coils_;
    std::map<std::uint16_t, bool> discrete_;
};

// Convenience used by module-level code and tests.
inline Pdu execute_request(RegisterBank& bank, const Pdu& request) { return bank.execute(request); }

Pdu make_exception(FunctionCode fc, ExceptionCode code);

} // namespace icsim::modbus

#endif
