#ifndef ICSIM_MODBUS_CLIENT_HPP
#define ICSIM_MODBUS_CLIENT_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "icsim/modbus/frame.hpp"
#include "icsim/modbus/register_bank.hpp"
#include "icsim/modbus/tcp.hpp"

namespace icsim::modbus {

// Single-connection Modbus TCP client. Transactions are serial by default;
// send()/receive() allow pipelining, with responses matched by transaction id
// regardless of arrival order.
class ModbusTcpClient {
public:
    ModbusTcpClient(std::string host, std::uint16_t port,
                    std::chrono::milliseconds timeout = std::chrono::milliseconds(1000));

    std::uint16_t send(const Pdu& request, std::uint8_t unit_id = 1);
    Pdu receive(std::uint16_t transaction_id);

    // One request, one matched response.
    Pdu transact(const Pdu& request, std::uint8_t unit_id = 1);

    // Read helpers; throw transport_error / protocol_error / codec_error, and
    // server_exception when the reply is an exception response.
    std::vector<std::uint16_t> read_registers(Table table, std::uint16_t address,
                                              std::uint16_t count);
    std::vector<bool> read_bits(Table table, std::uint16_t address, std::uint16_t count);
    void write_register(std::uint16_t address, std::uint16_t value);
    void write_coil(std::uint16_t address, bool value);
    void write_registers(std::uint16_t address, const std::vector<std::uint16_t>& values);
    void write_coils(std::uint16_t address, const std::vector<bool>& values);

private:
    Pdu expect_ok(const Pdu& response);

    TcpSocket sock_;
    std::chrono::milliseconds timeout_;
    std::uint16_t next_txn_ = 1;
    std::vector<std::uint8_t> buf_;
    std::map<std::uint16_t, Pdu> stashed_; // responses read while waiting for another txn
};

class server_exception : public std::runtime_error {
public:
    server_exception(FunctionCode fc, ExceptionCode code)
        : std::runtime_error(std::string("modbus exception on ") + to_string(fc) + ", code " +
                             std::to_string(static_cast<int>(code))),
          function(fc), code(code)
    {
    }
    FunctionCode function;
    ExceptionCode code;
};

} // namespace icsim::modbus

#endif
