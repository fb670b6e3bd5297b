#include "icsim/modbus/client.hpp"

namespace icsim::modbus {

ModbusTcpClient::ModbusTcpClient(std::string host, std::uint16_t port,
                                 std::chrono::milliseconds timeout)
    : sock_(TcpSocket::connect(host, port, timeout)), timeout_(timeout)
{
}

std::uint16_t ModbusTcpClient::send(const Pdu& request, std::uint8_t unit_id)
{
    MbapHeader h;
    h.transaction_id = next_txn_++;
    h.unit_id = unit_id;
    sock_.send_all(encode_adu(h, request));
    return h.transaction_id;
}

Pdu ModbusTcpClient::receive(std::uint16_t transaction_id)
{
    if (auto it = stashed_.find(transaction_id); it != stashed_.end()) {
        Pdu p = std::move(it->second);
        stashed_.erase(it);
        return p;
    }

    std::uint8_t chunk[512];
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    while (true) {
        while (true) {
            DecodeOutcome outcome = decode_some(buf_, PduDirection::response);
            auto* need = std::get_if<NeedMoreBytes>(&outcome);
            if (need)
                break;
            Adu adu = std::get<Adu>(outcome);
            buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(6 + adu.header.length));
            if (adu.header.transaction_id == transaction_id)
                return adu.pdu;
            stashed_.emplace(adu.header.transaction_id, std::move(adu.pdu));
        }

        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline)
            throw transport_error("transact: timeout waiting for response");
        auto n = sock_.recv_some(
            chunk, std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now));
        if (!n)
            throw transport_error("transact: timeout waiting for response");
        if (*n == 0)
            throw transport_error("transact: connection closed by peer");
        buf_.insert(buf_.end(), chunk, chunk + *n);
    }
}

Pdu ModbusTcpClient::transact(const Pdu& request, std::uint8_t unit_id)
{
    return receive(send(request, unit_id));
}

Pdu ModbusTcpClient::expect_ok(const Pdu& response)
{
    if (response.is_exception)
        throw server_exception(response.function, response.exception);
    return response;
}

std::vector<std::uint16_t> ModbusTcpClient::read_registers(Table table, std::uint16_t address,
                                                           std::uint16_t count)
{
    Pdu req;
    req.function = table == Table::holding_register ? FunctionCode::read_holding_registers
                                                    : FunctionCode::read_input_registers;
    req.address = address;
    req.count = count;
    Pdu resp = expect_ok(transact(req));
    if (resp.registers.size() != count)
        throw protocol_error("read_registers: short response");
    return resp.registers;
}

std::vector<bool> ModbusTcpClient::read_bits(Table table, std::uint16_t address,
                                             std::uint16_t count)
{
    Pdu req;
    req.function =
        table == Table::coil ? FunctionCode::read_coils : FunctionCode::read_discrete_inputs;
    req.address = address;
    req.count = count;
    Pdu resp = expect_ok(transact(req));
    if (resp.coils.size() < count)
        throw protocol_error("read_bits: short response");
    resp.coils.resize(count); // strip pad bits
    return resp.coils;
}

void ModbusTcpClient::write_register(std::uint16_t address, std::uint16_t value)
{
    Pdu req;
    req.function = FunctionCode::write_single_register;
    req.address = address;
    req.registers = {value};
    expect_ok(transact(req));
}

void ModbusTcpClient::write_coil(std::uint16_t address, bool value)
{
    Pdu req;
    req.function = FunctionCode::write_single_coil;
    req.address = address;
    req.coils = {value};
    expect_ok(transact(req));
}

void ModbusTcpClient::write_registers(std::uint16_t address,
                                      const std::vector<std::uint16_t>& values)
{
    Pdu req;
    req.function = FunctionCode::write_multiple_registers;
    req.address = address;
    req.count = static_cast<std::uint16_t>(values.size());
    req.registers = values;
    expect_ok(transact(req));
}

void ModbusTcpClient::write_coils(std::uint16_t address, const std::vector<bool>& values)
{
    Pdu req;
    req.function = FunctionCode::write_multiple_coils;
    req.address = address;
    req.count = static_cast<std::uint16_t>(values.size());
    req.coils = values;
    expect_ok(transact(req));
}

} // namespace icsim::modbus
