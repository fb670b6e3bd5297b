#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "icsim/modbus/register_bank.hpp"

using namespace icsim::modbus;

namespace {

Pdu read_req(FunctionCode fc, std::uint16_t addr, std::uint16_t count)
{
    Pdu p;
    p.function = fc;
    p.direction = PduDirection::request;
    p.address = addr;
    p.count = count;
    return p;
}

} // namespace

TEST_CASE("reads return current bank values")
{
    RegisterBank bank;
    bank.map_holding(0, 500);
    bank.map_holding(1, 65535);

    const Pdu resp = bank.execute(read_req(FunctionCode::read_holding_registers, 0, 2));
    CHECK(!resp.is_exception);
    CHECK(resp.registers == std::vector<std::uint16_t>{500, 65535});
    // Serialized response carries byte count 4.
    const auto wire = encode_adu(MbapHeader{}, resp);
    CHECK(wire[8] == 4);
}

TEST_CASE("write then read returns the written value")
{
    RegisterBank bank;
    bank.map_holding(5, 0);

    Pdu w;
    w.function = FunctionCode::write_single_register;
    w.direction = PduDirection::request;
    w.address = 5;
    w.registers = {12345};
    const Pdu echo = bank.execute(w);
    CHECK(!echo.is_exception);
    CHECK(echo.address == 5);
    CHECK(echo.registers == std::vector<std::uint16_t>{12345});

    const Pdu resp = bank.execute(read_req(FunctionCode::read_holding_registers, 5, 1));
    CHECK(resp.registers == std::vector<std::uint16_t>{12345});
}

TEST_CASE("unmapped address raises ILLEGAL DATA ADDRESS")
{
    RegisterBank bank;
    bank.map_holding(0, 1);

    const Pdu resp = bank.execute(read_req(FunctionCode::read_holding_registers, 99, 1));
    CHECK(resp.is_exception);
    CHECK(resp.function == FunctionCode::read_holding_registers);
    CHECK(resp.exception == ExceptionCode::illegal_data_address);

    // Hand-built exception frame: fc | 0x80 = 0x83, code 0x02.
    MbapHeader h;
    h.transaction_id = 5;
    h.unit_id = 1;
    const auto wire = encode_adu(h, resp);
    const std::vector<std::uint8_t> want = {0x00, 0x05, 0x00, 0x00, 0x00,
                                            0x03, 0x01, 0x83, 0x02};
    CHECK(wire == want);
}

TEST_CASE("reads spanning an unmapped hole are rejected whole")
{
    RegisterBank bank;
    bank.map_input(0, 10);
    bank.map_input(2, 30);
    const Pdu resp = bank.execute(read_req(FunctionCode::read_input_registers, 0, 3));
    CHECK(resp.is_exception);
    CHECK(resp.exception == ExceptionCode::illegal_data_address);
}

TEST_CASE("bad values raise ILLEGAL DATA VALUE")
{
    RegisterBank bank;
    bank.map_coil(0);
    bank.map_coil(1);

    Pdu w;
    w.function = FunctionCode::write_multiple_coils;
    w.direction = PduDirection::request;
    w.address = 0;
    w.count = 0; // invalid
    const Pdu resp = bank.execute(w);
    CHECK(resp.is_exception);
    CHECK(resp.exception == ExceptionCode::illegal_data_value);
}

TEST_CASE("multi-coil response packs bits LSB-first and pads")
{
    RegisterBank bank;
    for (std::uint16_t i = 0; i < 10; ++i)
        bank.map_coil(i, i == 0 || i == 2 || i == 9);

    const Pdu resp = bank.execute(read_req(FunctionCode::read_coils, 0, 10));
    REQUIRE(resp.coils.size() == 16); // padded to whole bytes
    const auto wire = encode_adu(MbapHeader{}, resp);
    CHECK(wire[8] == 2);    // byte count
    CHECK(wire[9] == 0x05); // bits 0 and 2
    CHECK(wire[10] == 0x02); // bit 9 -> second byte bit 1
}

TEST_CASE("multi-register write mutates atomically and echoes address+count")
{
    RegisterBank bank;
    bank.map_range(Table::holding_register, 10, 3);

    Pdu w;
    w.function = FunctionCode::write_multiple_registers;
    w.direction = PduDirection::request;
    w.address = 10;
    w.count = 3;
    w.registers = {7, 8, 9};
    const Pdu resp = bank.execute(w);
    CHECK(!resp.is_exception);
    CHECK(resp.address == 10);
    CHECK(resp.count == 3);
    CHECK(bank.register_at(Table::holding_register, 12) == 9);

    // Out-of-range tail: nothing may be written.
    w.address = 11;
    const Pdu fail = bank.execute(w);
    CHECK(fail.is_exception);
    CHECK(bank.register_at(Table::holding_register, 11) == 8);
}

TEST_CASE("server determinism and exception discipline over random requests")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> u16(0, 65535);
    std::uniform_int_distribution<int> small(0, 30);
    std::uniform_int_distribution<int> fc_pick(0, 7);
    static const FunctionCode codes[] = {
        FunctionCode::read_coils,          FunctionCode::read_discrete_inputs,
        FunctionCode::read_holding_registers, FunctionCode::read_input_registers,
        FunctionCode::write_single_coil,   FunctionCode::write_single_register,
        FunctionCode::write_multiple_coils, FunctionCode::write_multiple_registers,
    };

    for (int round = 0; round < 500; ++round) {
        RegisterBank a, b;
        for (int i = 0; i < 8; ++i) {
            const auto addr = static_cast<std::uint16_t>(small(rng));
            const auto value = static_cast<std::uint16_t>(u16(rng));
            a.map_holding(addr, value);
            b.map_holding(addr, value);
            a.map_input(addr, value);
            b.map_input(addr, value);
            a.map_coil(addr, value & 1);
            b.map_coil(addr, value & 1);
            a.map_discrete(addr, value & 2);
            b.map_discrete(addr, value & 2);
        }

        Pdu req;
        req.function = codes[fc_pick(rng)];
        req.direction = PduDirection::request;
        req.address = static_cast<std::uint16_t>(small(rng));
        switch (req.function) {
        case FunctionCode::write_single_coil: req.coils = {bool(u16(rng) & 1)}; break;
        case FunctionCode::write_single_register:
            req.registers = {static_cast<std::uint16_t>(u16(rng))};
            break;
        case FunctionCode::write_multiple_coils:
            req.count = static_cast<std::uint16_t>(1 + small(rng));
            req.coils.assign(req.count, true);
            break;
        case FunctionCode::write_multiple_registers:
            req.count = static_cast<std::uint16_t>(1 + small(rng) % 5);
            req.registers.assign(req.count, static_cast<std::uint16_t>(u16(rng)));
            break;
        default: req.count = static_cast<std::uint16_t>(1 + small(rng)); break;
        }

        const Pdu ra = a.execute(req);
        const Pdu rb = b.execute(req);
        // Identical (bank, request) pairs give byte-identical responses.
        CHECK(encode_adu(MbapHeader{}, ra) == encode_adu(MbapHeader{}, rb));
        // Response function code is the request's, exception bit aside.
        CHECK(ra.function == req.function);
    }
}
