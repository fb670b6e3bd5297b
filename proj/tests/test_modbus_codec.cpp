#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "icsim/modbus/frame.hpp"
#include "icsim/modbus/register_bank.hpp"

using namespace icsim::modbus;

namespace {

std::vector<std::uint8_t> bytes(std::initializer_list<unsigned> v)
{
    std::vector<std::uint8_t> out;
    for (unsigned b : v)
        out.push_back(static_cast<std::uint8_t>(b));
    return out;
}

MbapHeader header(std::uint16_t txn, std::uint8_t unit)
{
    MbapHeader h;
    h.transaction_id = txn;
    h.unit_id = unit;
    return h;
}

Pdu read_request(FunctionCode fc, std::uint16_t addr, std::uint16_t count)
{
    Pdu p;
    p.function = fc;
    p.direction = PduDirection::request;
    p.address = addr;
    p.count = count;
    return p;
}

// Reference frames hand-assembled from the Modbus Application Protocol
// V1.1b framing rules (MBAP + PDU, big-endian, bits packed LSB-first).
struct ReferenceFrame {
    const char* name;
    std::vector<std::uint8_t> wire;
    MbapHeader head;
    Pdu pdu;
};

std::vector<ReferenceFrame> reference_frames()
{
    std::vector<ReferenceFrame> frames;

    frames.push_back({"read holding request",
                      bytes({0x00, 0x01, 0x00, 0x00, 0x00, 0x06, 0x01, 0x03, 0x00, 0x00, 0x00, 0x02}),
                      header(1, 1), read_request(FunctionCode::read_holding_registers, 0, 2)});

    {
        Pdu p;
        p.function = FunctionCode::write_single_register;
        p.direction = PduDirection::request;
        p.address = 0;
        p.registers = {0};
        frames.push_back({"write single register, all zero",
                          bytes({0x00, 0x00, 0x00, 0x00, 0x00, 0x06, 0x00, 0x06, 0x00, 0x00, 0x00, 0x00}),
                          header(0, 0), p});
    }
    {
        Pdu p;
        p.function = FunctionCode::write_single_coil;
        p.direction = PduDirection::request;
        p.address = 3;
        p.coils = {true};
        frames.push_back({"write single coil ON",
                          bytes({0x00, 0x07, 0x00, 0x00, 0x00, 0x06, 0x01, 0x05, 0x00, 0x03, 0xFF, 0x00}),
                          header(7, 1), p});
    }
    {
        Pdu p;
        p.function = FunctionCode::write_single_coil;
        p.direction = PduDirection::response;
        p.address = 3;
        p.coils = {false};
        frames.push_back({"write single coil OFF response",
                          bytes({0x00, 0x07, 0x00, 0x00, 0x00, 0x06, 0x01, 0x05, 0x00, 0x03, 0x00, 0x00}),
                          header(7, 1), p});
    }
    frames.push_back({"read coils request",
                      bytes({0x00, 0x02, 0x00, 0x00, 0x00, 0x06, 0x03, 0x01, 0x00, 0x13, 0x00, 0x13}),
                      header(2, 3), read_request(FunctionCode::read_coils, 19, 19)});
    frames.push_back({"read discrete inputs request",
                      bytes({0x01, 0x02, 0x00, 0x00, 0x00, 0x06, 0x09, 0x02, 0x00, 0xC4, 0x00, 0x16}),
                      header(0x0102, 9), read_request(FunctionCode::read_discrete_inputs, 0xC4, 0x16)});
    frames.push_back({"read input registers request",
                      bytes({0xFF, 0xFF, 0x00, 0x00, 0x00, 0x06, 0xFF, 0x04, 0x00, 0x08, 0x00, 0x01}),
                      header(0xFFFF, 0xFF), read_request(FunctionCode::read_input_registers, 8, 1)});
    {
        Pdu p;
        p.function = FunctionCode::write_multiple_registers;
        p.direction = PduDirection::request;
        p.address = 1;
        p.count = 2;
        p.registers = {0x000A, 0x0102};
        frames.push_back({"write multiple registers request",
                          bytes({0x00, 0x10, 0x00, 0x00, 0x00, 0x0B, 0x01, 0x10, 0x00, 0x01, 0x00,
                                 0x02, 0x04, 0x00, 0x0A, 0x01, 0x02}),
                          header(0x10, 1), p});
    }
    {
        Pdu p;
        p.function = FunctionCode::write_multiple_coils;
        p.direction = PduDirection::request;
        p.address = 19;
        p.count = 10;
        p.coils = {true, false, true, true, false, false, true, true, true, false};
        frames.push_back({"write multiple coils request",
                          bytes({0x00, 0x00, 0x00, 0x00, 0x00, 0x09, 0x01, 0x0F, 0x00, 0x13, 0x00,
                                 0x0A, 0x02, 0xCD, 0x01}),
                          header(0, 1), p});
    }
    {
        Pdu p;
        p.function = FunctionCode::read_holding_registers;
        p.direction = PduDirection::response;
        p.registers = {500, 65535};
        frames.push_back({"read holding response",
                          bytes({0x00, 0x01, 0x00, 0x00, 0x00, 0x07, 0x01, 0x03, 0x04, 0x01, 0xF4,
                                 0xFF, 0xFF}),
                          header(1, 1), p});
    }
    {
        Pdu p;
        p.function = FunctionCode::read_coils;
        p.direction = PduDirection::response;
        p.coils = {true, false, true, false, false, false, false, false};
        frames.push_back({"read coils response",
                          bytes({0x00, 0x02, 0x00, 0x00, 0x00, 0x04, 0x03, 0x01, 0x01, 0x05}),
                          header(2, 3), p});
    }
    {
        Pdu p;
        p.function = FunctionCode::read_input_registers;
        p.direction = PduDirection::response;
        p.registers = {0xABCD};
        frames.push_back({"read input response",
                          bytes({0xFF, 0xFF, 0x00, 0x00, 0x00, 0x05, 0xFF, 0x04, 0x02, 0xAB, 0xCD}),
                          header(0xFFFF, 0xFF), p});
    }
    {
        Pdu p = make_exception(FunctionCode::read_holding_registers,
                               ExceptionCode::illegal_data_address);
        frames.push_back({"illegal data address exception",
                          bytes({0x00, 0x05, 0x00, 0x00, 0x00, 0x03, 0x01, 0x83, 0x02}),
                          header(5, 1), p});
    }
    {
        Pdu p;
        p.function = FunctionCode::write_multiple_registers;
        p.direction = PduDirection::response;
        p.address = 1;
        p.count = 2;
        frames.push_back({"write multiple registers response",
                          bytes({0x00, 0x10, 0x00, 0x00, 0x00, 0x06, 0x01, 0x10, 0x00, 0x01, 0x00, 0x02}),
                          header(0x10, 1), p});
    }
    return frames;
}

} // namespace

TEST_CASE("hand-assembled reference frames encode byte-exact")
{
    const auto frames = reference_frames();
    CHECK(frames.size() >= 12);
    for (const auto& f : frames) {
        INFO(f.name);
        CHECK(encode_adu(f.head, f.pdu) == f.wire);
    }
}

TEST_CASE("hand-assembled reference frames decode to the same unit")
{
    for (const auto& f : reference_frames()) {
        INFO(f.name);
        const Adu adu = decode_adu(f.wire, f.pdu.direction);
        CHECK(adu.header.transaction_id == f.head.transaction_id);
        CHECK(adu.header.unit_id == f.head.unit_id);
        CHECK(adu.header.protocol_id == 0);
        CHECK(adu.header.length == f.wire.size() - 6);
        // Decoded read-coil payloads carry the wire's pad bits.
        Pdu want = f.pdu;
        if (want.is_read() && want.is_bit_function() && want.direction == PduDirection::response)
            want.coils.resize(((want.coils.size() + 7) / 8) * 8, false);
        CHECK(adu.pdu == want);
    }
}

namespace {

Pdu random_pdu(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> fc_pick(0, 7);
    std::uniform_int_distribution<int> dir_pick(0, 1);
    std::uniform_int_distribution<int> u16(0, 65535);
    std::uniform_int_distribution<int> per_mille(0, 999);

    static const FunctionCode codes[] = {
        FunctionCode::read_coils,          FunctionCode::read_discrete_inputs,
        FunctionCode::read_holding_registers, FunctionCode::read_input_registers,
        FunctionCode::write_single_coil,   FunctionCode::write_single_register,
        FunctionCode::write_multiple_coils, FunctionCode::write_multiple_registers,
    };

    Pdu p;
    p.function = codes[fc_pick(rng)];
    p.direction = static_cast<PduDirection>(dir_pick(rng));

    // A slice of traffic is exception responses.
    if (p.direction == PduDirection::response && per_mille(rng) < 100) {
        p.is_exception = true;
        p.exception = static_cast<ExceptionCode>(1 + per_mille(rng) % 4);
        return p;
    }

    auto rand_bits = [&](std::size_t count) {
        std::vector<bool> bits(count);
        for (auto&& b : bits)
            b = per_mille(rng) < 500;
        return bits;
    };
    auto rand_regs = [&](std::size_t count) {
        std::vector<std::uint16_t> regs(count);
        for (auto& r : regs)
            r = static_cast<std::uint16_t>(u16(rng));
        return regs;
    };

    const bool request = p.direction == PduDirection::request;
    switch (p.function) {
    case FunctionCode::read_coils:
    case FunctionCode::read_discrete_inputs:
        if (request) {
            p.address = static_cast<std::uint16_t>(u16(rng));
            p.count = static_cast<std::uint16_t>(1 + u16(rng) % max_read_bits);
        } else {
            p.coils = rand_bits(8 * (1 + u16(rng) % 250)); // whole bytes, as served
        }
        break;
    case FunctionCode::read_holding_registers:
    case FunctionCode::read_input_registers:
        if (request) {
            p.address = static_cast<std::uint16_t>(u16(rng));
            p.count = static_cast<std::uint16_t>(1 + u16(rng) % max_read_registers);
        } else {
            p.registers = rand_regs(1 + u16(rng) % max_read_registers);
        }
        break;
    case FunctionCode::write_single_coil:
        p.address = static_cast<std::uint16_t>(u16(rng));
        p.coils = rand_bits(1);
        break;
    case FunctionCode::write_single_register:
        p.address = static_cast<std::uint16_t>(u16(rng));
        p.registers = rand_regs(1);
        break;
    case FunctionCode::write_multiple_coils:
        p.address = static_cast<std::uint16_t>(u16(rng));
        if (request) {
            p.count = static_cast<std::uint16_t>(1 + u16(rng) % max_write_bits);
            p.coils = rand_bits(p.count);
        } else {
            p.count = static_cast<std::uint16_t>(1 + u16(rng) % max_write_bits);
        }
        break;
    case FunctionCode::write_multiple_registers:
        p.address = static_cast<std::uint16_t>(u16(rng));
        if (request) {
            p.count = static_cast<std::uint16_t>(1 + u16(rng) % max_write_registers);
            p.registers = rand_regs(p.count);
        } else {
            p.count = static_cast<std::uint16_t>(1 + u16(rng) % max_write_registers);
        }
        break;
    }
    return p;
}

} // namespace

TEST_CASE("round-trip property over generated frames")
{
    std::mt19937_64 rng(20240811);
    std::uniform_int_distribution<int> u16(0, 65535);
    std::uniform_int_distribution<int> u8(0, 255);

    for (int i = 0; i < 20000; ++i) {
        MbapHeader h = header(static_cast<std::uint16_t>(u16(rng)),
                              static_cast<std::uint8_t>(u8(rng)));
        const Pdu p = random_pdu(rng);
        const auto wire = encode_adu(h, p);
        const Adu back = decode_adu(wire, p.direction);
        REQUIRE(back.pdu == p);
        REQUIRE(back.header.transaction_id == h.transaction_id);
        REQUIRE(back.header.unit_id == h.unit_id);
        // Byte-level inverse as well.
        REQUIRE(encode_adu(back.header, back.pdu) == wire);
    }
}

TEST_CASE("partial frames report the exact byte deficit")
{
    const auto wire = encode_adu(header(1, 1), read_request(FunctionCode::read_holding_registers, 0, 2));
    REQUIRE(wire.size() == 12);

    // First the header...
    auto out = decode_some(std::span(wire.data(), 4), PduDirection::request);
    REQUIRE(std::holds_alternative<NeedMoreBytes>(out));
    CHECK(std::get<NeedMoreBytes>(out).deficit == 3);

    // ...then the length field's worth.
    out = decode_some(std::span(wire.data(), 7), PduDirection::request);
    REQUIRE(std::holds_alternative<NeedMoreBytes>(out));
    CHECK(std::get<NeedMoreBytes>(out).deficit == 5);

    out = decode_some(std::span(wire.data(), 11), PduDirection::request);
    REQUIRE(std::holds_alternative<NeedMoreBytes>(out));
    CHECK(std::get<NeedMoreBytes>(out).deficit == 1);

    out = decode_some(wire, PduDirection::request);
    CHECK(std::holds_alternative<Adu>(out));
}

TEST_CASE("decode errors")
{
    // protocol id != 0
    auto bad = bytes({0x00, 0x01, 0x00, 0x01, 0x00, 0x06, 0x01, 0x03, 0x00, 0x00, 0x00, 0x02});
    CHECK_THROWS_AS(decode_adu(bad, PduDirection::request), protocol_error);

    // unknown function code, raw bytes preserved
    auto unknown = bytes({0x00, 0x01, 0x00, 0x00, 0x00, 0x06, 0x01, 0x07, 0x00, 0x00, 0x00, 0x02});
    try {
        decode_adu(unknown, PduDirection::request);
        FAIL("expected codec_error");
    } catch (const codec_error& e) {
        CHECK(e.raw_bytes() == unknown);
    }

    // invalid single-coil value
    auto badcoil = bytes({0x00, 0x07, 0x00, 0x00, 0x00, 0x06, 0x01, 0x05, 0x00, 0x03, 0xFF, 0xFF});
    CHECK_THROWS_AS(decode_adu(badcoil, PduDirection::request), codec_error);

    // read count out of range
    auto badcount = bytes({0x00, 0x01, 0x00, 0x00, 0x00, 0x06, 0x01, 0x03, 0x00, 0x00, 0x00, 0x7E});
    CHECK_THROWS_AS(decode_adu(badcount, PduDirection::request), codec_error);
}

TEST_CASE("encode rejects malformed pdus")
{
    CHECK_THROWS_AS(encode_adu(header(0, 0), read_request(FunctionCode::read_holding_registers, 0, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        encode_adu(header(0, 0), read_request(FunctionCode::read_holding_registers, 0, 126)),
        std::invalid_argument);
    CHECK_THROWS_AS(encode_adu(header(0, 0), read_request(FunctionCode::read_coils, 0, 2001)),
                    std::invalid_argument);

    Pdu wm;
    wm.function = FunctionCode::write_multiple_registers;
    wm.direction = PduDirection::request;
    wm.count = 3;
    wm.registers = {1, 2}; // payload size mismatch
    CHECK_THROWS_AS(encode_adu(header(0, 0), wm), std::invalid_argument);

    MbapHeader bad_proto = header(0, 0);
    bad_proto.protocol_id = 7;
    CHECK_THROWS_AS(encode_adu(bad_proto, read_request(FunctionCode::read_coils, 0, 1)),
                    std::invalid_argument);
}
