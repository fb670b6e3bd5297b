#include "icsim/modbus/frame.hpp"

#include <algorithm>

namespace icsim::modbus {

namespace {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t off)
{
    return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}

[[noreturn]] void encode_fail(const std::string& what)
{
    throw std::invalid_argument("encode_adu: " + what);
}

void check_read_request(const Pdu& pdu)
{
    const std::uint16_t limit = pdu.is_bit_function() ? max_read_bits : max_read_registers;
    if (pdu.count < 1 || pdu.count > limit)
        encode_fail("read count out of range: " + std::to_string(pdu.count));
}

void encode_pdu(std::vector<std::uint8_t>& out, const Pdu& pdu)
{
    if (pdu.is_exception) {
        if (pdu.direction != PduDirection::response)
            encode_fail("exception pdu must be a response");
        put_u8(out, static_cast<std::uint8_t>(static_cast<std::uint8_t>(pdu.function) | 0x80));
        put_u8(out, static_cast<std::uint8_t>(pdu.exception));
        return;
    }

    put_u8(out, static_cast<std::uint8_t>(pdu.function));
    const bool request = pdu.direction == PduDirection::request;

    switch (pdu.function) {
    case FunctionCode::read_coils:
    case FunctionCode::read_discrete_inputs:
        if (request) {
            check_read_request(pdu);
            put_u16(out, pdu.address);
            put_u16(out, pdu.count);
        } else {
            const auto packed = pack_bits(pdu.coils);
            if (packed.empty() || packed.size() > 0xff)
                encode_fail("bit response payload out of range");
            put_u8(out, static_cast<std::uint8_t>(packed.size()));
            out.insert(out.end(), packed.begin(), packed.end());
        }
        break;

    case FunctionCode::read_holding_registers:
    case FunctionCode::read_input_registers:
        if (request) {
            check_read_request(pdu);
            put_u16(out, pdu.address);
            put_u16(out, pdu.count);
        } else {
            if (pdu.registers.empty() || pdu.registers.size() > max_read_registers)
                encode_fail("register response payload out of range");
            put_u8(out, static_cast<std::uint8_t>(2 * pdu.registers.size()));
            for (auto r : pdu.registers)
                put_u16(out, r);
        }
        break;

    case FunctionCode::write_single_coil:
        if (pdu.coils.size() != 1)
            encode_fail("write-single-coil needs exactly one bit");
        put_u16(out, pdu.address);
        put_u16(out, pdu.coils[0] ? single_coil_on : single_coil_off);
        break;

    case FunctionCode::write_single_register:
        if (pdu.registers.size() != 1)
            encode_fail("write-single-register needs exactly one value");
        put_u16(out, pdu.address);
        put_u16(out, pdu.registers[0]);
        break;

    case FunctionCode::write_multiple_coils:
        if (request) {
            if (pdu.coils.size() != pdu.count)
                encode_fail("coil count does not match payload");
            if (pdu.count < 1 || pdu.count > max_write_bits)
                encode_fail("write coil count out of range: " + std::to_string(pdu.count));
            put_u16(out, pdu.address);
            put_u16(out, pdu.count);
            const auto packed = pack_bits(pdu.coils);
            put_u8(out, static_cast<std::uint8_t>(packed.size()));
            out.insert(out.end(), packed.begin(), packed.end());
        } else {
            put_u16(out, pdu.address);
            put_u16(out, pdu.count);
        }
        break;

    case FunctionCode::write_multiple_registers:
        if (request) {
            if (pdu.registers.size() != pdu.count)
                encode_fail("register count does not match payload");
            if (pdu.count < 1 || pdu.count > max_write_registers)
                encode_fail("write register count out of range: " + std::to_string(pdu.count));
            put_u16(out, pdu.address);
            put_u16(out, pdu.count);
            put_u8(out, static_cast<std::uint8_t>(2 * pdu.count));
            for (auto r : pdu.registers)
                put_u16(out, r);
        } else {
            put_u16(out, pdu.address);
            put_u16(out, pdu.count);
        }
        break;
    }
}

Pdu decode_pdu(std::span<const std::uint8_t> body, PduDirection direction,
               std::span<const std::uint8_t> whole_frame)
{
    auto fail = [&](const std::string& what) -> void {
        throw codec_error("decode_adu: " + what,
                          std::vector<std::uint8_t>(whole_frame.begin(), whole_frame.end()));
    };
    auto expect_size = [&](std::size_t want) {
        if (body.size() != want)
            fail("pdu size " + std::to_string(body.size()) + ", expected " + std::to_string(want));
    };

    if (body.empty())
        fail("empty pdu");

    Pdu pdu;
    pdu.direction = direction;
    const std::uint8_t raw_fc = body[0];

    if (raw_fc & 0x80) {
        if (direction != PduDirection::response)
            fail("exception function code in a request");
        if (!is_supported_function(raw_fc & 0x7f))
            fail("unknown function code " + std::to_string(raw_fc));
        expect_size(2);
        pdu.function = static_cast<FunctionCode>(raw_fc & 0x7f);
        pdu.is_exception = true;
        pdu.exception = static_cast<ExceptionCode>(body[1]);
        return pdu;
    }

    if (!is_supported_function(raw_fc))
        fail("unknown function code " + std::to_string(raw_fc));
    pdu.function = static_cast<FunctionCode>(raw_fc);
    const bool request = direction == PduDirection::request;

    switch (pdu.function) {
    case FunctionCode::read_coils:
    case FunctionCode::read_discrete_inputs:
    case FunctionCode::read_holding_registers:
    case FunctionCode::read_input_registers:
        if (request) {
            expect_size(5);
            pdu.address = get_u16(body, 1);
            pdu.count = get_u16(body, 3);
            const std::uint16_t limit = pdu.is_bit_function() ? max_read_bits : max_read_registers;
            if (pdu.count < 1 || pdu.count > limit)
                fail("read count out of range");
        } else {
            if (body.size() < 2)
                fail("truncated read response");
            const std::uint8_t byte_count = body[1];
            expect_size(2 + static_cast<std::size_t>(byte_count));
            if (pdu.is_bit_function()) {
                pdu.coils = unpack_bits(body.subspan(2), static_cast<std::size_t>(byte_count) * 8);
            } else {
                if (byte_count % 2 != 0 || byte_count == 0)
                    fail("odd register byte count");
                for (std::size_t i = 0; i < byte_count / 2u; ++i)
                    pdu.registers.push_back(get_u16(body, 2 + 2 * i));
            }
        }
        break;

    case FunctionCode::write_single_coil: {
        expect_size(5);
        pdu.address = get_u16(body, 1);
        const std::uint16_t v = get_u16(body, 3);
        if (v != single_coil_on && v != single_coil_off)
            fail("invalid single-coil value");
        pdu.coils = {v == single_coil_on};
        break;
    }

    case FunctionCode::write_single_register:
        expect_size(5);
        pdu.address = get_u16(body, 1);
        pdu.registers = {get_u16(body, 3)};
        break;

    case FunctionCode::write_multiple_coils:
        if (request) {
            if (body.size() < 6)
                fail("truncated write-multiple-coils");
            pdu.address = get_u16(body, 1);
            pdu.count = get_u16(body, 3);
            const std::uint8_t byte_count = body[5];
            if (pdu.count < 1 || pdu.count > max_write_bits)
                fail("write coil count out of range");
            if (byte_count != (pdu.count + 7) / 8)
                fail("coil byte count inconsistent with count");
            expect_size(6 + static_cast<std::size_t>(byte_count));
            pdu.coils = unpack_bits(body.subspan(6), pdu.count);
        } else {
            expect_size(5);
            pdu.address = get_u16(body, 1);
            pdu.count = get_u16(body, 3);
        }
        break;

    case FunctionCode::write_multiple_registers:
        if (request) {
            if (body.size() < 6)
                fail("truncated write-multiple-registers");
            pdu.address = get_u16(body, 1);
            pdu.count = get_u16(body, 3);
            const std::uint8_t byte_count = body[5];
            if (pdu.count < 1 || pdu.count > max_write_registers)
                fail("write register count out of range");
            if (byte_count != 2 * pdu.count)
                fail("register byte count inconsistent with count");
            expect_size(6 + static_cast<std::size_t>(byte_count));
            for (std::size_t i = 0; i < pdu.count; ++i)
                pdu.registers.push_back(get_u16(body, 6 + 2 * i));
        } else {
            expect_size(5);
            pdu.address = get_u16(body, 1);
            pdu.count = get_u16(body, 3);
        }
        break;
    }
    return pdu;
}

} // namespace

bool is_supported_function(std::uint8_t fc)
{
    switch (fc) {
    case 0x01:
    case 0x02:
    case 0x03:
    case 0x04:
    case 0x05:
    case 0x06:
    case 0x0f:
    case 0x10:
        return true;
    default:
        return false;
    }
}

const char* to_string(FunctionCode fc)
{
    switch (fc) {
    case FunctionCode::read_coils: return "read_coils";
    case FunctionCode::read_discrete_inputs: return "read_discrete_inputs";
    case FunctionCode::read_holding_registers: return "read_holding_registers";
    case FunctionCode::read_input_registers: return "read_input_registers";
    case FunctionCode::write_single_coil: return "write_single_coil";
    case FunctionCode::write_single_register: return "write_single_register";
    case FunctionCode::write_multiple_coils: return "write_multiple_coils";
    case FunctionCode::write_multiple_registers: return "write_multiple_registers";
    }
    return "unknown";
}

std::vector<std::uint8_t> pack_bits(const std::vector<bool>& bits)
{
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i])
            out[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    return out;
}

std::vector<bool> unpack_bits(std::span<const std::uint8_t> bytes, std::size_t bit_count)
{
    std::vector<bool> out(bit_count, false);
    for (std::size_t i = 0; i < bit_count && i / 8 < bytes.size(); ++i)
        out[i] = (bytes[i / 8] >> (i % 8)) & 1u;
    return out;
}

std::vector<std::uint8_t> encode_adu(const MbapHeader& header, const Pdu& pdu)
{
    if (header.protocol_id != 0)
        throw std::invalid_argument("encode_adu: protocol id must be 0");

    std::vector<std::uint8_t> pdu_bytes;
    encode_pdu(pdu_bytes, pdu);
    if (pdu_bytes.size() > max_pdu_size)
        throw std::invalid_argument("encode_adu: pdu exceeds 253 bytes");

    std::vector<std::uint8_t> out;
    out.reserve(mbap_header_size + pdu_bytes.size());
    put_u16(out, header.transaction_id);
    put_u16(out, 0);
    put_u16(out, static_cast<std::uint16_t>(pdu_bytes.size() + 1));
    put_u8(out, header.unit_id);
    out.insert(out.end(), pdu_bytes.begin(), pdu_bytes.end());
    return out;
}

DecodeOutcome decode_some(std::span<const std::uint8_t> bytes, PduDirection direction)
{
    if (bytes.size() < mbap_header_size)
        return NeedMoreBytes{mbap_header_size - bytes.size()};

    MbapHeader header;
    header.transaction_id = get_u16(bytes, 0);
    header.protocol_id = get_u16(bytes, 2);
    header.length = get_u16(bytes, 4);
    header.unit_id = bytes[6];

    if (header.protocol_id != 0)
        throw protocol_error("decode_adu: protocol id " + std::to_string(header.protocol_id),
                             std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
    if (header.length < 2 || header.length > max_pdu_size + 1)
        throw codec_error("decode_adu: mbap length out of range",
                          std::vector<std::uint8_t>(bytes.begin(), bytes.end()));

    const std::size_t total = 6 + static_cast<std::size_t>(header.length);
    if (bytes.size() < total)
        return NeedMoreBytes{total - bytes.size()};

    Adu adu;
    adu.header = header;
    adu.pdu = decode_pdu(bytes.subspan(mbap_header_size, header.length - 1), direction,
                         bytes.first(total));
    return adu;
}

Adu decode_adu(std::span<const std::uint8_t> bytes, PduDirection direction)
{
    auto outcome = decode_some(bytes, direction);
    if (auto* need = std::get_if<NeedMoreBytes>(&outcome))
        throw codec_error("decode_adu: frame truncated, need " + std::to_string(need->deficit) +
                          " more bytes",
                          std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
    auto adu = std::get<Adu>(outcome);
    const std::size_t total = 6 + static_cast<std::size_t>(adu.header.length);
    if (bytes.size() != total)
        throw codec_error("decode_adu: trailing bytes after frame",
                          std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
    return adu;
}

std::string to_hex(std::span<const std::uint8_t> bytes)
{
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

} // namespace icsim::modbus
