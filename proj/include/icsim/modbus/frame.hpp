#ifndef ICSIM_MODBUS_FRAME_HPP
#define ICSIM_MODBUS_FRAME_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace icsim::modbus {

constexpr std::size_t mbap_header_size = 7;
constexpr std::size_t max_pdu_size = 253;
constexpr std::size_t max_adu_size = mbap_header_size + max_pdu_size;

// Modbus_Application_Protocol_V1_1b3, sections 6.1-6.12.
constexpr std::uint16_t max_read_bits = 2000;
constexpr std::uint16_t max_read_registers = 125;
constexpr std::uint16_t max_write_bits = 1968;
constexpr std::uint16_t max_write_registers = 123;

constexpr std::uint16_t single_coil_on = 0xff00;
constexpr std::uint16_t single_coil_off = 0x0000;

enum class FunctionCode : std::uint8_t {
    read_coils = 0x01,
    read_discrete_inputs = 0x02,
    read_holding_registers = 0x03,
    read_input_registers = 0x04,
    write_single_coil = 0x05,
    write_single_register = 0x06,
    write_multiple_coils = 0x0f,
    write_multiple_registers = 0x10,
};

enum class ExceptionCode : std::uint8_t {
    illegal_function = 0x01,
    illegal_data_address = 0x02,
    illegal_data_value = 0x03,
    server_device_failure = 0x04,
};

// A PDU is decoded relative to its direction: the same function code
// carries different payloads in a request and a response.
enum class PduDirection : std::uint8_t { request, response };

bool is_supported_function(std::uint8_t fc);
const char* to_string(FunctionCode fc);

struct MbapHeader {
    std::uint16_t transaction_id = 0;
    std::uint16_t protocol_id = 0;
    std::uint16_t length = 0; // bytes following, including unit id
    std::uint8_t unit_id = 0;
};

struct Pdu {
    FunctionCode function = FunctionCode::read_holding_registers;
    PduDirection direction = PduDirection::request;
    bool is_exception = false;
    ExceptionCode exception = ExceptionCode::illegal_function;

    std::uint16_t address = 0;           // start address
    std::uint16_t count = 0;             // read requests, write-multiple
    std::vector<std::uint16_t> registers; // register payload
    std::vector<bool> coils;              // bit payload, lowest address first

    bool is_read() const
    {
        return function == FunctionCode::read_coils ||
               function == FunctionCode::read_discrete_inputs ||
               function == FunctionCode::read_holding_registers ||
               function == FunctionCode::read_input_registers;
    }
    bool is_bit_function() const
    {
        return function == FunctionCode::read_coils ||
               function == FunctionCode::read_discrete_inputs ||
               function == FunctionCode::write_single_coil ||
               function == FunctionCode::write_multiple_coils;
    }
    bool is_write() const { return !is_read(); }

    bool operator==(const Pdu&) const = default;
};

struct Adu {
    MbapHeader header;
    Pdu pdu;
};

inline bool operator==(const MbapHeader& a, const MbapHeader& b)
{
    return a.transaction_id == b.transaction_id && a.protocol_id == b.protocol_id &&
           a.length == b.length && a.unit_id == b.unit_id;
}
inline bool operator==(const Adu& a, const Adu& b)
{
    return a.header == b.header && a.pdu == b.pdu;
}

// Decode failure; keeps the offending bytes for diagnostics.
class codec_error : public std::runtime_error {
public:
    explicit codec_error(const std::string& what, std::vector<std::uint8_t> raw = {})
        : std::runtime_error(what), raw_(std::move(raw))
    {
    }
    const std::vector<std::uint8_t>& raw_bytes() const { return raw_; }

private:
    std::vector<std::uint8_t> raw_;
};

// MBAP protocol id != 0 or a transaction-id mismatch.
class protocol_error : public codec_error {
public:
    using codec_error::codec_error;
};

struct NeedMoreBytes {
    std::size_t deficit = 0; // exact bytes missing before the next decode step
};

using DecodeOutcome = std::variant<Adu, NeedMoreBytes>;

// Serializes header + pdu big-endian; the header length field is recomputed
// so it is always consistent with the encoded PDU.
std::vector<std::uint8_t> encode_adu(const MbapHeader& header, const Pdu& pdu);

// Incremental decoder for stream readers: either one full ADU or the exact
// byte deficit (header first, then the length-field remainder).
DecodeOutcome decode_some(std::span<const std::uint8_t> bytes, PduDirection direction);

// Strict decode of exactly one frame.
Adu decode_adu(std::span<const std::uint8_t> bytes, PduDirection direction);

// Bit packing per section 6.11: lowest address in the least significant bit.
std::vector<std::uint8_t> pack_bits(const std::vector<bool>& bits);
std::vector<bool> unpack_bits(std::span<const std::uint8_t> bytes, std::size_t bit_count);

std::string to_hex(std::span<const std::uint8_t> bytes);

} // namespace icsim::modbus

#endif
