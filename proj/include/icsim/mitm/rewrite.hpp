#ifndef ICSIM_MITM_REWRITE_HPP
#define ICSIM_MITM_REWRITE_HPP

#include <optional>
#include <span>
#include <vector>

#include "icsim/mitm/scenario.hpp"
#include "icsim/modbus/frame.hpp"

namespace icsim::mitm {

// Addressing context for a frame in flight. Read responses carry no address
// on the wire, so the proxy resolves it from the pending request.
struct FrameContext {
    Direction direction = Direction::plc_to_plant;
    std::optional<modbus::Table> response_table;
    std::uint16_t response_address = 0;
    std::uint16_t response_count = 0;
};

struct RewriteRecord {
    double t = 0.0;
    Direction direction = Direction::plc_to_plant;
    modbus::Table table = modbus::Table::input_register;
    std::uint16_t address = 0;
    std::uint32_t before = 0;
    std::uint32_t after = 0;
};

// Applies every active matching rule to the decoded frame; returns the
// rewritten unit and whether anything changed. Transaction id, function code
// and payload shape are preserved; untouched values pass through verbatim.
std::pair<modbus::Adu, bool> apply_rules(const modbus::Adu& adu, const FrameContext& ctx,
                                         std::span<const SpoofRule> rules, double t,
                                         std::vector<RewriteRecord>* log = nullptr);

// Table a request addresses on the upstream server (for pending-request
// tracking); nullopt for non-read functions.
std::optional<modbus::Table> read_request_table(const modbus::Pdu& request);

} // namespace icsim::mitm

#endif
