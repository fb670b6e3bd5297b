#include "icsim/mitm/rewrite.hpp"

namespace icsim::mitm {

using modbus::FunctionCode;
using modbus::Pdu;
using modbus::Table;

std::optional<Table> read_request_table(const Pdu& request)
{
    switch (request.function) {
    case FunctionCode::read_coils: return Table::coil;
    case FunctionCode::read_discrete_inputs: return Table::discrete_input;
    case FunctionCode::read_holding_registers: return Table::holding_register;
    case FunctionCode::read_input_registers: return Table::input_register;
    default: return std::nullopt;
    }
}

namespace {

// Table a write request mutates on the server.
std::optional<Table> write_request_table(const Pdu& request)
{
    switch (request.function) {
    case FunctionCode::write_single_coil:
    case FunctionCode::write_multiple_coils: return Table::coil;
    case FunctionCode::write_single_register:
    case FunctionCode::write_multiple_registers: return Table::holding_register;
    default: return std::nullopt;
    }
}

struct ValueWindow {
    Table table;
    std::uint16_t first = 0;
    std::uint16_t count = 0;
};

// The addressed values a frame carries, if any.
std::optional<ValueWindow> value_window(const Pdu& pdu, const FrameContext& ctx)
{
    if (pdu.is_exception)
        return std::nullopt;

    if (pdu.direction == modbus::PduDirection::request) {
        const auto table = write_request_table(pdu);
        if (!table)
            return std::nullopt; // read requests carry no values
        const bool single = pdu.function == FunctionCode::write_single_coil ||
                            pdu.function == FunctionCode::write_single_register;
        return ValueWindow{*table, pdu.address,
                           single ? std::uint16_t{1} : pdu.count};
    }

    // Responses: reads carry values located by the pending request; write
    // echoes carry a single value (write-single) or none (write-multiple).
    if (pdu.is_read()) {
        if (!ctx.response_table)
            return std::nullopt;
        return ValueWindow{*ctx.response_table, ctx.response_address, ctx.response_count};
    }
    if (pdu.function == FunctionCode::write_single_coil)
        return ValueWindow{Table::coil, pdu.address, 1};
    if (pdu.function == FunctionCode::write_single_register)
        return ValueWindow{Table::holding_register, pdu.address, 1};
    return std::nullopt;
}

} // namespace

std::pair<modbus::Adu, bool> apply_rules(const modbus::Adu& adu, const FrameContext& ctx,
                                         std::span<const SpoofRule> rules, double t,
                                         std::vector<RewriteRecord>* log)
{
    modbus::Adu out = adu;
    bool changed = false;

    const auto window = value_window(out.pdu, ctx);
    if (!window)
        return {out, false};

    for (const auto& rule : rules) {
        if (rule.direction != ctx.direction || !rule.active_at(t))
            continue;
        if (rule.table != window->table)
            continue;
        if (rule.address < window->first ||
            rule.address >= window->first + window->count)
            continue; // point absent from this frame: the rule waits

        const std::size_t idx = rule.address - window->first;
        RewriteRecord rec;
        rec.t = t;
        rec.direction = rule.direction;
        rec.table = rule.table;
        rec.address = rule.address;

        if (rule.table == Table::coil || rule.table == Table::discrete_input) {
            if (idx >= out.pdu.coils.size())
                continue;
            const bool before = out.pdu.coils[idx];
            const bool after = rule.transform.apply_bit(before);
            if (after == before)
                continue;
            out.pdu.coils[idx] = after;
            rec.before = before ? 1 : 0;
            rec.after = after ? 1 : 0;
        } else {
            if (idx >= out.pdu.registers.size())
                continue;
            const std::uint16_t before = out.pdu.registers[idx];
            const std::uint16_t after = rule.transform.apply_register(before);
            if (after == before)
                continue;
            out.pdu.registers[idx] = after;
            rec.before = before;
            rec.after = after;
        }
        changed = true;
        if (log)
            log->push_back(rec);
    }
    return {out, changed};
}

} // namespace icsim::mitm
