#include "icsim/mitm/proxy.hpp"

#include <cmath>

namespace icsim::mitm {

using namespace std::chrono_literals;
using modbus::DecodeOutcome;
using modbus::NeedMoreBytes;
using modbus::PduDirection;

MitmProxy::MitmProxy(std::string upstream_host, std::uint16_t upstream_port,
                     std::vector<SpoofRule> rules, const sim::SimClock* clock,
                     std::uint16_t listen_port)
    : upstream_host_(std::move(upstream_host)), upstream_port_(upstream_port),
      rules_(std::move(rules)), clock_(clock), listener_(listen_port)
{
    accept_thread_ = std::thread([this] { accept_loop(); });
}

MitmProxy::~MitmProxy() { stop(); }

void MitmProxy::stop() noexcept
{
    if (stopping_.exchange(true))
        return;
    listener_.close();
    {
        std::lock_guard lock(conn_mutex_);
        for (auto& c : connections_) {
            c->client.shutdown_both();
            c->upstream.shutdown_both();
        }
    }
    if (accept_thread_.joinable())
        accept_thread_.join();
    std::vector<std::thread> threads;
    {
        std::lock_guard lock(conn_mutex_);
        threads.swap(pump_threads_);
    }
    for (auto& t : threads)
        if (t.joinable())
            t.join();
}

void MitmProxy::set_capture_start(double t_s)
{
    capture_start_ms_.store(static_cast<std::int64_t>(std::llround(t_s * 1000.0)),
                            std::memory_order_release);
}

double MitmProxy::capture_time_s() const
{
    if (!clock_)
        return 0.0;
    return clock_->now_s() -
           static_cast<double>(capture_start_ms_.load(std::memory_order_acquire)) / 1000.0;
}

std::vector<RewriteRecord> MitmProxy::rewrite_log() const
{
    std::lock_guard lock(log_mutex_);
    return log_;
}

void MitmProxy::append_log(const std::vector<RewriteRecord>& records)
{
    if (records.empty())
        return;
    std::lock_guard lock(log_mutex_);
    log_.insert(log_.end(), records.begin(), records.end());
}

void MitmProxy::accept_loop()
{
    while (!stopping_) {
        TcpSocket client = listener_.accept();
        if (!client.valid())
            break;

        TcpSocket upstream;
        try {
            upstream = TcpSocket::connect(upstream_host_, upstream_port_, 1000ms);
        } catch (const modbus::transport_error&) {
            continue; // upstream down: drop the client connection immediately
        }

        auto conn = std::make_shared<Connection>();
        conn->client = std::move(client);
        conn->upstream = std::move(upstream);

        std::lock_guard lock(conn_mutex_);
        if (stopping_)
            break;
        connections_.push_back(conn);
        pump_threads_.emplace_back([this, conn] {
            pump(*conn, conn->client, conn->upstream, Direction::plc_to_plant);
        });
        pump_threads_.emplace_back([this, conn] {
            pump(*conn, conn->upstream, conn->client, Direction::plant_to_plc);
        });
    }
}

void MitmProxy::pump(Connection& conn, TcpSocket& from, TcpSocket& to, Direction direction)
{
    const PduDirection pdu_dir =
        direction == Direction::plc_to_plant ? PduDirection::request : PduDirection::response;
    std::vector<std::uint8_t> buf;
    std::uint8_t chunk[2048];
    bool raw_mode = false; // unparsable stream: keep forwarding, stop rewriting

    while (!stopping_) {
        while (!raw_mode && !buf.empty()) {
            DecodeOutcome outcome;
            try {
                outcome = modbus::decode_some(buf, pdu_dir);
            } catch (const modbus::codec_error&) {
                raw_mode = true;
                break;
            }
            if (std::holds_alternative<NeedMoreBytes>(outcome))
                break;

            const modbus::Adu& adu = std::get<modbus::Adu>(outcome);
            const std::size_t frame_len = 6 + adu.header.length;

            FrameContext ctx;
            ctx.direction = direction;
            {
                std::lock_guard lock(conn.mutex);
                if (direction == Direction::plc_to_plant) {
                    if (auto table = read_request_table(adu.pdu))
                        conn.pending[adu.header.transaction_id] =
                            Connection::PendingRead{*table, adu.pdu.address, adu.pdu.count};
                } else {
                    auto it = conn.pending.find(adu.header.transaction_id);
                    if (it != conn.pending.end()) {
                        ctx.response_table = it->second.table;
                        ctx.response_address = it->second.address;
                        ctx.response_count = it->second.count;
                        conn.pending.erase(it);
                    }
                }
            }

            std::vector<RewriteRecord> records;
            const double t = capture_time_s();
            auto [rewritten, changed] = apply_rules(adu, ctx, rules_, t, &records);
            append_log(records); // logged before the frame can be observed downstream

            try {
                if (changed)
                    to.send_all(modbus::encode_adu(rewritten.header, rewritten.pdu));
                else
                    to.send_all(std::span<const std::uint8_t>(buf.data(), frame_len));
            } catch (const modbus::transport_error&) {
                from.shutdown_both();
                return;
            }
            buf.erase(buf.begin(), buf.begin() + static_cast<long>(frame_len));
        }

        if (raw_mode && !buf.empty()) {
            try {
                to.send_all(buf);
            } catch (const modbus::transport_error&) {
                from.shutdown_both();
                return;
            }
            buf.clear();
        }

        std::optional<std::size_t> n;
        try {
            n = from.recv_some(chunk, 200ms);
        } catch (const modbus::transport_error&) {
            to.shutdown_both();
            return;
        }
        if (!n)
            continue;
        if (*n == 0) { // peer closed; propagate
            to.shutdown_both();
            return;
        }
        buf.insert(buf.end(), chunk, chunk + *n);
    }
}

} // namespace icsim::mitm
