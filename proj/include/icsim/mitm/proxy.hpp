#ifndef ICSIM_MITM_PROXY_HPP
#define ICSIM_MITM_PROXY_HPP

#include <atomic>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "icsim/mitm/rewrite.hpp"
#include "icsim/modbus/tcp.hpp"
#include "icsim/sim/clock.hpp"

namespace icsim::mitm {

using modbus::TcpListener;
using modbus::TcpSocket;

// Transparent TCP proxy between the PLC and one plant server. Both directions
// are forwarded frame-aligned and FIFO; frames matching an active rule are
// rewritten in place, everything else passes byte-identical. Read responses
// are located via the pending request's transaction id.
class MitmProxy {
public:
    MitmProxy(std::string upstream_host, std::uint16_t upstream_port,
              std::vector<SpoofRule> rules, const sim::SimClock* clock = nullptr,
              std::uint16_t listen_port = 0);
    ~MitmProxy();

    MitmProxy(const MitmProxy&) = delete;
    MitmProxy& operator=(const MitmProxy&) = delete;

    std::uint16_t port() const { return listener_.port(); }

    // Rules gate on capture-relative time: t = clock.now_s() - capture_start.
    void set_capture_start(double t_s);

    std::vector<RewriteRecord> rewrite_log() const;
    void stop() noexcept; // idempotent

private:
    struct Connection {
        std::mutex mutex;
        struct PendingRead {
            modbus::Table table;
            std::uint16_t address;
            std::uint16_t count;
        };
        std::map<std::uint16_t, PendingRead> pending;
        TcpSocket client;
        TcpSocket upstream;
    };

    void accept_loop();
    void pump(Connection& conn, TcpSocket& from, TcpSocket& to, Direction direction);
    double capture_time_s() const;
    void append_log(const std::vector<RewriteRecord>& records);

    std::string upstream_host_;
    std::uint16_t upstream_port_;
    std::vector<SpoofRule> rules_;
    const sim::SimClock* clock_;
    // Until a capture starts, capture time sits far in the negative so no
    // rule window can be active during warmup.
    std::atomic<std::int64_t> capture_start_ms_{std::numeric_limits<std::int64_t>::max() / 2};

    TcpListener listener_;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
    std::mutex conn_mutex_;
    std::vector<std::shared_ptr<Connection>> connections_;
    std::vector<std::thread> pump_threads_;

    mutable std::mutex log_mutex_;
    std::vector<RewriteRecord> log_;
};

} // namespace icsim::mitm

#endif
