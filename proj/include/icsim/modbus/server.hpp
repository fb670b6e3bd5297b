#ifndef ICSIM_MODBUS_SERVER_HPP
#define ICSIM_MODBUS_SERVER_HPP

#include <atomic>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "icsim/modbus/register_bank.hpp"
#include "icsim/modbus/tcp.hpp"

namespace icsim::modbus {

// Modbus TCP server: one bank per listener, persistent connections, each
// connection served on its own thread. Unit id is accepted and echoed but
// not used for routing.
class ModbusTcpServer {
public:
    // port 0 binds an ephemeral port; query port() after construction.
    ModbusTcpServer(std::shared_ptr<RegisterBank> bank, std::uint16_t port = 0);
    ~ModbusTcpServer();

    ModbusTcpServer(const ModbusTcpServer&) = delete;
    ModbusTcpServer& operator=(const ModbusTcpServer&) = delete;

    std::uint16_t port() const { return listener_.port(); }
    RegisterBank& bank() { return *bank_; }

    void stop() noexcept; // idempotent

private:
    void accept_loop();
    void serve_connection(TcpSocket sock);

    std::shared_ptr<RegisterBank> bank_;
    TcpListener listener_;
    std::atomic<bool> stopping_{false};
    std::thread accept_thread_;
    std::mutex conn_mutex_;
    std::vector<std::thread> conn_threads_;
    std::vector<int> conn_fds_;
};

} // namespace icsim::modbus

#endif
