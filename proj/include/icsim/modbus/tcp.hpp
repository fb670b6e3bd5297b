#ifndef ICSIM_MODBUS_TCP_HPP
#define ICSIM_MODBUS_TCP_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace icsim::modbus {

class transport_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thin RAII wrapper over a connected TCP socket.
class TcpSocket {
public:
    TcpSocket() = default;
    explicit TcpSocket(int fd) : fd_(fd) {}
    TcpSocket(TcpSocket&& other) noexcept;
    TcpSocket& operator=(TcpSocket&& other) noexcept;
    TcpSocket(const TcpSocket&) = delete;
    TcpSocket& operator=(const TcpSocket&) = delete;
    ~TcpSocket();

    static TcpSocket connect(const std::string& host, std::uint16_t port,
                             std::chrono::milliseconds timeout);

    bool valid() const { return fd_ >= 0; }
    int fd() const { return fd_; }

    void send_all(std::span<const std::uint8_t> bytes);
    // Returns bytes read (0 on orderly peer close); nullopt on timeout.
    std::optional<std::size_t> recv_some(std::span<std::uint8_t> into,
                                         std::chrono::milliseconds timeout);
    void shutdown_both() noexcept;
    void close() noexcept;

private:
    int fd_ = -1;
};

class TcpListener {
public:
    TcpListener() = default;
    // Binds loopback; port 0 picks an ephemeral port (see port()).
    explicit TcpListener(std::uint16_t port);
    TcpListener(TcpListener&& other) noexcept;
    TcpListener& operator=(TcpListener&& other) noexcept;
    TcpListener(const TcpListener&) = delete;
    ~TcpListener();

    std::uint16_t port() const { return port_; }
    bool valid() const { return fd_ >= 0; }

    // Blocks until a connection arrives or the listener is closed; an invalid
    // socket signals shutdown.
    TcpSocket accept();
    void close() noexcept;

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

} // namespace icsim::modbus

#endif
