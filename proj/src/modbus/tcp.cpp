#include "icsim/modbus/tcp.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>
#include <utility>

namespace icsim::modbus {

namespace {

[[noreturn]] void throw_errno(const std::string& what)
{
    throw transport_error(what + ": " + std::strerror(errno));
}

void set_nodelay(int fd)
{
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

} // namespace

TcpSocket::TcpSocket(TcpSocket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

TcpSocket& TcpSocket::operator=(TcpSocket&& other) noexcept
{
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

TcpSocket::~TcpSocket() { close(); }

void TcpSocket::close() noexcept
{
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void TcpSocket::shutdown_both() noexcept
{
    if (fd_ >= 0)
        ::shutdown(fd_, SHUT_RDWR);
}

TcpSocket TcpSocket::connect(const std::string& host, std::uint16_t port,
                             std::chrono::milliseconds timeout)
{
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0)
        throw_errno("socket");
    TcpSocket sock(fd);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw transport_error("connect: bad host " + host);

    int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
    if (rc < 0 && errno != EINPROGRESS)
        throw_errno("connect");
    if (rc < 0) {
        pollfd pfd{fd, POLLOUT, 0};
        rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
        if (rc == 0)
            throw transport_error("connect: timeout");
        if (rc < 0)
            throw_errno("poll");
        int err = 0;
        socklen_t len = sizeof(err);
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        if (err != 0)
            throw transport_error(std::string("connect: ") + std::strerror(err));
    }
    ::fcntl(fd, F_SETFL, flags);
    set_nodelay(fd);
    return sock;
}

void TcpSocket::send_all(std::span<const std::uint8_t> bytes)
{
    std::size_t sent = 0;
    while (sent < bytes.size()) {
        ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw_errno("send");
        }
        sent += static_cast<std::size_t>(n);
    }
}

std::optional<std::size_t> TcpSocket::recv_some(std::span<std::uint8_t> into,
                                                std::chrono::milliseconds timeout)
{
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (rc < 0) {
        if (errno == EINTR)
            return recv_some(into, timeout);
        throw_errno("poll");
    }
    if (rc == 0)
        return std::nullopt;
    ssize_t n = ::recv(fd_, into.data(), into.size(), 0);
    if (n < 0)
        throw_errno("recv");
    return static_cast<std::size_t>(n);
}

TcpListener::TcpListener(std::uint16_t port)
{
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0)
        throw_errno("socket");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        int e = errno;
        ::close(fd_);
        fd_ = -1;
        errno = e;
        throw_errno("bind port " + std::to_string(port));
    }
    if (::listen(fd_, 16) < 0)
        throw_errno("listen");

    socklen_t len = sizeof(addr);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

TcpListener::TcpListener(TcpListener&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), port_(std::exchange(other.port_, 0))
{
}

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept
{
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
        port_ = std::exchange(other.port_, 0);
    }
    return *this;
}

TcpListener::~TcpListener() { close(); }

void TcpListener::close() noexcept
{
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
        ::close(fd_);
        fd_ = -1;
    }
}

TcpSocket TcpListener::accept()
{
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0)
        return TcpSocket{};
    set_nodelay(fd);
    return TcpSocket(fd);
}

} // namespace icsim::modbus
