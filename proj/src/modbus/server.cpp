#include "icsim/modbus/server.hpp"

#include <sys/socket.h>

#include "icsim/modbus/frame.hpp"

namespace icsim::modbus {

using namespace std::chrono_literals;

ModbusTcpServer::ModbusTcpServer(std::shared_ptr<RegisterBank> bank, std::uint16_t port)
    : bank_(std::move(bank)), listener_(port)
{
    accept_thread_ = std::thread([this] { accept_loop(); });
}

ModbusTcpServer::~ModbusTcpServer() { stop(); }

void ModbusTcpServer::stop() noexcept
{
    if (stopping_.exchange(true))
        return;
    listener_.close();
    {
        std::lock_guard lock(conn_mutex_);
        for (int fd : conn_fds_)
            ::shutdown(fd, SHUT_RDWR);
    }
    if (accept_thread_.joinable())
        accept_thread_.join();
    std::vector<std::thread> threads;
    {
        std::lock_guard lock(conn_mutex_);
        threads.swap(conn_threads_);
    }
    for (auto& t : threads)
        if (t.joinable())
            t.join();
}

void ModbusTcpServer::accept_loop()
{
    while (!stopping_) {
        TcpSocket sock = listener_.accept();
        if (!sock.valid())
            break;
        std::lock_guard lock(conn_mutex_);
        if (stopping_)
            break;
        conn_fds_.push_back(sock.fd());
        conn_threads_.emplace_back(
            [this](TcpSocket s) { serve_connection(std::move(s)); }, std::move(sock));
    }
}

void ModbusTcpServer::serve_connection(TcpSocket sock)
{
    std::vector<std::uint8_t> buf;
    std::uint8_t chunk[512];

    while (!stopping_) {
        // Drain complete frames already buffered before reading more.
        while (true) {
            DecodeOutcome outcome;
            try {
                outcome = decode_some(buf, PduDirection::request);
            } catch (const codec_error&) {
                return; // unparsable stream: drop the connection
            }
            auto* need = std::get_if<NeedMoreBytes>(&outcome);
            if (need)
                break;

            const Adu& req = std::get<Adu>(outcome);
            const std::size_t frame_size = 6 + req.header.length;
            Pdu resp = bank_->execute(req.pdu);
            MbapHeader h;
            h.transaction_id = req.header.transaction_id;
            h.unit_id = req.header.unit_id;
            try {
                sock.send_all(encode_adu(h, resp));
            } catch (const transport_error&) {
                return;
            }
            buf.erase(buf.begin(), buf.begin() + static_cast<long>(frame_size));
        }

        std::optional<std::size_t> n;
        try {
            n = sock.recv_some(chunk, 200ms);
        } catch (const transport_error&) {
            return;
        }
        if (!n)
            continue; // poll timeout, re-check stopping_
        if (*n == 0)
            return; // peer closed
        buf.insert(buf.end(), chunk, chunk + *n);
    }
}

} // namespace icsim::modbus
