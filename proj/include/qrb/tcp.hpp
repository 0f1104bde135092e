#pragma once

#include <atomic>
#include <cstdint>
#include <string>

#include "qrb/directory.hpp"
#include "qrb/transport.hpp"

namespace qrb::net {

/// RAII wrapper over a POSIX socket descriptor.
class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket();

    int fd() const { return fd_; }
    explicit operator bool() const { return fd_ >= 0; }

private:
    int fd_ = -1;
};

/// Binds and listens on the loopback interface. Port 0 picks an ephemeral
/// port; read it back with local_port().
Socket listen_on(uint16_t port);
uint16_t local_port(const Socket& listener);

Socket connect_to(const std::string& host, uint16_t port);  // Error on failure

/// One frame out / one frame in, exactly the byte layout of encode_frame.
void send_frame(const Socket& socket, const transport::Message& message);
transport::Message recv_frame(const Socket& socket);  // FrameError on EOF/overrun

/// Answers directory_lookup frames until `stop` becomes true. Each accepted
/// connection is served on its own thread, one request per connection.
///
/// The carrier adds no encryption of its own: requests hold already-sealed
/// packets and replies hold public data. Deployments must run it over an
/// authenticated encrypted channel.
void serve_directory(const Socket& listener, const IdentityDirectory& directory,
                     const std::atomic<bool>& stop);

/// Directory client speaking the frame protocol; one connection per lookup.
class RemoteDirectory final : public IdentityDirectory {
public:
    RemoteDirectory(std::string host, uint16_t port)
        : host_(std::move(host)), port_(port) {}

    std::optional<crypto::PublicKey> lookup(std::string_view locator) const override;

private:
    std::string host_;
    uint16_t port_;
};

}  // namespace qrb::net
