#include "qrb/tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <thread>
#include <vector>

#include "qrb/errors.hpp"

namespace qrb::net {

namespace {

void write_all(int fd, const uint8_t* data, size_t size) {
    size_t sent = 0;
    while (sent < size) {
        const ssize_t n = ::send(fd, data + sent, size - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw Error("socket write failed: " + std::string(std::strerror(errno)));
        }
        sent += static_cast<size_t>(n);
    }
}

// Returns false on clean EOF before any byte was read.
bool read_all(int fd, uint8_t* data, size_t size) {
    size_t got = 0;
    while (got < size) {
        const ssize_t n = ::recv(fd, data + got, size - got, 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw Error("socket read failed: " + std::string(std::strerror(errno)));
        }
        if (n == 0) {
            if (got == 0) return false;
            throw FrameError(FrameError::Kind::truncation, "connection closed mid-frame");
        }
        got += static_cast<size_t>(n);
    }
    return true;
}

void handle_directory_connection(Socket connection, const IdentityDirectory& directory) {
    try {
        const transport::Message request = recv_frame(connection);
        if (const auto* lookup = std::get_if<transport::DirectoryLookup>(&request)) {
            transport::DirectoryReply reply;
            try {
                reply.key = directory.lookup(lookup->locator);
            } catch (const DirectoryError&) {
                reply.key = std::nullopt;
            }
            send_frame(connection, reply);
        }
    } catch (const Error&) {
        // A malformed or interrupted request ends the connection; the
        // client sees EOF and reports unavailability.
    }
}

}  // namespace

Socket& Socket::operator=(Socket&& other) noexcept {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = other.fd_;
        other.fd_ = -1;
    }
    return *this;
}

Socket::~Socket() {
    if (fd_ >= 0) ::close(fd_);
}

Socket listen_on(uint16_t port) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        throw Error("cannot create socket: " + std::string(std::strerror(errno)));
    }
    Socket sock(fd);
    const int yes = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        throw Error("cannot bind port " + std::to_string(port) + ": " +
                    std::strerror(errno));
    }
    if (::listen(fd, 16) != 0) {
        throw Error("cannot listen: " + std::string(std::strerror(errno)));
    }
    return sock;
}

uint16_t local_port(const Socket& listener) {
    sockaddr_in addr{};
    socklen_t len = sizeof addr;
    if (::getsockname(listener.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
        throw Error("getsockname failed");
    }
    return ntohs(addr.sin_port);
}

Socket connect_to(const std::string& host, uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* results = nullptr;
    const int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &results);
    if (rc != 0) {
        throw Error("cannot resolve '" + host + "': " + gai_strerror(rc));
    }
    int fd = -1;
    for (addrinfo* it = results; it != nullptr; it = it->ai_next) {
        fd = ::socket(it->ai_family, it->ai_socktype, it->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, it->ai_addr, it->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(results);
    if (fd < 0) {
        throw Error("cannot connect to " + host + ":" + std::to_string(port));
    }
    // One request per connection; a peer that stalls longer than this is
    // treated as unreachable.
    timeval timeout{5, 0};
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &timeout, sizeof timeout);
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &timeout, sizeof timeout);
    return Socket(fd);
}

void send_frame(const Socket& socket, const transport::Message& message) {
    const Bytes frame = transport::encode_frame(message);
    write_all(socket.fd(), frame.data(), frame.size());
}

transport::Message recv_frame(const Socket& socket) {
    uint8_t header[4];
    if (!read_all(socket.fd(), header, 4)) {
        throw FrameError(FrameError::Kind::truncation, "connection closed before a frame");
    }
    const uint32_t length = (static_cast<uint32_t>(header[0]) << 24) |
                            (static_cast<uint32_t>(header[1]) << 16) |
                            (static_cast<uint32_t>(header[2]) << 8) |
                            static_cast<uint32_t>(header[3]);
    if (length > transport::kMaxFrameBytes) {
        throw FrameError(FrameError::Kind::oversize, "incoming frame exceeds 16 MiB limit");
    }
    if (length < 1) {
        throw FrameError(FrameError::Kind::truncation, "empty frame");
    }
    Bytes frame;
    frame.reserve(4 + length);
    frame.insert(frame.end(), header, header + 4);
    frame.resize(4 + length);
    if (!read_all(socket.fd(), frame.data() + 4, length)) {
        throw FrameError(FrameError::Kind::truncation, "connection closed mid-frame");
    }
    return transport::decode_frame(frame);
}

void serve_directory(const Socket& listener, const IdentityDirectory& directory,
                     const std::atomic<bool>& stop) {
    std::vector<std::thread> workers;
    while (!stop.load()) {
        pollfd pfd{listener.fd(), POLLIN, 0};
        const int ready = ::poll(&pfd, 1, 100);
        if (ready <= 0) continue;
        const int client = ::accept(listener.fd(), nullptr, nullptr);
        if (client < 0) continue;
        workers.emplace_back(handle_directory_connection, Socket(client), std::cref(directory));
    }
    for (std::thread& worker : workers) {
        worker.join();
    }
}

std::optional<crypto::PublicKey> RemoteDirectory::lookup(std::string_view locator) const {
    try {
        const Socket connection = connect_to(host_, port_);
        send_frame(connection, transport::DirectoryLookup{std::string(locator)});
        const transport::Message response = recv_frame(connection);
        if (const auto* reply = std::get_if<transport::DirectoryReply>(&response)) {
            return reply->key;
        }
        throw DirectoryError("directory sent an unexpected frame");
    } catch (const DirectoryError&) {
        throw;
    } catch (const Error& e) {
        throw DirectoryError("directory unreachable: " + std::string(e.what()));
    }
}

}  // namespace qrb::net
