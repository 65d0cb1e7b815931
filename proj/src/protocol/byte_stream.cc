// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/protocol/byte_stream.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <system_error>

#include "inquirylab/protocol/errors.h"

namespace inquirylab::proto {
namespace {

[[noreturn]] void TransportFailure(const std::string& what) {
  throw ProtocolError(ErrorCode::kTransport, what + ": " + std::strerror(errno));
}

sockaddr_in ToSockaddr(const Endpoint& ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  const std::string host = ep.host == "localhost" ? "127.0.0.1" : ep.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw std::invalid_argument("not an IPv4 address: " + ep.host);
  }
  return addr;
}

}  // namespace

Endpoint Endpoint::Parse(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw std::invalid_argument("expected host:port, got '" + text + "'");
  }
  const int port = std::stoi(text.substr(colon + 1));
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range in '" + text + "'");
  return Endpoint{text.substr(0, colon), static_cast<std::uint16_t>(port)};
}

TcpStream::TcpStream(int fd) : fd_(fd) {
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpStream::~TcpStream() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpStream::Shutdown() { ::shutdown(fd_, SHUT_RDWR); }

std::unique_ptr<TcpStream> TcpStream::Connect(const Endpoint& endpoint,
                                              std::chrono::milliseconds timeout) {
  const sockaddr_in addr = ToSockaddr(endpoint);
  const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) TransportFailure("socket");
  auto stream = std::make_unique<TcpStream>(fd);

  const int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
  if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    if (errno != EINPROGRESS) TransportFailure("connect " + endpoint.ToString());
    pollfd pfd{fd, POLLOUT, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (rc == 0) {
      errno = ETIMEDOUT;
      TransportFailure("connect " + endpoint.ToString());
    }
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
    if (rc < 0 || err != 0) {
      if (err != 0) errno = err;
      TransportFailure("connect " + endpoint.ToString());
    }
  }
  ::fcntl(fd, F_SETFL, flags);
  return stream;
}

void TcpStream::Write(std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      TransportFailure("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::size_t TcpStream::Read(std::span<std::uint8_t> buffer, std::chrono::milliseconds timeout) {
  pollfd pfd{fd_, POLLIN, 0};
  int rc;
  do {
    rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  } while (rc < 0 && errno == EINTR);
  if (rc < 0) TransportFailure("poll");
  if (rc == 0) return 0;
  const ssize_t n = ::recv(fd_, buffer.data(), buffer.size(), 0);
  if (n < 0) TransportFailure("recv");
  if (n == 0) throw ProtocolError(ErrorCode::kTransport, "stream closed by peer");
  return static_cast<std::size_t>(n);
}

TcpListener::TcpListener(const Endpoint& endpoint) {
  const sockaddr_in addr = ToSockaddr(endpoint);
  fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0);
  if (fd_ < 0) throw std::system_error(errno, std::generic_category(), "socket");
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(fd_, 8) != 0) {
    const int err = errno;
    ::close(fd_);
    throw std::system_error(err, std::generic_category(), "bind " + endpoint.ToString());
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  local_ = Endpoint{endpoint.host, ntohs(bound.sin_port)};
}

TcpListener::~TcpListener() { ::close(fd_); }

std::unique_ptr<TcpStream> TcpListener::TryAccept() {
  const int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
  if (fd < 0) return nullptr;
  return std::make_unique<TcpStream>(fd);
}

}  // namespace inquirylab::proto
