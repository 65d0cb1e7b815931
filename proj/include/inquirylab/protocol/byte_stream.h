// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_PROTOCOL_BYTE_STREAM_H_
#define INQUIRYLAB_PROTOCOL_BYTE_STREAM_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>

namespace inquirylab::proto {

// A reliable, ordered byte stream: a serial device node on hardware, a
// loopback TCP connection to a virtual device here.
class ByteStream {
 public:
  virtual ~ByteStream() = default;

  // Writes every byte or throws ProtocolError(kTransport).
  virtual void Write(std::span<const std::uint8_t> bytes) = 0;
  // Waits up to `timeout` for data. Returns 0 on timeout; throws
  // ProtocolError(kTransport) once the peer has closed the stream.
  virtual std::size_t Read(std::span<std::uint8_t> buffer, std::chrono::milliseconds timeout) = 0;
};

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  std::string ToString() const { return host + ":" + std::to_string(port); }
  // Parses "host:port"; throws std::invalid_argument.
  static Endpoint Parse(const std::string& text);
  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

class TcpStream final : public ByteStream {
 public:
  explicit TcpStream(int fd);
  ~TcpStream() override;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  static std::unique_ptr<TcpStream> Connect(const Endpoint& endpoint,
                                            std::chrono::milliseconds timeout);

  void Write(std::span<const std::uint8_t> bytes) override;
  std::size_t Read(std::span<std::uint8_t> buffer, std::chrono::milliseconds timeout) override;

  int fd() const { return fd_; }
  void Shutdown();

 private:
  int fd_;
};

class TcpListener {
 public:
  // Binds and listens. Port 0 picks an ephemeral port. Throws
  // std::system_error (e.g. EADDRINUSE).
  explicit TcpListener(const Endpoint& endpoint);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  Endpoint local_endpoint() const { return local_; }
  int fd() const { return fd_; }
  // Non-blocking accept; nullptr when nothing is pending.
  std::unique_ptr<TcpStream> TryAccept();

 private:
  int fd_;
  Endpoint local_;
};

}  // namespace inquirylab::proto

#endif  // INQUIRYLAB_PROTOCOL_BYTE_STREAM_H_
