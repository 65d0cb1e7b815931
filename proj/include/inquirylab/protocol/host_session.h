// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_PROTOCOL_HOST_SESSION_H_
#define INQUIRYLAB_PROTOCOL_HOST_SESSION_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>

#include "inquirylab/protocol/byte_stream.h"
#include "inquirylab/protocol/frame.h"
#include "inquirylab/protocol/messages.h"

namespace inquirylab::proto {

inline constexpr std::chrono::milliseconds kDefaultHandshakeTimeout{500};

struct SessionStats {
  std::uint64_t frames = 0;
  std::uint64_t measurements = 0;
  std::uint64_t checksum_errors = 0;
  std::uint64_t protocol_errors = 0;
  std::uint64_t rejected_measurements = 0;
};

// One read outcome from a streaming device.
struct StreamEvent {
  enum class Kind { kMeasurement, kChecksumError, kProtocolError, kTimeout };
  Kind kind = Kind::kTimeout;
  DataMessage data;  // valid for kMeasurement
};

// Host side of the protocol. Owns its stream exclusively; not thread-safe.
// One request is outstanding at a time and the device only speaks first
// with DATA frames after START.
class HostSession {
 public:
  explicit HostSession(std::unique_ptr<ByteStream> stream);

  // IDENT_REQ -> IDENT_RESP. Throws ProtocolError(kDeviceAbsent) on timeout
  // and ProtocolError(kMalformedPayload) on a descriptor that breaks its
  // invariants. DATA frames still in flight from an earlier stream are
  // discarded.
  SensorDescriptor Handshake(std::chrono::milliseconds timeout = kDefaultHandshakeTimeout);

  void Start(std::chrono::milliseconds period = kDefaultStreamPeriod);
  void Stop();

  // Waits for the next DATA frame. Checksum and protocol errors are reported
  // as events rather than thrown, so the caller can decide when a device is
  // faulty. Measurements that do not fit the handshaken descriptor count as
  // protocol errors.
  StreamEvent Next(std::chrono::milliseconds timeout);

  const std::optional<SensorDescriptor>& descriptor() const { return descriptor_; }
  const SessionStats& stats() const { return stats_; }

 private:
  void Send(FrameType type, std::vector<std::uint8_t> payload = {});
  // Next decoded frame or error within the deadline.
  DecodeResult Receive(std::chrono::steady_clock::time_point deadline);

  std::unique_ptr<ByteStream> stream_;
  FrameDecoder decoder_;
  std::optional<SensorDescriptor> descriptor_;
  SessionStats stats_;
};

}  // namespace inquirylab::proto

#endif  // INQUIRYLAB_PROTOCOL_HOST_SESSION_H_
