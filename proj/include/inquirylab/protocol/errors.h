// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_PROTOCOL_ERRORS_H_
#define INQUIRYLAB_PROTOCOL_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace inquirylab::proto {

enum class ErrorCode : std::uint8_t {
  kOversize,
  kChecksum,
  kBadVersion,
  kUnknownFrameType,
  kMalformedPayload,
  kDeviceAbsent,
  kOutOfRange,
  kTransport,
  kNack,
};

const char* ToString(ErrorCode code);

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(ErrorCode code, const std::string& what,
                std::uint8_t offending_byte = 0)
      : std::runtime_error(what), code_(code), offending_byte_(offending_byte) {}

  ErrorCode code() const { return code_; }
  // Meaningful for kBadVersion, kUnknownFrameType and kNack.
  std::uint8_t offending_byte() const { return offending_byte_; }

 private:
  ErrorCode code_;
  std::uint8_t offending_byte_;
};

}  // namespace inquirylab::proto

#endif  // INQUIRYLAB_PROTOCOL_ERRORS_H_
