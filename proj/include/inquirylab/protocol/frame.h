// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Frame layout (byte offsets):
//
//   0      1      2        3           4             5 .. 5+len-1   5+len  6+len
//   0xAA   0x55   version  frame_type  payload_len   payload        crc_hi crc_lo
//
// The CRC is CRC-16/CCITT-FALSE over version..payload. payload_len <= 64.
// Every frame type has a fixed payload shape (see messages.h); a frame whose
// payload does not match its type's shape is rejected as a protocol error.

#ifndef INQUIRYLAB_PROTOCOL_FRAME_H_
#define INQUIRYLAB_PROTOCOL_FRAME_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace inquirylab::proto {

inline constexpr std::uint8_t kSync0 = 0xAA;
inline constexpr std::uint8_t kSync1 = 0x55;
inline constexpr std::uint8_t kProtocolVersion = 0x01;
inline constexpr std::size_t kMaxPayload = 64;
inline constexpr std::size_t kHeaderSize = 5;
inline constexpr std::size_t kCrcSize = 2;
inline constexpr std::size_t kMaxFrameSize = kHeaderSize + kMaxPayload + kCrcSize;

enum class FrameType : std::uint8_t {
  kIdentReq = 0x01,
  kIdentResp = 0x02,
  kStart = 0x03,
  kStop = 0x04,
  kData = 0x05,
  kNack = 0x06,
};

std::optional<FrameType> FrameTypeFromByte(std::uint8_t b);
std::string_view FrameTypeName(FrameType type);

struct Frame {
  FrameType type = FrameType::kIdentReq;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

// True when `payload` has the shape required for `type`.
bool PayloadShapeValid(FrameType type, std::span<const std::uint8_t> payload);

// Throws ProtocolError(kOversize) when the payload exceeds kMaxPayload.
std::vector<std::uint8_t> EncodeFrame(const Frame& frame);

enum class DecodeStatus : std::uint8_t {
  kFrame,
  kNeedMore,
  kChecksumError,
  kProtocolError,
};

struct DecodeResult {
  DecodeStatus status = DecodeStatus::kNeedMore;
  std::optional<Frame> frame;
  // Bytes the caller should drop from the front of its buffer. For errors
  // this skips only the offending sync byte, so scanning resumes inside the
  // rejected region and a following good frame is never lost.
  std::size_t consumed = 0;
  // Version, type or length byte that caused a protocol error.
  std::uint8_t offending_byte = 0;
};

// Decodes the first frame in `bytes`, skipping any garbage before the sync
// pair. Never throws.
DecodeResult DecodeFrame(std::span<const std::uint8_t> bytes);

// Result of scanning a complete, finite byte sequence.
struct ScanResult {
  std::vector<Frame> frames;
  std::size_t checksum_errors = 0;
  std::size_t protocol_errors = 0;
};

// Decodes every frame in a finished byte sequence. Unlike DecodeFrame, a
// truncated candidate at the end of input is abandoned and scanning resumes
// one byte later.
ScanResult ScanFrames(std::span<const std::uint8_t> bytes);

// Incremental decoder for a live byte stream.
class FrameDecoder {
 public:
  void Feed(std::span<const std::uint8_t> bytes);
  // Next decode outcome; kNeedMore once the buffer holds no complete frame.
  DecodeResult Next();
  std::size_t buffered() const { return buffer_.size(); }
  void Clear() { buffer_.clear(); }

 private:
  std::vector<std::uint8_t> buffer_;
};

}  // namespace inquirylab::proto

#endif  // INQUIRYLAB_PROTOCOL_FRAME_H_
