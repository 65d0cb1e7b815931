// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/protocol/frame.h"

#include <algorithm>
#include <string>

#include "inquirylab/protocol/crc16.h"
#include "inquirylab/protocol/errors.h"

namespace inquirylab::proto {

std::optional<FrameType> FrameTypeFromByte(std::uint8_t b) {
  if (b >= 0x01 && b <= 0x06) return static_cast<FrameType>(b);
  return std::nullopt;
}

std::string_view FrameTypeName(FrameType type) {
  switch (type) {
    case FrameType::kIdentReq: return "IDENT_REQ";
    case FrameType::kIdentResp: return "IDENT_RESP";
    case FrameType::kStart: return "START";
    case FrameType::kStop: return "STOP";
    case FrameType::kData: return "DATA";
    case FrameType::kNack: return "NACK";
  }
  return "?";
}

bool PayloadShapeValid(FrameType type, std::span<const std::uint8_t> payload) {
  const std::size_t n = payload.size();
  switch (type) {
    case FrameType::kIdentReq:
    case FrameType::kStop:
      return n == 0;
    case FrameType::kStart:
    case FrameType::kNack:
      return n == 2;
    case FrameType::kData: {
      if (n < 10) return false;
      const std::size_t count = payload[9];
      return count >= 1 && count <= 2 && n == 10 + 4 * count;
    }
    case FrameType::kIdentResp: {
      if (n < 8) return false;
      const std::size_t channels = payload[7];
      if (channels < 1 || channels > 2) return false;
      const std::size_t flag_at = 8 + 9 * channels;
      if (n <= flag_at) return false;
      const std::uint8_t flag = payload[flag_at];
      if (flag > 1) return false;
      return n == flag_at + 1 + (flag ? 8 : 0);
    }
  }
  return false;
}

std::vector<std::uint8_t> EncodeFrame(const Frame& frame) {
  if (frame.payload.size() > kMaxPayload) {
    throw ProtocolError(ErrorCode::kOversize,
                        "payload of " + std::to_string(frame.payload.size()) +
                            " bytes exceeds the 64-byte limit");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + frame.payload.size() + kCrcSize);
  out.push_back(kSync0);
  out.push_back(kSync1);
  out.push_back(kProtocolVersion);
  out.push_back(static_cast<std::uint8_t>(frame.type));
  out.push_back(static_cast<std::uint8_t>(frame.payload.size()));
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  const std::uint16_t crc = Crc16(std::span(out).subspan(2));
  out.push_back(static_cast<std::uint8_t>(crc >> 8));
  out.push_back(static_cast<std::uint8_t>(crc & 0xFF));
  return out;
}

DecodeResult DecodeFrame(std::span<const std::uint8_t> bytes) {
  DecodeResult result;

  std::size_t p = 0;
  while (p + 1 < bytes.size() && !(bytes[p] == kSync0 && bytes[p + 1] == kSync1)) ++p;
  if (p + 1 >= bytes.size()) {
    // Keep a trailing 0xAA: it may be the first half of a sync pair.
    const bool keep_last = !bytes.empty() && bytes.back() == kSync0;
    result.consumed = keep_last ? bytes.size() - 1 : bytes.size();
    return result;
  }

  result.consumed = p;
  if (bytes.size() < p + kHeaderSize) return result;

  const std::uint8_t version = bytes[p + 2];
  const std::uint8_t type_byte = bytes[p + 3];
  const std::uint8_t len = bytes[p + 4];
  auto reject = [&](DecodeStatus status, std::uint8_t offending) {
    result.status = status;
    result.consumed = p + 1;
    result.offending_byte = offending;
    return result;
  };

  if (version != kProtocolVersion) return reject(DecodeStatus::kProtocolError, version);
  const auto type = FrameTypeFromByte(type_byte);
  if (!type) return reject(DecodeStatus::kProtocolError, type_byte);
  if (len > kMaxPayload) return reject(DecodeStatus::kProtocolError, len);

  const std::size_t total = kHeaderSize + len + kCrcSize;
  if (bytes.size() < p + total) return result;

  const auto covered = bytes.subspan(p + 2, 3 + len);
  const std::uint16_t expected = Crc16(covered);
  const std::uint16_t received = static_cast<std::uint16_t>(
      (bytes[p + kHeaderSize + len] << 8) | bytes[p + kHeaderSize + len + 1]);
  if (expected != received) return reject(DecodeStatus::kChecksumError, 0);

  const auto payload = bytes.subspan(p + kHeaderSize, len);
  if (!PayloadShapeValid(*type, payload)) return reject(DecodeStatus::kProtocolError, type_byte);

  result.status = DecodeStatus::kFrame;
  result.frame = Frame{*type, std::vector<std::uint8_t>(payload.begin(), payload.end())};
  result.consumed = p + total;
  return result;
}

ScanResult ScanFrames(std::span<const std::uint8_t> bytes) {
  ScanResult out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const DecodeResult r = DecodeFrame(bytes.subspan(pos));
    switch (r.status) {
      case DecodeStatus::kFrame:
        out.frames.push_back(*r.frame);
        break;
      case DecodeStatus::kChecksumError:
        ++out.checksum_errors;
        break;
      case DecodeStatus::kProtocolError:
        ++out.protocol_errors;
        break;
      case DecodeStatus::kNeedMore:
        // No more input will arrive: abandon the candidate at the front.
        pos += std::max<std::size_t>(r.consumed, 1);
        continue;
    }
    pos += r.consumed;
  }
  return out;
}

void FrameDecoder::Feed(std::span<const std::uint8_t> bytes) {
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

DecodeResult FrameDecoder::Next() {
  DecodeResult r = DecodeFrame(buffer_);
  buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(r.consumed));
  return r;
}

}  // namespace inquirylab::proto
