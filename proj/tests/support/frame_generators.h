// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded generators for protocol property tests. Test-only.

#ifndef INQUIRYLAB_TESTS_SUPPORT_FRAME_GENERATORS_H_
#define INQUIRYLAB_TESTS_SUPPORT_FRAME_GENERATORS_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "inquirylab/protocol/frame.h"

namespace inquirylab::testing {

// Reference CRC-16/CCITT-FALSE, one bit at a time. Deliberately shares no
// code with the table-driven implementation.
inline std::uint16_t BitwiseCrc16(std::span<const std::uint8_t> bytes) {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t b : bytes) {
    crc ^= static_cast<std::uint16_t>(b << 8);
    for (int i = 0; i < 8; ++i) {
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<std::uint16_t>(crc << 1);
    }
  }
  return crc;
}

inline std::uint8_t RandomByte(std::mt19937_64& rng) { return static_cast<std::uint8_t>(rng() & 0xFF); }

inline std::vector<std::uint8_t> RandomBytes(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = RandomByte(rng);
  return out;
}

// A frame of random type whose payload has the shape its type requires but
// otherwise random content.
inline proto::Frame RandomFrame(std::mt19937_64& rng) {
  using proto::FrameType;
  const auto type = static_cast<FrameType>(1 + rng() % 6);
  proto::Frame f{type, {}};
  switch (type) {
    case FrameType::kIdentReq:
    case FrameType::kStop:
      break;
    case FrameType::kStart:
    case FrameType::kNack:
      f.payload = RandomBytes(rng, 2);
      break;
    case FrameType::kData: {
      const std::size_t count = 1 + rng() % 2;
      f.payload = RandomBytes(rng, 10 + 4 * count);
      f.payload[9] = static_cast<std::uint8_t>(count);
      break;
    }
    case FrameType::kIdentResp: {
      const std::size_t channels = 1 + rng() % 2;
      const bool cal = rng() % 2 == 0;
      const std::size_t flag_at = 8 + 9 * channels;
      f.payload = RandomBytes(rng, flag_at + 1 + (cal ? 8 : 0));
      f.payload[7] = static_cast<std::uint8_t>(channels);
      f.payload[flag_at] = cal ? 1 : 0;
      break;
    }
  }
  return f;
}

}  // namespace inquirylab::testing

#endif  // INQUIRYLAB_TESTS_SUPPORT_FRAME_GENERATORS_H_
