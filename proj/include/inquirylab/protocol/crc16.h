// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_PROTOCOL_CRC16_H_
#define INQUIRYLAB_PROTOCOL_CRC16_H_

#include <cstdint>
#include <span>

namespace inquirylab::proto {

inline constexpr std::uint16_t kCrcInit = 0xFFFF;
inline constexpr std::uint16_t kCrcPoly = 0x1021;

// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no final xor.
std::uint16_t Crc16(std::span<const std::uint8_t> bytes,
                    std::uint16_t crc = kCrcInit);

}  // namespace inquirylab::proto

#endif  // INQUIRYLAB_PROTOCOL_CRC16_H_
