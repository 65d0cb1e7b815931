// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_PROTOCOL_FIXED_POINT_H_
#define INQUIRYLAB_PROTOCOL_FIXED_POINT_H_

#include <cmath>
#include <compare>
#include <cstdint>

namespace inquirylab::proto {

// Signed 32-bit fixed-point value with a power-of-ten scale. Everything on
// the wire is carried this way so equality is exact across platforms.
template <std::int64_t Scale>
struct Fixed {
  static constexpr std::int64_t kScale = Scale;

  std::int32_t raw = 0;

  static constexpr Fixed FromRaw(std::int32_t r) { return Fixed{r}; }
  static Fixed FromDouble(double v) {
    return Fixed{static_cast<std::int32_t>(std::llround(v * static_cast<double>(Scale)))};
  }
  double ToDouble() const { return static_cast<double>(raw) / static_cast<double>(Scale); }

  friend constexpr auto operator<=>(Fixed, Fixed) = default;
};

// Hundredths: measurement values, channel ranges, calibration offset.
using Centi = Fixed<100>;
// Millionths: calibration gain.
using Micro = Fixed<1'000'000>;

}  // namespace inquirylab::proto

#endif  // INQUIRYLAB_PROTOCOL_FIXED_POINT_H_
