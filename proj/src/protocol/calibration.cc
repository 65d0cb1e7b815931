// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/protocol/calibration.h"

#include <cstdint>
#include <string>

#include "inquirylab/protocol/errors.h"

namespace inquirylab::proto {
namespace {

// Division rounding half away from zero; den > 0.
std::int64_t DivRound(std::int64_t num, std::int64_t den) {
  return num >= 0 ? (num + den / 2) / den : -((-num + den / 2) / den);
}

std::int64_t DivFloor(std::int64_t num, std::int64_t den) {
  std::int64_t q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

std::int64_t DivCeil(std::int64_t num, std::int64_t den) { return -DivFloor(-num, den); }

void RequirePositiveGain(const CalibrationRecord& cal) {
  if (cal.gain.raw <= 0) {
    throw ProtocolError(ErrorCode::kMalformedPayload, "calibration gain must be positive");
  }
}

std::string Format(Centi v) {
  const std::int32_t a = v.raw < 0 ? -v.raw : v.raw;
  std::string frac = std::to_string(a % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return (v.raw < 0 ? "-" : "") + std::to_string(a / 100) + "." + frac;
}

}  // namespace

Centi ApplyCalibrationUnchecked(Centi raw, const CalibrationRecord& cal) {
  RequirePositiveGain(cal);
  // gain[1e-6 degC/count] * raw[1e-2 count] -> 1e-8 degC; scale to 1e-2.
  const std::int64_t scaled = DivRound(std::int64_t{cal.gain.raw} * raw.raw, 1'000'000);
  return Centi::FromRaw(static_cast<std::int32_t>(scaled + cal.offset.raw));
}

Centi ApplyCalibration(Centi raw, const CalibrationRecord& cal) {
  const Centi t = ApplyCalibrationUnchecked(raw, cal);
  if (t < kBodyTempMin || t > kBodyTempMax) {
    throw ProtocolError(ErrorCode::kOutOfRange,
                        "calibrated temperature " + Format(t) +
                            " degC outside 25.00-45.00 (mis-calibrated probe?)");
  }
  return t;
}

Centi RawForTemperature(Centi celsius, const CalibrationRecord& cal) {
  RequirePositiveGain(cal);
  const std::int64_t delta = std::int64_t{celsius.raw} - cal.offset.raw;
  return Centi::FromRaw(static_cast<std::int32_t>(DivRound(delta * 1'000'000, cal.gain.raw)));
}

ChannelSpec CalibratedRawRange(const CalibrationRecord& cal) {
  RequirePositiveGain(cal);
  // Whole count c calibrates to gain*c/1e4 + offset (in 1e-2 degC).
  const std::int64_t lo =
      DivCeil((std::int64_t{kBodyTempMin.raw} - cal.offset.raw) * 10'000, cal.gain.raw);
  const std::int64_t hi =
      DivFloor((std::int64_t{kBodyTempMax.raw} - cal.offset.raw) * 10'000, cal.gain.raw);
  return ChannelSpec{UnitCode::kRawCounts, Centi::FromRaw(static_cast<std::int32_t>(lo * 100)),
                     Centi::FromRaw(static_cast<std::int32_t>(hi * 100))};
}

bool CalibrationCoversRange(const CalibrationRecord& cal, const ChannelSpec& channel) {
  if (cal.gain.raw <= 0) return false;
  const Centi lo = ApplyCalibrationUnchecked(channel.range_min, cal);
  const Centi hi = ApplyCalibrationUnchecked(channel.range_max, cal);
  return lo >= kBodyTempMin && hi <= kBodyTempMax;
}

}  // namespace inquirylab::proto
