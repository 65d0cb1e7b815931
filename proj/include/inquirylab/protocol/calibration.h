// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_PROTOCOL_CALIBRATION_H_
#define INQUIRYLAB_PROTOCOL_CALIBRATION_H_

#include "inquirylab/protocol/messages.h"

namespace inquirylab::proto {

// Physical output window of the body temperature probe.
inline constexpr Centi kBodyTempMin = Centi::FromRaw(2500);
inline constexpr Centi kBodyTempMax = Centi::FromRaw(4500);

// gain * raw + offset, rounded half away from zero to 0.01 degC. `raw` is a
// raw ADC count carried at x100 like every other channel value.
// Throws ProtocolError(kOutOfRange) when the result leaves 25.00-45.00 degC,
// and ProtocolError(kMalformedPayload) when gain is not positive.
Centi ApplyCalibration(Centi raw, const CalibrationRecord& cal);

// Same arithmetic without the window check.
Centi ApplyCalibrationUnchecked(Centi raw, const CalibrationRecord& cal);

// Raw value (x100 counts, rounded) that calibrates to `celsius`.
Centi RawForTemperature(Centi celsius, const CalibrationRecord& cal);

// Widest whole-count raw channel whose every value calibrates into the window.
ChannelSpec CalibratedRawRange(const CalibrationRecord& cal);

bool CalibrationCoversRange(const CalibrationRecord& cal, const ChannelSpec& channel);

}  // namespace inquirylab::proto

#endif  // INQUIRYLAB_PROTOCOL_CALIBRATION_H_
