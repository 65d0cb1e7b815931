// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Typed payloads carried inside frames, and their byte layouts.
//
// All multi-byte integers are big-endian. Fixed-point fields are signed
// 32-bit two's complement.
//
//   IDENT_RESP  type(1) serial(4) fw_major(1) fw_minor(1) channel_count(1)
//               { unit(1) range_min(4) range_max(4) } x channel_count
//               cal_flag(1) [ gain_x1e6(4) offset_x100(4) ]
//   START       period_ms(2)
//   DATA        type(1) serial(4) timestamp_ms(4) value_count(1)
//               { value_x100(4) } x value_count
//   NACK        reason(1) offending_byte(1)
//   IDENT_REQ, STOP carry no payload.

#ifndef INQUIRYLAB_PROTOCOL_MESSAGES_H_
#define INQUIRYLAB_PROTOCOL_MESSAGES_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "inquirylab/protocol/fixed_point.h"

namespace inquirylab::proto {

enum class SensorType : std::uint8_t {
  kTempHumidity = 0x01,
  kLightUv = 0x02,
  kVoc = 0x03,
  kConductance = 0x04,
  kBodyTemp = 0x05,
  kHeartRate = 0x06,
};

inline constexpr SensorType kAllSensorTypes[] = {
    SensorType::kTempHumidity, SensorType::kLightUv,   SensorType::kVoc,
    SensorType::kConductance,  SensorType::kBodyTemp, SensorType::kHeartRate,
};

std::optional<SensorType> SensorTypeFromCode(std::uint8_t code);
int ChannelCount(SensorType type);
// Stable snake_case name used in JSON and URLs ("heart_rate").
std::string_view SensorName(SensorType type);
std::optional<SensorType> SensorTypeFromName(std::string_view name);

enum class UnitCode : std::uint8_t {
  kCelsius = 0x01,
  kRelativeHumidity = 0x02,
  kLux = 0x03,
  kUvIndex = 0x04,
  kPpb = 0x05,
  kMicroSiemens = 0x06,
  kBpm = 0x07,
  kRawCounts = 0x08,
};

std::optional<UnitCode> UnitCodeFromByte(std::uint8_t code);
std::string_view UnitSymbol(UnitCode unit);

struct ChannelSpec {
  UnitCode unit = UnitCode::kRawCounts;
  Centi range_min;
  Centi range_max;

  bool Contains(Centi v) const { return range_min <= v && v <= range_max; }
  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

struct CalibrationRecord {
  Micro gain;    // degrees C per raw count
  Centi offset;  // degrees C

  friend bool operator==(const CalibrationRecord&, const CalibrationRecord&) = default;
};

struct FirmwareVersion {
  std::uint8_t major = 1;
  std::uint8_t minor = 0;

  friend bool operator==(const FirmwareVersion&, const FirmwareVersion&) = default;
};

struct SensorDescriptor {
  SensorType sensor_type = SensorType::kTempHumidity;
  std::uint32_t serial_number = 0;
  FirmwareVersion firmware;
  std::vector<ChannelSpec> channels;
  std::optional<CalibrationRecord> calibration;

  friend bool operator==(const SensorDescriptor&, const SensorDescriptor&) = default;
};

// Default channel layout for a sensor type. BodyTemp gets its range from the
// calibration so that every in-range raw count maps into the output window.
std::vector<ChannelSpec> DefaultChannels(SensorType type,
                                         const std::optional<CalibrationRecord>& cal = {});

// Throws ProtocolError(kMalformedPayload) naming the first broken invariant.
void ValidateDescriptor(const SensorDescriptor& desc);

struct Measurement {
  SensorType sensor_type = SensorType::kTempHumidity;
  std::uint32_t timestamp_ms = 0;
  std::vector<Centi> values;

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

// Throws ProtocolError(kMalformedPayload) when the measurement does not fit
// the descriptor (type, channel count, ranges).
void ValidateMeasurement(const Measurement& m, const SensorDescriptor& desc);

// A DATA frame: the measurement plus the emitting device's serial.
struct DataMessage {
  std::uint32_t serial_number = 0;
  Measurement measurement;

  friend bool operator==(const DataMessage&, const DataMessage&) = default;
};

enum class NackReason : std::uint8_t {
  kUnexpectedFrame = 0x01,
  kMalformedRequest = 0x02,
  kBadState = 0x03,
};

struct Nack {
  NackReason reason = NackReason::kUnexpectedFrame;
  std::uint8_t offending_byte = 0;

  friend bool operator==(const Nack&, const Nack&) = default;
};

inline constexpr std::chrono::milliseconds kDefaultStreamPeriod{200};

std::vector<std::uint8_t> EncodeDescriptor(const SensorDescriptor& desc);
SensorDescriptor DecodeDescriptor(std::span<const std::uint8_t> payload);

std::vector<std::uint8_t> EncodeStart(std::chrono::milliseconds period);
std::chrono::milliseconds DecodeStart(std::span<const std::uint8_t> payload);

std::vector<std::uint8_t> EncodeData(const DataMessage& msg);
DataMessage DecodeData(std::span<const std::uint8_t> payload);

std::vector<std::uint8_t> EncodeNack(const Nack& nack);
Nack DecodeNack(std::span<const std::uint8_t> payload);

}  // namespace inquirylab::proto

#endif  // INQUIRYLAB_PROTOCOL_MESSAGES_H_
