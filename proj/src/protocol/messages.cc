// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/protocol/messages.h"

#include <string>

#include "inquirylab/protocol/calibration.h"
#include "inquirylab/protocol/errors.h"
#include "inquirylab/protocol/frame.h"

namespace inquirylab::proto {
namespace {

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void PutI32(std::vector<std::uint8_t>& out, std::int32_t v) {
  PutU32(out, static_cast<std::uint32_t>(v));
}

[[noreturn]] void Malformed(const std::string& what) {
  throw ProtocolError(ErrorCode::kMalformedPayload, what);
}

// Bounds-checked big-endian reader over a payload.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t U8() {
    Need(1);
    return bytes_[pos_++];
  }
  std::uint16_t U16() {
    Need(2);
    const auto v = static_cast<std::uint16_t>((bytes_[pos_] << 8) | bytes_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint32_t U32() {
    Need(4);
    const std::uint32_t v = (std::uint32_t{bytes_[pos_]} << 24) |
                            (std::uint32_t{bytes_[pos_ + 1]} << 16) |
                            (std::uint32_t{bytes_[pos_ + 2]} << 8) |
                            std::uint32_t{bytes_[pos_ + 3]};
    pos_ += 4;
    return v;
  }
  std::int32_t I32() { return static_cast<std::int32_t>(U32()); }

  void ExpectEnd() const {
    if (pos_ != bytes_.size()) Malformed("trailing bytes in payload");
  }

 private:
  void Need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) Malformed("payload truncated");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

SensorType ReadSensorType(Reader& r) {
  const std::uint8_t code = r.U8();
  const auto type = SensorTypeFromCode(code);
  if (!type) {
    throw ProtocolError(ErrorCode::kMalformedPayload,
                        "unknown sensor type code " + std::to_string(code), code);
  }
  return *type;
}

}  // namespace

std::optional<SensorType> SensorTypeFromCode(std::uint8_t code) {
  if (code >= 0x01 && code <= 0x06) return static_cast<SensorType>(code);
  return std::nullopt;
}

int ChannelCount(SensorType type) {
  return (type == SensorType::kTempHumidity || type == SensorType::kLightUv) ? 2 : 1;
}

std::string_view SensorName(SensorType type) {
  switch (type) {
    case SensorType::kTempHumidity: return "temp_humidity";
    case SensorType::kLightUv: return "light_uv";
    case SensorType::kVoc: return "voc";
    case SensorType::kConductance: return "conductance";
    case SensorType::kBodyTemp: return "body_temp";
    case SensorType::kHeartRate: return "heart_rate";
  }
  return "unknown";
}

std::optional<SensorType> SensorTypeFromName(std::string_view name) {
  for (SensorType t : kAllSensorTypes) {
    if (SensorName(t) == name) return t;
  }
  return std::nullopt;
}

std::optional<UnitCode> UnitCodeFromByte(std::uint8_t code) {
  if (code >= 0x01 && code <= 0x08) return static_cast<UnitCode>(code);
  return std::nullopt;
}

std::string_view UnitSymbol(UnitCode unit) {
  switch (unit) {
    case UnitCode::kCelsius: return "degC";
    case UnitCode::kRelativeHumidity: return "%RH";
    case UnitCode::kLux: return "lux";
    case UnitCode::kUvIndex: return "UVI";
    case UnitCode::kPpb: return "ppb";
    case UnitCode::kMicroSiemens: return "uS";
    case UnitCode::kBpm: return "bpm";
    case UnitCode::kRawCounts: return "counts";
  }
  return "?";
}

std::vector<ChannelSpec> DefaultChannels(SensorType type,
                                         const std::optional<CalibrationRecord>& cal) {
  auto c = [](UnitCode u, double lo, double hi) {
    return ChannelSpec{u, Centi::FromDouble(lo), Centi::FromDouble(hi)};
  };
  switch (type) {
    case SensorType::kTempHumidity:
      return {c(UnitCode::kCelsius, -20, 60), c(UnitCode::kRelativeHumidity, 0, 100)};
    case SensorType::kLightUv:
      return {c(UnitCode::kLux, 0, 100000), c(UnitCode::kUvIndex, 0, 12)};
    case SensorType::kVoc:
      return {c(UnitCode::kPpb, 0, 60000)};
    case SensorType::kConductance:
      return {c(UnitCode::kMicroSiemens, 0, 2000)};
    case SensorType::kHeartRate:
      return {c(UnitCode::kBpm, 30, 220)};
    case SensorType::kBodyTemp:
      if (cal) return {CalibratedRawRange(*cal)};
      return {c(UnitCode::kRawCounts, 500, 2500)};
  }
  return {};
}

void ValidateDescriptor(const SensorDescriptor& desc) {
  const int expected = ChannelCount(desc.sensor_type);
  if (static_cast<int>(desc.channels.size()) != expected) {
    Malformed(std::string(SensorName(desc.sensor_type)) + " declares " +
              std::to_string(expected) + " channel(s), descriptor has " +
              std::to_string(desc.channels.size()));
  }
  for (const ChannelSpec& ch : desc.channels) {
    if (!(ch.range_min < ch.range_max)) Malformed("channel range_min must be below range_max");
  }
  const bool is_body_temp = desc.sensor_type == SensorType::kBodyTemp;
  if (is_body_temp != desc.calibration.has_value()) {
    Malformed(is_body_temp ? "body temperature descriptor lacks calibration"
                           : "only body temperature descriptors carry calibration");
  }
  for (const ChannelSpec& ch : desc.channels) {
    const bool raw = ch.unit == UnitCode::kRawCounts;
    if (raw != is_body_temp) {
      Malformed(is_body_temp ? "body temperature channel must report raw counts"
                             : "raw counts are reserved for body temperature");
    }
  }
  if (desc.calibration) {
    if (desc.calibration->gain.raw <= 0) Malformed("calibration gain must be positive");
    const ChannelSpec& ch = desc.channels.front();
    if (!CalibrationCoversRange(*desc.calibration, ch)) {
      Malformed("calibration maps the channel range outside 25.00-45.00 degC");
    }
  }
}

void ValidateMeasurement(const Measurement& m, const SensorDescriptor& desc) {
  if (m.sensor_type != desc.sensor_type) Malformed("measurement sensor type differs from descriptor");
  if (m.values.size() != desc.channels.size()) Malformed("measurement value count differs from channel count");
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (!desc.channels[i].Contains(m.values[i])) {
      Malformed("value on channel " + std::to_string(i) + " outside channel range");
    }
  }
}

std::vector<std::uint8_t> EncodeDescriptor(const SensorDescriptor& desc) {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(desc.sensor_type));
  PutU32(out, desc.serial_number);
  out.push_back(desc.firmware.major);
  out.push_back(desc.firmware.minor);
  out.push_back(static_cast<std::uint8_t>(desc.channels.size()));
  for (const ChannelSpec& ch : desc.channels) {
    out.push_back(static_cast<std::uint8_t>(ch.unit));
    PutI32(out, ch.range_min.raw);
    PutI32(out, ch.range_max.raw);
  }
  out.push_back(desc.calibration ? 1 : 0);
  if (desc.calibration) {
    PutI32(out, desc.calibration->gain.raw);
    PutI32(out, desc.calibration->offset.raw);
  }
  return out;
}

SensorDescriptor DecodeDescriptor(std::span<const std::uint8_t> payload) {
  Reader r(payload);
  SensorDescriptor desc;
  desc.sensor_type = ReadSensorType(r);
  desc.serial_number = r.U32();
  desc.firmware.major = r.U8();
  desc.firmware.minor = r.U8();
  const std::uint8_t channels = r.U8();
  if (channels < 1 || channels > 2) Malformed("channel count must be 1 or 2");
  for (std::uint8_t i = 0; i < channels; ++i) {
    const std::uint8_t unit_byte = r.U8();
    const auto unit = UnitCodeFromByte(unit_byte);
    if (!unit) {
      throw ProtocolError(ErrorCode::kMalformedPayload,
                          "unknown unit code " + std::to_string(unit_byte), unit_byte);
    }
    ChannelSpec ch{*unit, Centi::FromRaw(r.I32()), Centi::FromRaw(r.I32())};
    desc.channels.push_back(ch);
  }
  const std::uint8_t flag = r.U8();
  if (flag > 1) Malformed("calibration flag must be 0 or 1");
  if (flag == 1) {
    CalibrationRecord cal;
    cal.gain = Micro::FromRaw(r.I32());
    cal.offset = Centi::FromRaw(r.I32());
    desc.calibration = cal;
  }
  r.ExpectEnd();
  ValidateDescriptor(desc);
  return desc;
}

std::vector<std::uint8_t> EncodeStart(std::chrono::milliseconds period) {
  if (period.count() <= 0 || period.count() > 0xFFFF) {
    Malformed("stream period must be 1-65535 ms");
  }
  std::vector<std::uint8_t> out;
  PutU16(out, static_cast<std::uint16_t>(period.count()));
  return out;
}

std::chrono::milliseconds DecodeStart(std::span<const std::uint8_t> payload) {
  Reader r(payload);
  const std::uint16_t period = r.U16();
  r.ExpectEnd();
  if (period == 0) Malformed("stream period must be non-zero");
  return std::chrono::milliseconds(period);
}

std::vector<std::uint8_t> EncodeData(const DataMessage& msg) {
  const auto& m = msg.measurement;
  if (m.values.empty() || m.values.size() > 2) Malformed("DATA carries 1 or 2 values");
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(m.sensor_type));
  PutU32(out, msg.serial_number);
  PutU32(out, m.timestamp_ms);
  out.push_back(static_cast<std::uint8_t>(m.values.size()));
  for (Centi v : m.values) PutI32(out, v.raw);
  return out;
}

DataMessage DecodeData(std::span<const std::uint8_t> payload) {
  Reader r(payload);
  DataMessage msg;
  msg.measurement.sensor_type = ReadSensorType(r);
  msg.serial_number = r.U32();
  msg.measurement.timestamp_ms = r.U32();
  const std::uint8_t count = r.U8();
  if (count < 1 || count > 2) Malformed("DATA carries 1 or 2 values");
  for (std::uint8_t i = 0; i < count; ++i) msg.measurement.values.push_back(Centi::FromRaw(r.I32()));
  r.ExpectEnd();
  return msg;
}

std::vector<std::uint8_t> EncodeNack(const Nack& nack) {
  return {static_cast<std::uint8_t>(nack.reason), nack.offending_byte};
}

Nack DecodeNack(std::span<const std::uint8_t> payload) {
  Reader r(payload);
  Nack n;
  n.reason = static_cast<NackReason>(r.U8());
  n.offending_byte = r.U8();
  r.ExpectEnd();
  return n;
}

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOversize: return "oversize";
    case ErrorCode::kChecksum: return "checksum";
    case ErrorCode::kBadVersion: return "bad-version";
    case ErrorCode::kUnknownFrameType: return "unknown-frame-type";
    case ErrorCode::kMalformedPayload: return "malformed-payload";
    case ErrorCode::kDeviceAbsent: return "device-absent";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kTransport: return "transport";
    case ErrorCode::kNack: return "nack";
  }
  return "unknown";
}

}  // namespace inquirylab::proto
