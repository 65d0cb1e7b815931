// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <string_view>

#include "inquirylab/protocol/byte_stream.h"
#include "inquirylab/protocol/calibration.h"
#include "inquirylab/protocol/crc16.h"
#include "inquirylab/protocol/errors.h"
#include "inquirylab/protocol/frame.h"
#include "inquirylab/protocol/host_session.h"
#include "inquirylab/protocol/messages.h"
#include "support/frame_generators.h"

namespace inquirylab::proto {
namespace {

using testing::BitwiseCrc16;
using testing::RandomFrame;

std::vector<std::uint8_t> Bytes(std::string_view s) { return {s.begin(), s.end()}; }

// ---------------------------------------------------------------------------
// CRC

TEST(Crc16Test, EmptyInputIsInitialValue) { EXPECT_EQ(Crc16({}), 0xFFFF); }

TEST(Crc16Test, CheckValue) {
  const auto digits = Bytes("123456789");
  EXPECT_EQ(BitwiseCrc16(digits), 0x29B1);
  EXPECT_EQ(Crc16(digits), 0x29B1);
}

TEST(Crc16Test, AgreesWithBitwiseOracle) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto data = testing::RandomBytes(rng, rng() % 80);
    ASSERT_EQ(Crc16(data), BitwiseCrc16(data));
  }
}

TEST(Crc16Test, EverySingleBitFlipChangesCrc) {
  std::mt19937_64 rng(11);
  const auto sample = testing::RandomBytes(rng, 16);
  const std::uint16_t base = Crc16(sample);
  for (std::size_t byte = 0; byte < sample.size(); ++byte) {
    for (int bit = 0; bit < 8; ++bit) {
      auto flipped = sample;
      flipped[byte] ^= static_cast<std::uint8_t>(1u << bit);
      EXPECT_NE(Crc16(flipped), base) << "byte " << byte << " bit " << bit;
    }
  }
}

// ---------------------------------------------------------------------------
// Frame codec

TEST(FrameTest, EncodeIdentReq) {
  // CRC of 01 01 00 from the bitwise oracle.
  const std::vector<std::uint8_t> expected{0xAA, 0x55, 0x01, 0x01, 0x00, 0xC8, 0x9D};
  EXPECT_EQ(EncodeFrame(Frame{FrameType::kIdentReq, {}}), expected);
}

TEST(FrameTest, EncodeStop) {
  const std::vector<std::uint8_t> expected{0xAA, 0x55, 0x01, 0x04, 0x00, 0x37, 0x68};
  EXPECT_EQ(EncodeFrame(Frame{FrameType::kStop, {}}), expected);
}

TEST(FrameTest, EncodeStartCarriesPeriod) {
  const std::vector<std::uint8_t> expected{0xAA, 0x55, 0x01, 0x03, 0x02, 0x00, 0xC8, 0x16, 0xA5};
  EXPECT_EQ(EncodeFrame(Frame{FrameType::kStart, EncodeStart(std::chrono::milliseconds(200))}),
            expected);
}

TEST(FrameTest, OversizePayloadRejected) {
  Frame f{FrameType::kData, std::vector<std::uint8_t>(65, 0)};
  try {
    EncodeFrame(f);
    FAIL() << "expected oversize error";
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOversize);
  }
}

TEST(FrameTest, DecodeIdentReq) {
  const auto bytes = EncodeFrame(Frame{FrameType::kIdentReq, {}});
  const DecodeResult r = DecodeFrame(bytes);
  ASSERT_EQ(r.status, DecodeStatus::kFrame);
  EXPECT_EQ(r.frame->type, FrameType::kIdentReq);
  EXPECT_TRUE(r.frame->payload.empty());
  EXPECT_EQ(r.consumed, bytes.size());
}

TEST(FrameTest, DecodeSkipsGarbagePrefix) {
  std::vector<std::uint8_t> bytes{0x00, 0xAA, 0x13, 0x55, 0xFE};
  const auto frame = EncodeFrame(Frame{FrameType::kStop, {}});
  bytes.insert(bytes.end(), frame.begin(), frame.end());
  const DecodeResult r = DecodeFrame(bytes);
  ASSERT_EQ(r.status, DecodeStatus::kFrame);
  EXPECT_EQ(r.frame->type, FrameType::kStop);
  EXPECT_EQ(r.consumed, bytes.size());
}

TEST(FrameTest, PartialFrameNeedsMore) {
  const auto bytes = EncodeFrame(Frame{FrameType::kNack, {0x01, 0x05}});
  for (std::size_t n = 0; n < bytes.size(); ++n) {
    const DecodeResult r = DecodeFrame(std::span(bytes).first(n));
    EXPECT_EQ(r.status, DecodeStatus::kNeedMore) << n;
    EXPECT_EQ(r.consumed, 0u) << n;
  }
}

TEST(FrameTest, UnknownVersionIsProtocolErrorWithOffendingByte) {
  auto bytes = EncodeFrame(Frame{FrameType::kIdentReq, {}});
  bytes[2] = 0x02;
  const DecodeResult r = DecodeFrame(bytes);
  EXPECT_EQ(r.status, DecodeStatus::kProtocolError);
  EXPECT_EQ(r.offending_byte, 0x02);
  EXPECT_EQ(r.consumed, 1u);
}

TEST(FrameTest, UnknownFrameTypeIsProtocolErrorWithOffendingByte) {
  auto bytes = EncodeFrame(Frame{FrameType::kIdentReq, {}});
  bytes[3] = 0x09;
  const DecodeResult r = DecodeFrame(bytes);
  EXPECT_EQ(r.status, DecodeStatus::kProtocolError);
  EXPECT_EQ(r.offending_byte, 0x09);
}

TEST(FrameTest, BadCrcIsChecksumError) {
  auto bytes = EncodeFrame(Frame{FrameType::kStop, {}});
  bytes.back() ^= 0x01;
  EXPECT_EQ(DecodeFrame(bytes).status, DecodeStatus::kChecksumError);
}

TEST(FrameTest, PayloadShapeMismatchIsProtocolError) {
  // A well-formed, correctly checksummed STOP that carries a payload.
  std::vector<std::uint8_t> bytes{0xAA, 0x55, 0x01, 0x04, 0x01, 0x00};
  const std::uint16_t crc = BitwiseCrc16(std::span(bytes).subspan(2));
  bytes.push_back(static_cast<std::uint8_t>(crc >> 8));
  bytes.push_back(static_cast<std::uint8_t>(crc));
  const DecodeResult r = DecodeFrame(bytes);
  EXPECT_EQ(r.status, DecodeStatus::kProtocolError);
  EXPECT_EQ(r.offending_byte, 0x04);
}

TEST(FrameTest, RoundTripProperty) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    const Frame f = RandomFrame(rng);
    const auto bytes = EncodeFrame(f);
    const DecodeResult r = DecodeFrame(bytes);
    ASSERT_EQ(r.status, DecodeStatus::kFrame);
    ASSERT_EQ(*r.frame, f);
    ASSERT_EQ(EncodeFrame(*r.frame), bytes);
  }
}

TEST(FrameTest, ExhaustiveSingleByteCorruptionNeverYieldsAFrame) {
  std::mt19937_64 rng(99);
  proto::Frame reference;
  do {
    reference = RandomFrame(rng);
  } while (reference.type != FrameType::kIdentResp);
  const auto bytes = EncodeFrame(reference);
  for (std::size_t pos = 0; pos < bytes.size(); ++pos) {
    for (int v = 0; v < 256; ++v) {
      if (v == bytes[pos]) continue;
      auto corrupted = bytes;
      corrupted[pos] = static_cast<std::uint8_t>(v);
      const ScanResult scan = ScanFrames(corrupted);
      ASSERT_TRUE(scan.frames.empty()) << "pos " << pos << " value " << v;
    }
  }
}

TEST(FrameTest, ResynchronizesAcrossGarbage) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const Frame f = RandomFrame(rng);
    auto stream = testing::RandomBytes(rng, rng() % 40);
    const auto encoded = EncodeFrame(f);
    stream.insert(stream.end(), encoded.begin(), encoded.end());
    const auto tail = testing::RandomBytes(rng, rng() % 40);
    stream.insert(stream.end(), tail.begin(), tail.end());
    const ScanResult scan = ScanFrames(stream);
    ASSERT_EQ(scan.frames.size(), 1u) << "trial " << i;
    ASSERT_EQ(scan.frames.front(), f);
  }
}

TEST(FrameTest, IncrementalDecoderMatchesWholeBufferScan) {
  std::mt19937_64 rng(3);
  std::vector<std::uint8_t> stream;
  std::vector<Frame> sent;
  for (int i = 0; i < 50; ++i) {
    sent.push_back(RandomFrame(rng));
    const auto bytes = EncodeFrame(sent.back());
    stream.insert(stream.end(), bytes.begin(), bytes.end());
  }
  FrameDecoder decoder;
  std::vector<Frame> got;
  for (std::size_t i = 0; i < stream.size();) {
    const std::size_t chunk = std::min<std::size_t>(1 + rng() % 9, stream.size() - i);
    decoder.Feed(std::span(stream).subspan(i, chunk));
    i += chunk;
    for (DecodeResult r = decoder.Next(); r.status != DecodeStatus::kNeedMore; r = decoder.Next()) {
      ASSERT_EQ(r.status, DecodeStatus::kFrame);
      got.push_back(*r.frame);
    }
  }
  EXPECT_EQ(got, sent);
  EXPECT_EQ(decoder.buffered(), 0u);
}

// ---------------------------------------------------------------------------
// Typed payloads

SensorDescriptor DescriptorOf(SensorType type) {
  SensorDescriptor d;
  d.sensor_type = type;
  d.serial_number = 0x06000001;
  d.firmware = {1, 2};
  if (type == SensorType::kBodyTemp) {
    d.calibration = CalibrationRecord{Micro::FromRaw(10'000), Centi::FromRaw(2'000)};
  }
  d.channels = DefaultChannels(type, d.calibration);
  return d;
}

TEST(DescriptorTest, RoundTripsForEverySensorType) {
  for (SensorType type : kAllSensorTypes) {
    const SensorDescriptor d = DescriptorOf(type);
    const auto payload = EncodeDescriptor(d);
    EXPECT_LE(payload.size(), kMaxPayload);
    EXPECT_TRUE(PayloadShapeValid(FrameType::kIdentResp, payload));
    EXPECT_EQ(DecodeDescriptor(payload), d) << SensorName(type);
    EXPECT_EQ(static_cast<int>(d.channels.size()), ChannelCount(type));
  }
}

TEST(DescriptorTest, BodyTempChannelIsRawCountsCoveringTheOutputWindow) {
  const SensorDescriptor d = DescriptorOf(SensorType::kBodyTemp);
  ASSERT_EQ(d.channels.size(), 1u);
  EXPECT_EQ(d.channels[0].unit, UnitCode::kRawCounts);
  EXPECT_EQ(d.channels[0].range_min, Centi::FromDouble(500));
  EXPECT_EQ(d.channels[0].range_max, Centi::FromDouble(2500));
}

TEST(DescriptorTest, InvariantViolationsRejected) {
  SensorDescriptor no_cal = DescriptorOf(SensorType::kBodyTemp);
  no_cal.calibration.reset();
  EXPECT_THROW(ValidateDescriptor(no_cal), ProtocolError);

  SensorDescriptor extra_cal = DescriptorOf(SensorType::kHeartRate);
  extra_cal.calibration = CalibrationRecord{Micro::FromRaw(1), Centi::FromRaw(0)};
  EXPECT_THROW(ValidateDescriptor(extra_cal), ProtocolError);

  SensorDescriptor one_channel = DescriptorOf(SensorType::kTempHumidity);
  one_channel.channels.pop_back();
  EXPECT_THROW(ValidateDescriptor(one_channel), ProtocolError);

  SensorDescriptor inverted = DescriptorOf(SensorType::kVoc);
  std::swap(inverted.channels[0].range_min, inverted.channels[0].range_max);
  EXPECT_THROW(ValidateDescriptor(inverted), ProtocolError);
}

TEST(DescriptorTest, UnknownSensorCodeIsDecodeError) {
  auto payload = EncodeDescriptor(DescriptorOf(SensorType::kVoc));
  payload[0] = 0x07;
  try {
    DecodeDescriptor(payload);
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedPayload);
    EXPECT_EQ(e.offending_byte(), 0x07);
  }
}

TEST(DataTest, RoundTrip) {
  DataMessage msg{0x01000007, Measurement{SensorType::kTempHumidity, 1200,
                                          {Centi::FromDouble(22.5), Centi::FromDouble(-3.25)}}};
  const auto payload = EncodeData(msg);
  EXPECT_TRUE(PayloadShapeValid(FrameType::kData, payload));
  EXPECT_EQ(DecodeData(payload), msg);
}

TEST(DataTest, MeasurementOutsideChannelRangeRejected) {
  const SensorDescriptor d = DescriptorOf(SensorType::kHeartRate);
  Measurement ok{SensorType::kHeartRate, 0, {Centi::FromDouble(72)}};
  EXPECT_NO_THROW(ValidateMeasurement(ok, d));
  Measurement high{SensorType::kHeartRate, 0, {Centi::FromDouble(250)}};
  EXPECT_THROW(ValidateMeasurement(high, d), ProtocolError);
  Measurement two{SensorType::kHeartRate, 0, {Centi::FromDouble(72), Centi::FromDouble(72)}};
  EXPECT_THROW(ValidateMeasurement(two, d), ProtocolError);
}

TEST(StartTest, ZeroPeriodRejected) {
  EXPECT_THROW(DecodeStart(std::vector<std::uint8_t>{0x00, 0x00}), ProtocolError);
  EXPECT_EQ(DecodeStart(EncodeStart(std::chrono::milliseconds(400))).count(), 400);
}

// ---------------------------------------------------------------------------
// Calibration

const CalibrationRecord kNominal{Micro::FromRaw(10'000), Centi::FromRaw(2'000)};

TEST(CalibrationTest, NominalProbeReading) {
  EXPECT_EQ(ApplyCalibration(Centi::FromDouble(1700), kNominal), Centi::FromDouble(37.0));
}

TEST(CalibrationTest, BelowWindowIsOutOfRange) {
  try {
    ApplyCalibration(Centi::FromDouble(0), kNominal);
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfRange);
  }
  EXPECT_THROW(ApplyCalibration(Centi::FromDouble(2600), kNominal), ProtocolError);
}

TEST(CalibrationTest, NonPositiveGainRejected) {
  EXPECT_THROW(ApplyCalibration(Centi::FromDouble(1700), {Micro::FromRaw(0), Centi::FromRaw(2000)}),
               ProtocolError);
}

TEST(CalibrationTest, InverseRecoversTemperature) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const Centi t = Centi::FromRaw(2500 + static_cast<std::int32_t>(rng() % 2001));
    const CalibrationRecord cal{Micro::FromRaw(9'000 + static_cast<std::int32_t>(rng() % 3001)),
                                Centi::FromRaw(1'900 + static_cast<std::int32_t>(rng() % 201))};
    const Centi raw = RawForTemperature(t, cal);
    const Centi back = ApplyCalibrationUnchecked(raw, cal);
    EXPECT_LE(std::abs(back.raw - t.raw), 1) << t.raw;
  }
}

TEST(CalibrationTest, StrictlyIncreasingOverWholeCounts) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const CalibrationRecord cal{Micro::FromRaw(10'000 + static_cast<std::int32_t>(rng() % 2001)),
                                Centi::FromRaw(1'950 + static_cast<std::int32_t>(rng() % 101))};
    const ChannelSpec range = CalibratedRawRange(cal);
    ASSERT_TRUE(CalibrationCoversRange(cal, range));
    Centi prev = ApplyCalibration(range.range_min, cal);
    for (std::int32_t raw = range.range_min.raw + 100; raw <= range.range_max.raw; raw += 100) {
      const Centi t = ApplyCalibration(Centi::FromRaw(raw), cal);
      ASSERT_GT(t, prev) << raw;
      prev = t;
    }
  }
}

// ---------------------------------------------------------------------------
// Host session against a silent endpoint

TEST(HostSessionTest, SilentEndpointIsDeviceAbsentAfterTimeout) {
  TcpListener listener(Endpoint{"127.0.0.1", 0});
  HostSession host(TcpStream::Connect(listener.local_endpoint(), std::chrono::milliseconds(500)));
  const auto start = std::chrono::steady_clock::now();
  try {
    host.Handshake();
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDeviceAbsent);
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_GE(elapsed, std::chrono::milliseconds(490));
  EXPECT_LT(elapsed, std::chrono::milliseconds(1500));
}

TEST(EndpointTest, Parse) {
  EXPECT_EQ(Endpoint::Parse("127.0.0.1:8080"), (Endpoint{"127.0.0.1", 8080}));
  EXPECT_THROW(Endpoint::Parse("nonsense"), std::invalid_argument);
}

}  // namespace
}  // namespace inquirylab::proto
