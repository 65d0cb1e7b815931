// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <set>
#include <system_error>

#include "inquirylab/protocol/calibration.h"
#include "inquirylab/protocol/errors.h"
#include "inquirylab/protocol/host_session.h"
#include "inquirylab/sim/device_farm.h"
#include "inquirylab/sim/virtual_device.h"

namespace inquirylab::sim {
namespace {

using namespace std::chrono_literals;
using proto::Centi;
using proto::HostSession;
using proto::SensorType;
using proto::StreamEvent;

HostSession Connect(const VirtualDevice& dev) {
  return HostSession(proto::TcpStream::Connect(dev.endpoint(), 500ms));
}

std::vector<proto::Measurement> Collect(HostSession& host, int n,
                                        std::chrono::milliseconds period = 200ms) {
  host.Start(period);
  std::vector<proto::Measurement> out;
  while (static_cast<int>(out.size()) < n) {
    const StreamEvent ev = host.Next(2s);
    if (ev.kind != StreamEvent::Kind::kMeasurement) {
      ADD_FAILURE() << "unexpected stream event " << static_cast<int>(ev.kind);
      break;
    }
    out.push_back(ev.data.measurement);
  }
  host.Stop();
  return out;
}

DeviceConfig Fast(DeviceConfig cfg) {
  cfg.time_scale = 50.0;
  return cfg;
}

TEST(VirtualDeviceTest, HeartRateHandshake) {
  VirtualDevice dev(DefaultDeviceConfig(SensorType::kHeartRate, 0x06000001, 1));
  HostSession host = Connect(dev);
  const auto desc = host.Handshake();
  EXPECT_EQ(static_cast<int>(desc.sensor_type), 0x06);
  ASSERT_EQ(desc.channels.size(), 1u);
  EXPECT_EQ(desc.channels[0].unit, proto::UnitCode::kBpm);
  EXPECT_EQ(desc.serial_number, 0x06000001u);
  EXPECT_FALSE(desc.calibration.has_value());
}

TEST(VirtualDeviceTest, BodyTempCarriesCalibrationAndCalibratesIntoWindow) {
  VirtualDevice dev(Fast(DefaultDeviceConfig(SensorType::kBodyTemp, 0x05000001, 9)));
  HostSession host = Connect(dev);
  const auto desc = host.Handshake();
  ASSERT_TRUE(desc.calibration.has_value());
  EXPECT_EQ(*desc.calibration, *dev.config().calibration);
  for (const auto& m : Collect(host, 25)) {
    const Centi t = proto::ApplyCalibration(m.values.at(0), *desc.calibration);
    EXPECT_GE(t, proto::kBodyTempMin);
    EXPECT_LE(t, proto::kBodyTempMax);
  }
}

TEST(VirtualDeviceTest, ConstantModelEmitsBaseline) {
  DeviceConfig cfg = Fast(DefaultDeviceConfig(SensorType::kHeartRate, 42, 1));
  cfg.signal = SignalModel{{Centi::FromDouble(72)}, {Centi::FromRaw(0)}, SignalMode::kConstant};
  VirtualDevice dev(cfg);
  HostSession host = Connect(dev);
  host.Handshake();
  for (const auto& m : Collect(host, 20)) EXPECT_EQ(m.values.at(0), Centi::FromDouble(72.0));
}

TEST(VirtualDeviceTest, SinusoidStaysWithinModelBound) {
  DeviceConfig cfg = Fast(DefaultDeviceConfig(SensorType::kTempHumidity, 7, 3));
  VirtualDevice dev(cfg);
  HostSession host = Connect(dev);
  host.Handshake();
  for (const auto& m : Collect(host, 40)) {
    for (std::size_t ch = 0; ch < 2; ++ch) {
      EXPECT_LE(std::abs(m.values[ch].raw - cfg.signal.baseline[ch].raw), cfg.signal.amplitude[ch].raw);
    }
  }
  EXPECT_EQ(cfg.signal.baseline[0], Centi::FromDouble(22.0));
  EXPECT_EQ(cfg.signal.baseline[1], Centi::FromDouble(45.0));
}

TEST(VirtualDeviceTest, SameSeedSameSequence) {
  auto run = [] {
    VirtualDevice dev(Fast(DefaultDeviceConfig(SensorType::kVoc, 3, 77)));
    HostSession host = Connect(dev);
    host.Handshake();
    return Collect(host, 30);
  };
  const auto a = run();
  const auto b = run();
  EXPECT_EQ(a, b);
  // Timestamps advance by the full simulated period regardless of pacing.
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].timestamp_ms, 200u * i);
}

TEST(VirtualDeviceTest, RestartingTheStreamReplaysTheSequence) {
  VirtualDevice dev(Fast(DefaultDeviceConfig(SensorType::kConductance, 5, 5)));
  HostSession host = Connect(dev);
  host.Handshake();
  const auto first = Collect(host, 10);
  host.Handshake();  // drains anything still in flight
  const auto second = Collect(host, 10);
  EXPECT_EQ(first, second);
}

TEST(VirtualDeviceTest, EmittedFramesAlwaysDecode) {
  VirtualDevice dev(Fast(DefaultDeviceConfig(SensorType::kLightUv, 2, 2)));
  HostSession host = Connect(dev);
  host.Handshake();
  Collect(host, 50);
  EXPECT_EQ(host.stats().checksum_errors, 0u);
  EXPECT_EQ(host.stats().protocol_errors, 0u);
}

TEST(VirtualDeviceTest, InvalidConfigsRejected) {
  DeviceConfig no_cal = DefaultDeviceConfig(SensorType::kBodyTemp, 1, 1);
  no_cal.calibration.reset();
  EXPECT_THROW(VirtualDevice{no_cal}, std::invalid_argument);

  DeviceConfig wide = DefaultDeviceConfig(SensorType::kHeartRate, 1, 1);
  wide.signal.amplitude = {Centi::FromDouble(60)};  // 72 - 60 < 30 bpm floor
  EXPECT_THROW(VirtualDevice{wide}, std::invalid_argument);
}

TEST(VirtualDeviceTest, AddressInUseIsBindError) {
  VirtualDevice first(DefaultDeviceConfig(SensorType::kVoc, 1, 1));
  DeviceConfig cfg = DefaultDeviceConfig(SensorType::kVoc, 2, 1);
  cfg.bind = first.endpoint();
  EXPECT_THROW(VirtualDevice{cfg}, std::system_error);
}

TEST(VirtualDeviceTest, UnexpectedFrameFromHostIsNacked) {
  VirtualDevice dev(DefaultDeviceConfig(SensorType::kVoc, 1, 1));
  auto stream = proto::TcpStream::Connect(dev.endpoint(), 500ms);
  stream->Write(proto::EncodeFrame(proto::Frame{proto::FrameType::kNack, {0x01, 0x00}}));
  std::array<std::uint8_t, 64> buf{};
  proto::FrameDecoder decoder;
  const auto deadline = std::chrono::steady_clock::now() + 1s;
  std::optional<proto::Frame> reply;
  while (!reply && std::chrono::steady_clock::now() < deadline) {
    decoder.Feed(std::span(buf).first(stream->Read(buf, 100ms)));
    const auto r = decoder.Next();
    if (r.status == proto::DecodeStatus::kFrame) reply = r.frame;
  }
  ASSERT_TRUE(reply.has_value());
  EXPECT_EQ(reply->type, proto::FrameType::kNack);
  EXPECT_EQ(proto::DecodeNack(reply->payload).offending_byte, 0x06);
}

// ---------------------------------------------------------------------------
// Faults

TEST(FaultTest, CorruptCrcYieldsChecksumErrorsAndNoMeasurements) {
  VirtualDevice dev(Fast(DefaultDeviceConfig(SensorType::kHeartRate, 1, 1)));
  HostSession host = Connect(dev);
  host.Handshake();
  dev.SetFault(Fault::kCorruptCrc, true);
  host.Start();
  int checksum_errors = 0;
  for (int i = 0; i < 20; ++i) {
    const StreamEvent ev = host.Next(1s);
    ASSERT_NE(ev.kind, StreamEvent::Kind::kMeasurement);
    if (ev.kind == StreamEvent::Kind::kChecksumError) ++checksum_errors;
  }
  EXPECT_EQ(checksum_errors, 20);
  EXPECT_EQ(host.stats().measurements, 0u);
}

TEST(FaultTest, MuteTimesOut) {
  VirtualDevice dev(DefaultDeviceConfig(SensorType::kHeartRate, 1, 1));
  HostSession host = Connect(dev);
  host.Handshake();
  dev.SetFault(Fault::kMute, true);
  host.Start();
  EXPECT_EQ(host.Next(700ms).kind, StreamEvent::Kind::kTimeout);
  dev.SetFault(Fault::kMute, false);
  EXPECT_EQ(host.Next(700ms).kind, StreamEvent::Kind::kMeasurement);
}

TEST(FaultTest, SlowDoublesThePeriod) {
  VirtualDevice dev(DefaultDeviceConfig(SensorType::kHeartRate, 1, 1));
  dev.SetFault(Fault::kSlow, true);
  HostSession host = Connect(dev);
  host.Handshake();
  host.Start(200ms);
  std::vector<std::chrono::steady_clock::time_point> arrivals;
  std::vector<std::uint32_t> stamps;
  for (int i = 0; i < 6; ++i) {
    const StreamEvent ev = host.Next(2s);
    ASSERT_EQ(ev.kind, StreamEvent::Kind::kMeasurement);
    arrivals.push_back(std::chrono::steady_clock::now());
    stamps.push_back(ev.data.measurement.timestamp_ms);
  }
  for (std::size_t i = 1; i < arrivals.size(); ++i) {
    const auto gap = std::chrono::duration_cast<std::chrono::milliseconds>(arrivals[i] - arrivals[i - 1]);
    EXPECT_NEAR(static_cast<double>(gap.count()), 400.0, 80.0) << "gap " << i;
    EXPECT_EQ(stamps[i] - stamps[i - 1], 400u);
  }
}

// ---------------------------------------------------------------------------
// Farm

TEST(DeviceFarmTest, MinimalKitHasOneDevicePerType) {
  DeviceFarm farm = SpawnClassKit({.count_per_type = 1});
  const auto devices = farm.List();
  ASSERT_EQ(devices.size(), 6u);
  std::set<SensorType> types;
  for (const auto& d : devices) types.insert(d.sensor_type);
  EXPECT_EQ(types.size(), 6u);
}

TEST(DeviceFarmTest, SerialsAndEndpointsAreDistinct) {
  DeviceFarm farm = SpawnClassKit({.count_per_type = 3});
  const auto devices = farm.List();
  ASSERT_EQ(devices.size(), 18u);
  std::set<std::uint32_t> serials;
  std::set<std::uint16_t> ports;
  for (const auto& d : devices) {
    serials.insert(d.serial_number);
    ports.insert(d.endpoint.port);
  }
  EXPECT_EQ(serials.size(), 18u);
  EXPECT_EQ(ports.size(), 18u);
}

TEST(DeviceFarmTest, UnknownDeviceIsNotFound) {
  DeviceFarm farm = SpawnClassKit({.count_per_type = 1});
  EXPECT_THROW(farm.InjectFault("999", Fault::kMute), DeviceNotFound);
}

TEST(DeviceFarmTest, ZeroCountRejected) {
  EXPECT_THROW(SpawnClassKit({.count_per_type = 0}), std::invalid_argument);
}

TEST(DeviceFarmTest, StoppingClosesEndpoints) {
  DeviceFarm farm = SpawnClassKit({.count_per_type = 1});
  const auto devices = farm.List();
  farm.StopAll();
  EXPECT_EQ(farm.size(), 0u);
  for (const auto& d : devices) {
    EXPECT_THROW(proto::TcpStream::Connect(d.endpoint, 200ms), proto::ProtocolError);
  }
}

}  // namespace
}  // namespace inquirylab::sim
