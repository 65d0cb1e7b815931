// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/sim/virtual_device.h"

#include <poll.h>
#include <sys/eventfd.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <stdexcept>
#include <string>
#include <system_error>

#include "inquirylab/protocol/calibration.h"
#include "inquirylab/protocol/errors.h"
#include "inquirylab/protocol/frame.h"

namespace inquirylab::sim {

using proto::Centi;
using proto::SensorType;

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Centi C(double v) { return Centi::FromDouble(v); }

}  // namespace

DeviceConfig DefaultDeviceConfig(SensorType type, std::uint32_t serial, std::uint64_t seed) {
  DeviceConfig cfg;
  cfg.sensor_type = type;
  cfg.serial_number = serial;
  cfg.jitter_seed = SplitMix64(seed ^ (std::uint64_t{serial} << 20));
  cfg.signal.mode = SignalMode::kSinusoidDrift;
  switch (type) {
    case SensorType::kTempHumidity:
      cfg.signal.baseline = {C(22.0), C(45.0)};
      cfg.signal.amplitude = {C(1.5), C(5.0)};
      break;
    case SensorType::kLightUv:
      cfg.signal.baseline = {C(450.0), C(2.0)};
      cfg.signal.amplitude = {C(100.0), C(1.0)};
      break;
    case SensorType::kVoc:
      cfg.signal.baseline = {C(250.0)};
      cfg.signal.amplitude = {C(80.0)};
      break;
    case SensorType::kConductance:
      cfg.signal.baseline = {C(120.0)};
      cfg.signal.amplitude = {C(40.0)};
      break;
    case SensorType::kHeartRate:
      cfg.signal.baseline = {C(72.0)};
      cfg.signal.amplitude = {C(8.0)};
      break;
    case SensorType::kBodyTemp: {
      // Factory calibration scatters a little from unit to unit.
      const std::uint64_t h = SplitMix64(cfg.jitter_seed);
      proto::CalibrationRecord cal;
      cal.gain = proto::Micro::FromRaw(10'000 + static_cast<std::int32_t>(h % 201));
      cal.offset = Centi::FromRaw(2'000 - static_cast<std::int32_t>((h >> 16) % 51));
      cfg.calibration = cal;
      const Centi base = proto::RawForTemperature(C(36.8), cal);
      cfg.signal.baseline = {base};
      cfg.signal.amplitude = {Centi::FromRaw(proto::RawForTemperature(C(37.2), cal).raw - base.raw)};
      break;
    }
  }
  return cfg;
}

proto::SensorDescriptor DescriptorFor(const DeviceConfig& config) {
  proto::SensorDescriptor d;
  d.sensor_type = config.sensor_type;
  d.serial_number = config.serial_number;
  d.firmware = {1, 2};
  d.channels = proto::DefaultChannels(config.sensor_type, config.calibration);
  d.calibration = config.calibration;
  return d;
}

void ValidateConfig(const DeviceConfig& config) {
  const bool body = config.sensor_type == SensorType::kBodyTemp;
  if (body != config.calibration.has_value()) {
    throw std::invalid_argument("calibration must be present exactly for body temperature devices");
  }
  if (!(config.time_scale > 0.0)) throw std::invalid_argument("time_scale must be positive");
  const proto::SensorDescriptor desc = DescriptorFor(config);
  try {
    proto::ValidateDescriptor(desc);
  } catch (const proto::ProtocolError& e) {
    throw std::invalid_argument(e.what());
  }
  const auto& sig = config.signal;
  if (sig.baseline.size() != desc.channels.size() || sig.amplitude.size() != desc.channels.size()) {
    throw std::invalid_argument("signal model needs one baseline and amplitude per channel");
  }
  for (std::size_t i = 0; i < desc.channels.size(); ++i) {
    if (sig.amplitude[i].raw < 0) throw std::invalid_argument("amplitude must be non-negative");
    const Centi lo = Centi::FromRaw(sig.baseline[i].raw - sig.amplitude[i].raw);
    const Centi hi = Centi::FromRaw(sig.baseline[i].raw + sig.amplitude[i].raw);
    if (!desc.channels[i].Contains(lo) || !desc.channels[i].Contains(hi)) {
      throw std::invalid_argument("baseline +/- amplitude leaves channel " + std::to_string(i) +
                                  " range");
    }
  }
}

std::string_view FaultName(Fault fault) {
  switch (fault) {
    case Fault::kMute: return "mute";
    case Fault::kCorruptCrc: return "corrupt-crc";
    case Fault::kSlow: return "slow";
  }
  return "?";
}

std::optional<Fault> FaultFromName(std::string_view name) {
  for (Fault f : {Fault::kMute, Fault::kCorruptCrc, Fault::kSlow}) {
    if (FaultName(f) == name) return f;
  }
  return std::nullopt;
}

VirtualDevice::VirtualDevice(DeviceConfig config)
    : config_(std::move(config)), descriptor_(DescriptorFor(config_)) {
  ValidateConfig(config_);
  listener_ = std::make_unique<proto::TcpListener>(config_.bind);
  endpoint_ = listener_->local_endpoint();
  wake_fd_ = ::eventfd(0, EFD_CLOEXEC | EFD_NONBLOCK);
  if (wake_fd_ < 0) throw std::system_error(errno, std::generic_category(), "eventfd");
  thread_ = std::thread([this] { Run(); });
}

VirtualDevice::~VirtualDevice() {
  Stop();
  if (wake_fd_ >= 0) ::close(wake_fd_);
}

void VirtualDevice::Stop() {
  if (stopping_.exchange(true)) return;
  const std::uint64_t one = 1;
  [[maybe_unused]] auto n = ::write(wake_fd_, &one, sizeof(one));
  if (thread_.joinable()) thread_.join();
  listener_.reset();
}

void VirtualDevice::SetFault(Fault fault, bool enabled) {
  switch (fault) {
    case Fault::kMute: mute_ = enabled; break;
    case Fault::kCorruptCrc: corrupt_crc_ = enabled; break;
    case Fault::kSlow: slow_ = enabled; break;
  }
}

void VirtualDevice::ClearFaults() {
  mute_ = false;
  corrupt_crc_ = false;
  slow_ = false;
}

bool VirtualDevice::HasFault(Fault fault) const {
  switch (fault) {
    case Fault::kMute: return mute_;
    case Fault::kCorruptCrc: return corrupt_crc_;
    case Fault::kSlow: return slow_;
  }
  return false;
}

void VirtualDevice::Run() {
  while (!stopping_) {
    std::array<pollfd, 2> fds{pollfd{listener_->fd(), POLLIN, 0}, pollfd{wake_fd_, POLLIN, 0}};
    if (::poll(fds.data(), fds.size(), -1) < 0) continue;
    if (fds[1].revents != 0) break;
    if (auto conn = listener_->TryAccept()) {
      try {
        Serve(*conn);
      } catch (const proto::ProtocolError&) {
        // Host went away mid-write; wait for the next connection.
      }
    }
  }
}

void VirtualDevice::Serve(proto::TcpStream& conn) {
  using Clock = std::chrono::steady_clock;
  using proto::Frame;
  using proto::FrameType;

  proto::FrameDecoder decoder;
  SignalGenerator generator(config_.signal, config_.jitter_seed);
  bool streaming = false;
  std::chrono::milliseconds period = proto::kDefaultStreamPeriod;
  std::uint64_t sim_time_ms = 0;
  Clock::time_point next_due{};

  auto send = [&](FrameType type, std::vector<std::uint8_t> payload, bool corrupt = false) {
    auto bytes = proto::EncodeFrame(Frame{type, std::move(payload)});
    if (corrupt) bytes.back() ^= 0xFF;  // lands in the CRC, so the host always sees it
    conn.Write(bytes);
    ++frames_sent_;
  };
  auto nack = [&](proto::NackReason reason, std::uint8_t offending) {
    send(FrameType::kNack, proto::EncodeNack({reason, offending}));
  };

  std::array<std::uint8_t, 512> buf{};
  while (!stopping_) {
    int timeout_ms = -1;
    if (streaming) {
      const auto left = std::chrono::ceil<std::chrono::milliseconds>(next_due - Clock::now());
      timeout_ms = static_cast<int>(std::max<std::int64_t>(0, left.count()));
    }
    std::array<pollfd, 2> fds{pollfd{conn.fd(), POLLIN, 0}, pollfd{wake_fd_, POLLIN, 0}};
    if (::poll(fds.data(), fds.size(), timeout_ms) < 0) continue;
    if (fds[1].revents != 0) return;

    if (fds[0].revents != 0) {
      const std::size_t n = conn.Read(buf, std::chrono::milliseconds(0));  // throws on close
      decoder.Feed(std::span(buf).first(n));
      for (;;) {
        const proto::DecodeResult r = decoder.Next();
        if (r.status == proto::DecodeStatus::kNeedMore) break;
        if (r.status == proto::DecodeStatus::kChecksumError) {
          nack(proto::NackReason::kMalformedRequest, 0);
          continue;
        }
        if (r.status == proto::DecodeStatus::kProtocolError) {
          nack(proto::NackReason::kMalformedRequest, r.offending_byte);
          continue;
        }
        switch (r.frame->type) {
          case FrameType::kIdentReq:
            send(FrameType::kIdentResp, proto::EncodeDescriptor(descriptor_));
            break;
          case FrameType::kStart:
            try {
              period = proto::DecodeStart(r.frame->payload);
            } catch (const proto::ProtocolError&) {
              nack(proto::NackReason::kMalformedRequest, static_cast<std::uint8_t>(r.frame->type));
              break;
            }
            streaming = true;
            sim_time_ms = 0;
            generator.Reset();
            next_due = Clock::now();
            break;
          case FrameType::kStop:
            streaming = false;
            break;
          default:
            nack(proto::NackReason::kUnexpectedFrame, static_cast<std::uint8_t>(r.frame->type));
            break;
        }
      }
    }

    if (streaming && Clock::now() >= next_due) {
      const auto effective = slow_ ? period * 2 : period;
      proto::DataMessage msg;
      msg.serial_number = config_.serial_number;
      msg.measurement.sensor_type = config_.sensor_type;
      msg.measurement.timestamp_ms = static_cast<std::uint32_t>(sim_time_ms);
      msg.measurement.values = generator.Sample(msg.measurement.timestamp_ms);
      if (!mute_) send(FrameType::kData, proto::EncodeData(msg), corrupt_crc_);
      sim_time_ms += static_cast<std::uint64_t>(effective.count());
      const std::chrono::duration<double, std::milli> wall(
          static_cast<double>(effective.count()) / config_.time_scale);
      next_due += std::chrono::duration_cast<Clock::duration>(wall);
    }
  }
}

}  // namespace inquirylab::sim
