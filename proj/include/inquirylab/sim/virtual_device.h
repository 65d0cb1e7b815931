// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_SIM_VIRTUAL_DEVICE_H_
#define INQUIRYLAB_SIM_VIRTUAL_DEVICE_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <thread>

#include "inquirylab/protocol/byte_stream.h"
#include "inquirylab/protocol/messages.h"
#include "inquirylab/sim/signal_model.h"

namespace inquirylab::sim {

struct DeviceConfig {
  proto::SensorType sensor_type = proto::SensorType::kHeartRate;
  std::uint32_t serial_number = 0;
  SignalModel signal;
  std::optional<proto::CalibrationRecord> calibration;
  std::uint64_t jitter_seed = 0;
  // Simulated milliseconds per wall-clock millisecond. DATA timestamps always
  // advance by the full period; only the wall-clock pacing is scaled.
  double time_scale = 1.0;
  proto::Endpoint bind{"127.0.0.1", 0};
};

// Plausible classroom signal for `type`. BodyTemp gets a per-seed calibration
// and a baseline around 36.8 degC expressed in raw counts.
DeviceConfig DefaultDeviceConfig(proto::SensorType type, std::uint32_t serial,
                                 std::uint64_t seed);

proto::SensorDescriptor DescriptorFor(const DeviceConfig& config);

// Throws std::invalid_argument when the config breaks an invariant
// (calibration iff BodyTemp, one baseline per channel, baseline +/- amplitude
// inside the channel range, positive time scale).
void ValidateConfig(const DeviceConfig& config);

enum class Fault : std::uint8_t { kMute, kCorruptCrc, kSlow };

std::string_view FaultName(Fault fault);
std::optional<Fault> FaultFromName(std::string_view name);

// A protocol-conformant device behind a loopback TCP endpoint. One host
// connection is served at a time; a new connection is accepted after the
// previous one closes.
class VirtualDevice {
 public:
  // Binds immediately. Throws std::system_error when the address is in use.
  explicit VirtualDevice(DeviceConfig config);
  ~VirtualDevice();
  VirtualDevice(const VirtualDevice&) = delete;
  VirtualDevice& operator=(const VirtualDevice&) = delete;

  proto::Endpoint endpoint() const { return endpoint_; }
  const DeviceConfig& config() const { return config_; }
  const proto::SensorDescriptor& descriptor() const { return descriptor_; }

  void SetFault(Fault fault, bool enabled);
  void ClearFaults();
  bool HasFault(Fault fault) const;

  std::uint64_t frames_sent() const { return frames_sent_.load(); }

  void Stop();

 private:
  void Run();
  void Serve(proto::TcpStream& conn);

  DeviceConfig config_;
  proto::SensorDescriptor descriptor_;
  std::unique_ptr<proto::TcpListener> listener_;
  proto::Endpoint endpoint_;
  int wake_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::atomic<bool> mute_{false};
  std::atomic<bool> corrupt_crc_{false};
  std::atomic<bool> slow_{false};
  std::atomic<std::uint64_t> frames_sent_{0};
  std::thread thread_;
};

}  // namespace inquirylab::sim

#endif  // INQUIRYLAB_SIM_VIRTUAL_DEVICE_H_
