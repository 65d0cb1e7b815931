// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/sim/device_farm.h"

#include <algorithm>
#include <system_error>

namespace inquirylab::sim {

std::string DeviceFarm::Spawn(DeviceConfig config) {
  std::string id = std::to_string(config.serial_number);
  if (devices_.count(id) != 0) throw std::invalid_argument("duplicate device serial " + id);
  auto device = std::make_unique<VirtualDevice>(std::move(config));
  devices_.emplace(id, std::move(device));
  return id;
}

VirtualDevice& DeviceFarm::Get(const std::string& id) {
  auto it = devices_.find(id);
  if (it == devices_.end()) throw DeviceNotFound(id);
  return *it->second;
}

const VirtualDevice& DeviceFarm::Get(const std::string& id) const {
  auto it = devices_.find(id);
  if (it == devices_.end()) throw DeviceNotFound(id);
  return *it->second;
}

void DeviceFarm::InjectFault(const std::string& id, Fault fault, bool enabled) {
  Get(id).SetFault(fault, enabled);
}

void DeviceFarm::ClearFaults(const std::string& id) { Get(id).ClearFaults(); }

std::vector<FarmDeviceInfo> DeviceFarm::List() const {
  std::vector<FarmDeviceInfo> out;
  out.reserve(devices_.size());
  for (const auto& [id, dev] : devices_) {
    out.push_back({id, dev->endpoint(), dev->config().sensor_type, dev->config().serial_number});
  }
  std::sort(out.begin(), out.end(), [](const FarmDeviceInfo& a, const FarmDeviceInfo& b) {
    return a.serial_number < b.serial_number;
  });
  return out;
}

void DeviceFarm::StopAll() {
  for (auto& [id, dev] : devices_) dev->Stop();
  devices_.clear();
}

std::uint32_t KitSerial(proto::SensorType type, int index) {
  return (static_cast<std::uint32_t>(type) << 24) | static_cast<std::uint32_t>(index + 1);
}

DeviceFarm SpawnClassKit(const KitOptions& options) {
  if (options.count_per_type < 1) throw std::invalid_argument("count_per_type must be >= 1");
  DeviceFarm farm;
  std::vector<std::string> failed;
  for (proto::SensorType type : proto::kAllSensorTypes) {
    for (int i = 0; i < options.count_per_type; ++i) {
      const std::uint32_t serial = KitSerial(type, i);
      DeviceConfig cfg = DefaultDeviceConfig(type, serial, options.seed);
      cfg.time_scale = options.time_scale;
      cfg.bind = proto::Endpoint{options.host, 0};
      try {
        farm.Spawn(std::move(cfg));
      } catch (const std::exception& e) {
        failed.push_back(std::string(proto::SensorName(type)) + "#" + std::to_string(serial) +
                         ": " + e.what());
      }
    }
  }
  if (!failed.empty()) {
    farm.StopAll();
    throw FarmError(std::to_string(failed.size()) + " device(s) failed to start", std::move(failed));
  }
  return farm;
}

}  // namespace inquirylab::sim
