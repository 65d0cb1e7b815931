// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_SIM_DEVICE_FARM_H_
#define INQUIRYLAB_SIM_DEVICE_FARM_H_

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "inquirylab/sim/virtual_device.h"

namespace inquirylab::sim {

inline constexpr int kDefaultKitSizePerType = 20;

class DeviceNotFound : public std::out_of_range {
 public:
  explicit DeviceNotFound(const std::string& id) : std::out_of_range("no device '" + id + "'") {}
};

class FarmError : public std::runtime_error {
 public:
  FarmError(const std::string& what, std::vector<std::string> failed)
      : std::runtime_error(what), failed_(std::move(failed)) {}
  // "<sensor>#<serial>: <reason>" for every device that could not start.
  const std::vector<std::string>& failed() const { return failed_; }

 private:
  std::vector<std::string> failed_;
};

struct FarmDeviceInfo {
  std::string id;
  proto::Endpoint endpoint;
  proto::SensorType sensor_type;
  std::uint32_t serial_number;
};

// A set of running virtual devices keyed by id (the decimal serial number).
// Destroying the farm stops every device and closes every endpoint.
class DeviceFarm {
 public:
  DeviceFarm() = default;
  DeviceFarm(DeviceFarm&&) = default;
  DeviceFarm& operator=(DeviceFarm&&) = default;

  // Starts the device and returns its id. Throws std::system_error on a bind
  // failure, std::invalid_argument on a bad config or duplicate serial.
  std::string Spawn(DeviceConfig config);

  void InjectFault(const std::string& id, Fault fault, bool enabled = true);
  void ClearFaults(const std::string& id);

  VirtualDevice& Get(const std::string& id);
  const VirtualDevice& Get(const std::string& id) const;
  bool Contains(const std::string& id) const { return devices_.count(id) != 0; }

  // Ordered by sensor type then serial.
  std::vector<FarmDeviceInfo> List() const;
  std::size_t size() const { return devices_.size(); }

  void StopAll();

 private:
  std::map<std::string, std::unique_ptr<VirtualDevice>> devices_;
};

struct KitOptions {
  int count_per_type = kDefaultKitSizePerType;
  std::uint64_t seed = 1;
  double time_scale = 1.0;
  std::string host = "127.0.0.1";
};

// Serial number of the index-th unit of `type` in a kit: type code in the
// top byte, 1-based unit index below it.
std::uint32_t KitSerial(proto::SensorType type, int index);

// One class kit: count_per_type devices of each of the six sensor types.
// Throws FarmError listing every device that failed to start; devices that
// did start are stopped again.
DeviceFarm SpawnClassKit(const KitOptions& options);

}  // namespace inquirylab::sim

#endif  // INQUIRYLAB_SIM_DEVICE_FARM_H_
