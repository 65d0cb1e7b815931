// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Relays device measurements to HTTP clients. Each device gets at most one
// reader session, started by the first subscriber and stopped when the last
// one leaves. Subscribers have bounded queues that drop their oldest record
// when full, so a slow client never stalls the reader.
//
// Records are JSON objects with "type" set to "measurement" or "error". An
// error record is always the last one a subscription receives.

#ifndef INQUIRYLAB_SERVICE_GATEWAY_H_
#define INQUIRYLAB_SERVICE_GATEWAY_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "inquirylab/sim/device_farm.h"

namespace inquirylab::service {

using DeviceInfo = sim::FarmDeviceInfo;

struct GatewayOptions {
  std::size_t queue_capacity = 256;
  std::chrono::milliseconds period = proto::kDefaultStreamPeriod;
  // No DATA for this long counts as a fault.
  std::chrono::milliseconds silence_timeout{3000};
  std::chrono::milliseconds connect_timeout{1000};
};

class Subscription {
 public:
  explicit Subscription(std::size_t capacity) : capacity_(capacity) {}

  // Next record, or nullopt on timeout or once closed and drained.
  std::optional<nlohmann::json> Pop(std::chrono::milliseconds timeout);
  // True once closed and every queued record has been popped.
  bool finished() const;
  std::uint64_t dropped() const { return dropped_.load(); }

  void Push(nlohmann::json record);
  void Close();

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<nlohmann::json> queue_;
  bool closed_ = false;
  std::atomic<std::uint64_t> dropped_{0};
};

class DeviceGateway {
 public:
  explicit DeviceGateway(std::vector<DeviceInfo> devices, GatewayOptions options = {});
  ~DeviceGateway();
  DeviceGateway(const DeviceGateway&) = delete;
  DeviceGateway& operator=(const DeviceGateway&) = delete;

  std::vector<DeviceInfo> List() const;
  std::optional<DeviceInfo> Find(const std::string& id) const;

  // nullptr when the id is unknown.
  std::shared_ptr<Subscription> Subscribe(const std::string& id);
  void Unsubscribe(const std::string& id, const std::shared_ptr<Subscription>& sub);

  void Shutdown();

 private:
  struct Channel {
    DeviceInfo info;
    std::vector<std::shared_ptr<Subscription>> subs;
    std::thread reader;
    bool running = false;
    std::uint64_t seq = 0;
  };

  void Read(Channel* ch);
  // Sends to every subscriber; with `final` set, also closes and forgets them.
  void Broadcast(Channel* ch, const nlohmann::json& record, bool final);
  bool HasSubscribers(Channel* ch);

  GatewayOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, std::unique_ptr<Channel>> channels_;
  std::atomic<bool> stopping_{false};
};

}  // namespace inquirylab::service

#endif  // INQUIRYLAB_SERVICE_GATEWAY_H_
