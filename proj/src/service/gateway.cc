// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/service/gateway.h"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "inquirylab/protocol/calibration.h"
#include "inquirylab/protocol/errors.h"
#include "inquirylab/protocol/host_session.h"

namespace inquirylab::service {

using nlohmann::json;
using std::chrono::milliseconds;

std::optional<json> Subscription::Pop(milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || !queue_.empty(); });
  if (queue_.empty()) return std::nullopt;
  json out = std::move(queue_.front());
  queue_.pop_front();
  return out;
}

bool Subscription::finished() const {
  std::lock_guard lock(mu_);
  return closed_ && queue_.empty();
}

void Subscription::Push(json record) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    if (queue_.size() >= capacity_) {
      queue_.pop_front();
      ++dropped_;
    }
    queue_.push_back(std::move(record));
  }
  cv_.notify_all();
}

void Subscription::Close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

DeviceGateway::DeviceGateway(std::vector<DeviceInfo> devices, GatewayOptions options) : options_(options) {
  for (DeviceInfo& d : devices) {
    auto ch = std::make_unique<Channel>();
    ch->info = std::move(d);
    channels_.emplace(ch->info.id, std::move(ch));
  }
}

DeviceGateway::~DeviceGateway() { Shutdown(); }

void DeviceGateway::Shutdown() {
  stopping_ = true;
  std::vector<std::thread> readers;
  {
    std::lock_guard lock(mu_);
    for (auto& [id, ch] : channels_) {
      for (auto& s : ch->subs) s->Close();
      ch->subs.clear();
      if (ch->reader.joinable()) readers.push_back(std::move(ch->reader));
    }
  }
  for (std::thread& t : readers) t.join();
}

std::vector<DeviceInfo> DeviceGateway::List() const {
  std::lock_guard lock(mu_);
  std::vector<DeviceInfo> out;
  for (const auto& [id, ch] : channels_) out.push_back(ch->info);
  return out;
}

std::optional<DeviceInfo> DeviceGateway::Find(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = channels_.find(id);
  if (it == channels_.end()) return std::nullopt;
  return it->second->info;
}

std::shared_ptr<Subscription> DeviceGateway::Subscribe(const std::string& id) {
  std::thread finished;
  std::shared_ptr<Subscription> sub;
  {
    std::lock_guard lock(mu_);
    const auto it = channels_.find(id);
    if (it == channels_.end() || stopping_) return nullptr;
    Channel* ch = it->second.get();
    sub = std::make_shared<Subscription>(options_.queue_capacity);
    ch->subs.push_back(sub);
    if (!ch->running) {
      // The previous reader has already left its loop; reap it outside the lock.
      finished = std::move(ch->reader);
      ch->running = true;
      ch->reader = std::thread([this, ch] { Read(ch); });
    }
  }
  if (finished.joinable()) finished.join();
  return sub;
}

void DeviceGateway::Unsubscribe(const std::string& id, const std::shared_ptr<Subscription>& sub) {
  std::lock_guard lock(mu_);
  const auto it = channels_.find(id);
  if (it == channels_.end()) return;
  auto& subs = it->second->subs;
  subs.erase(std::remove(subs.begin(), subs.end(), sub), subs.end());
  sub->Close();
}

bool DeviceGateway::HasSubscribers(Channel* ch) {
  std::lock_guard lock(mu_);
  if (!ch->subs.empty() && !stopping_) return true;
  ch->running = false;
  return false;
}

void DeviceGateway::Broadcast(Channel* ch, const json& record, bool final) {
  std::lock_guard lock(mu_);
  for (auto& s : ch->subs) {
    s->Push(record);
    if (final) s->Close();
  }
  if (final) {
    ch->subs.clear();
    ch->running = false;
  }
}

void DeviceGateway::Read(Channel* ch) {
  const DeviceInfo& info = ch->info;
  auto fail = [&](const std::string& error, const std::string& message) {
    spdlog::warn("device {}: {}: {}", info.id, error, message);
    Broadcast(ch, {{"type", "error"}, {"device_id", info.id}, {"error", error}, {"message", message}}, true);
  };
  try {
    proto::HostSession session(proto::TcpStream::Connect(info.endpoint, options_.connect_timeout));
    const proto::SensorDescriptor desc = session.Handshake();
    json units = json::array();
    for (const proto::ChannelSpec& c : desc.channels) {
      // Raw-count channels are calibrated here and relayed in degrees.
      units.push_back(proto::UnitSymbol(desc.calibration ? proto::UnitCode::kCelsius : c.unit));
    }
    session.Start(options_.period);
    auto last_data = std::chrono::steady_clock::now();
    while (HasSubscribers(ch)) {
      const proto::StreamEvent ev = session.Next(milliseconds(100));
      switch (ev.kind) {
        case proto::StreamEvent::Kind::kMeasurement: {
          last_data = std::chrono::steady_clock::now();
          json values = json::array();
          for (const proto::Centi v : ev.data.measurement.values) {
            values.push_back(desc.calibration ? proto::ApplyCalibration(v, *desc.calibration).ToDouble() : v.ToDouble());
          }
          Broadcast(ch,
                    {{"type", "measurement"},
                     {"device_id", info.id},
                     {"seq", ch->seq++},
                     {"serial_number", ev.data.serial_number},
                     {"sensor_type", proto::SensorName(ev.data.measurement.sensor_type)},
                     {"timestamp_ms", ev.data.measurement.timestamp_ms},
                     {"values", values},
                     {"units", units}},
                    false);
          break;
        }
        case proto::StreamEvent::Kind::kChecksumError:
          return fail("checksum", "frame failed its checksum");
        case proto::StreamEvent::Kind::kProtocolError:
          return fail("protocol", "device sent an invalid frame");
        case proto::StreamEvent::Kind::kTimeout:
          if (std::chrono::steady_clock::now() - last_data > options_.silence_timeout) {
            return fail("silent", "no data within the silence timeout");
          }
          break;
      }
    }
    try {
      session.Stop();
    } catch (const proto::ProtocolError&) {
      // The device may already be gone; nothing left to tell anyone.
    }
  } catch (const proto::ProtocolError& e) {
    switch (e.code()) {
      case proto::ErrorCode::kTransport:
      case proto::ErrorCode::kDeviceAbsent:
        return fail("connect", e.what());
      case proto::ErrorCode::kChecksum:
        return fail("checksum", e.what());
      default:
        return fail("protocol", e.what());
    }
  } catch (const std::exception& e) {
    fail("connect", e.what());
  }
}

}  // namespace inquirylab::service
