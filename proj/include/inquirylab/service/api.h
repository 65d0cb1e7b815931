// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// HTTP front end. Every write follows the same path under one lock: plan the
// event against the in-memory platform, persist it (event row, projection and
// any credentials) in a single SQLite transaction, then commit it in memory.
// A request that fails at any step leaves both sides untouched.
//
// Status codes: 400 malformed request, 401 missing or expired token, 403 role
// or ownership violation, 404 unknown or invisible resource (including join
// codes), 409 state conflicts (slot limit, double publish, taken username),
// 422 validation with {"fields": [...]}.

#ifndef INQUIRYLAB_SERVICE_API_H_
#define INQUIRYLAB_SERVICE_API_H_

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "inquirylab/core/platform.h"
#include "inquirylab/scoring/rubric.h"
#include "inquirylab/service/auth.h"
#include "inquirylab/service/gateway.h"
#include "inquirylab/service/photos.h"
#include "inquirylab/service/store.h"

namespace httplib {
class Server;
}

namespace inquirylab::service {

inline constexpr int kPageSize = 20;

struct ServiceConfig {
  std::string db_path = "inquirylab.db";
  std::string photo_dir = "photos";
  std::string cue_path = scoring::DefaultCuePath();
  int pbkdf2_iterations = kDefaultPbkdf2Iterations;
  std::chrono::milliseconds token_ttl = std::chrono::hours(12);
  std::function<core::Timestamp()> clock = core::Now;
  GatewayOptions gateway;
};

class Service {
 public:
  // Opens the store and replays its event log. Throws StoreError when the
  // database cannot be opened and DomainError when its log is inconsistent.
  explicit Service(ServiceConfig config, std::vector<DeviceInfo> devices = {});
  ~Service();

  void Mount(httplib::Server& server);

  // Loads a log into an empty store, checking it by replay first.
  void Import(const std::vector<core::EventRecord>& log);
  // Gives every account without credentials this password.
  void SetMissingPasswords(const std::string& password);

  // Snapshot copy of the in-memory state.
  core::Platform Snapshot() const;
  Store& store() { return store_; }
  DeviceGateway& gateway() { return gateway_; }
  const scoring::Rubric& rubric() const { return rubric_; }

 private:
  class Handlers;
  friend class Handlers;

  core::Timestamp Clock() const;
  // Plan -> persist -> commit under the write lock. A plan that returns
  // nullopt (an idempotent no-op) writes nothing.
  using Planner = std::function<std::optional<core::EventRecord>(const core::Platform&, core::Timestamp)>;
  std::optional<core::EventRecord> Write(const Planner& plan,
                                         const std::function<void(const core::EventRecord&)>& extra = {});

  ServiceConfig config_;
  Store store_;
  PhotoStore photos_;
  scoring::Rubric rubric_;
  TokenStore tokens_;
  DeviceGateway gateway_;
  mutable std::shared_mutex mu_;
  core::Platform platform_;
};

}  // namespace inquirylab::service

#endif  // INQUIRYLAB_SERVICE_API_H_
