// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_SERVICE_AUTH_H_
#define INQUIRYLAB_SERVICE_AUTH_H_

#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "inquirylab/core/ids.h"
#include "inquirylab/core/time.h"
#include "inquirylab/service/store.h"

namespace inquirylab::service {

inline constexpr int kDefaultPbkdf2Iterations = 120000;

// PBKDF2-HMAC-SHA256 with a fresh 16-byte salt.
Credentials HashPassword(std::string_view password, int iterations = kDefaultPbkdf2Iterations);
// Constant-time comparison.
bool VerifyPassword(std::string_view password, const Credentials& c);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view bytes);

struct SessionToken {
  std::string token;
  core::UserId user_id;
  core::Timestamp expires_at;
};

// Opaque bearer tokens held in memory. A restart logs everyone out.
class TokenStore {
 public:
  explicit TokenStore(std::chrono::milliseconds ttl) : ttl_(ttl) {}

  SessionToken Issue(core::UserId user, core::Timestamp now);
  // nullopt for unknown or expired tokens; expired ones are dropped.
  std::optional<core::UserId> Resolve(const std::string& token, core::Timestamp now);
  void Revoke(const std::string& token);

 private:
  std::chrono::milliseconds ttl_;
  std::mutex mu_;
  std::unordered_map<std::string, SessionToken> tokens_;
};

}  // namespace inquirylab::service

#endif  // INQUIRYLAB_SERVICE_AUTH_H_
