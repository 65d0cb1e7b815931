// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/service/auth.h"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <stdexcept>

namespace inquirylab::service {
namespace {

std::vector<std::uint8_t> RandomBytes(std::size_t n) {
  std::vector<std::uint8_t> out(n);
  if (RAND_bytes(out.data(), static_cast<int>(n)) != 1) throw std::runtime_error("RAND_bytes failed");
  return out;
}

std::vector<std::uint8_t> Derive(std::string_view password, const std::vector<std::uint8_t>& salt, int iterations) {
  std::vector<std::uint8_t> out(32);
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                        static_cast<int>(salt.size()), iterations, EVP_sha256(), static_cast<int>(out.size()),
                        out.data()) != 1) {
    throw std::runtime_error("PBKDF2 failed");
  }
  return out;
}

std::string Hex(const std::uint8_t* p, std::size_t n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    s += kDigits[p[i] >> 4];
    s += kDigits[p[i] & 0xF];
  }
  return s;
}

}  // namespace

Credentials HashPassword(std::string_view password, int iterations) {
  Credentials c;
  c.salt = RandomBytes(16);
  c.iterations = iterations;
  c.hash = Derive(password, c.salt, iterations);
  return c;
}

bool VerifyPassword(std::string_view password, const Credentials& c) {
  if (c.iterations <= 0 || c.hash.empty()) return false;
  const auto got = Derive(password, c.salt, c.iterations);
  return got.size() == c.hash.size() && CRYPTO_memcmp(got.data(), c.hash.data(), got.size()) == 0;
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  return Hex(md, len);
}

SessionToken TokenStore::Issue(core::UserId user, core::Timestamp now) {
  const auto raw = RandomBytes(32);
  SessionToken t{Hex(raw.data(), raw.size()), user, now + ttl_};
  std::lock_guard lock(mu_);
  tokens_[t.token] = t;
  return t;
}

std::optional<core::UserId> TokenStore::Resolve(const std::string& token, core::Timestamp now) {
  std::lock_guard lock(mu_);
  const auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  if (now >= it->second.expires_at) {
    tokens_.erase(it);
    return std::nullopt;
  }
  return it->second.user_id;
}

void TokenStore::Revoke(const std::string& token) {
  std::lock_guard lock(mu_);
  tokens_.erase(token);
}

}  // namespace inquirylab::service
