// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// SQLite persistence. The events table is the source of truth; the other
// tables are a relational projection kept in the same transaction, with
// foreign keys and CHECK constraints as a second line of defence behind the
// domain rules. Credentials live outside the event log.

#ifndef INQUIRYLAB_SERVICE_STORE_H_
#define INQUIRYLAB_SERVICE_STORE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "inquirylab/core/event.h"

struct sqlite3;

namespace inquirylab::service {

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Credentials {
  std::vector<std::uint8_t> salt;
  std::vector<std::uint8_t> hash;
  int iterations = 0;
};

struct PhotoMeta {
  std::string id;
  std::string media_type;
  std::size_t bytes = 0;
};

class Store {
 public:
  // Opens or creates the database and its schema. ":memory:" works.
  // Throws StoreError when the file cannot be opened.
  explicit Store(const std::string& path);
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  std::vector<core::EventRecord> LoadEvents() const;
  std::int64_t EventCount() const;

  // One transaction: the event row, its projection, then `extra` (which
  // may call PutCredentials). Anything that throws rolls the lot back.
  void Persist(const core::EventRecord& e, const std::function<void()>& extra = {});
  // Bulk load into an empty store, single transaction.
  void PersistAll(const std::vector<core::EventRecord>& events);

  void PutCredentials(core::UserId user, const Credentials& c);
  std::optional<Credentials> GetCredentials(core::UserId user) const;
  std::optional<PhotoMeta> FindPhoto(const std::string& id) const;

  std::int64_t CountRows(const std::string& table) const;
  // Raw SQL for maintenance and tests.
  void Exec(const std::string& sql);

 private:
  void Project(const core::EventRecord& e);
  void InsertEvent(const core::EventRecord& e);

  sqlite3* db_ = nullptr;
};

}  // namespace inquirylab::service

#endif  // INQUIRYLAB_SERVICE_STORE_H_
