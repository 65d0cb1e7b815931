// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/service/store.h"

#include <sqlite3.h>

#include <utility>

namespace inquirylab::service {
namespace {

using core::EventKind;
using core::EventRecord;
using nlohmann::json;

constexpr const char* kSchema = R"sql(
PRAGMA foreign_keys = ON;
CREATE TABLE IF NOT EXISTS events (
  seq INTEGER PRIMARY KEY,
  line TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS users (
  id INTEGER PRIMARY KEY,
  username TEXT NOT NULL UNIQUE,
  role TEXT NOT NULL CHECK (role IN ('student', 'teacher', 'researcher')),
  created_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS credentials (
  user_id INTEGER PRIMARY KEY REFERENCES users(id),
  salt BLOB NOT NULL,
  hash BLOB NOT NULL,
  iterations INTEGER NOT NULL CHECK (iterations > 0)
);
CREATE TABLE IF NOT EXISTS classes (
  id INTEGER PRIMARY KEY,
  name TEXT NOT NULL CHECK (length(name) > 0),
  join_code TEXT NOT NULL UNIQUE CHECK (length(join_code) = 6),
  teacher_id INTEGER NOT NULL REFERENCES users(id),
  created_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS revoked_codes (
  code TEXT PRIMARY KEY,
  class_id INTEGER NOT NULL REFERENCES classes(id)
);
CREATE TABLE IF NOT EXISTS memberships (
  class_id INTEGER NOT NULL REFERENCES classes(id),
  user_id INTEGER NOT NULL REFERENCES users(id),
  joined_at INTEGER NOT NULL,
  PRIMARY KEY (class_id, user_id)
);
CREATE TABLE IF NOT EXISTS photos (
  id TEXT PRIMARY KEY CHECK (length(id) = 64),
  media_type TEXT NOT NULL,
  bytes INTEGER NOT NULL CHECK (bytes BETWEEN 1 AND 5242880),
  uploaded_by INTEGER NOT NULL REFERENCES users(id),
  uploaded_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS inquiries (
  id INTEGER PRIMARY KEY,
  author_id INTEGER NOT NULL REFERENCES users(id),
  class_id INTEGER REFERENCES classes(id),
  sensor_type TEXT NOT NULL,
  title TEXT NOT NULL,
  description TEXT NOT NULL,
  notes TEXT NOT NULL,
  status TEXT NOT NULL CHECK (status IN ('draft', 'published')),
  exemplar INTEGER NOT NULL DEFAULT 0 CHECK (exemplar IN (0, 1)),
  created_at INTEGER NOT NULL,
  published_at INTEGER,
  CHECK ((status = 'published') = (published_at IS NOT NULL)),
  CHECK (status = 'draft' OR length(title) > 0)
);
CREATE TABLE IF NOT EXISTS slots (
  inquiry_id INTEGER NOT NULL REFERENCES inquiries(id),
  slot_index INTEGER NOT NULL CHECK (slot_index BETWEEN 0 AND 2),
  label TEXT NOT NULL,
  timestamp_ms INTEGER NOT NULL,
  values_json TEXT NOT NULL,
  photo_id TEXT REFERENCES photos(id),
  captured_at INTEGER NOT NULL,
  PRIMARY KEY (inquiry_id, slot_index)
);
CREATE TABLE IF NOT EXISTS comments (
  id INTEGER PRIMARY KEY,
  inquiry_id INTEGER NOT NULL REFERENCES inquiries(id),
  author_id INTEGER NOT NULL REFERENCES users(id),
  body TEXT NOT NULL CHECK (length(body) > 0),
  created_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS lineage (
  inquiry_id INTEGER PRIMARY KEY REFERENCES inquiries(id),
  source_id INTEGER NOT NULL REFERENCES inquiries(id),
  kind TEXT NOT NULL CHECK (kind IN ('replication', 'remix')),
  source_class TEXT NOT NULL CHECK (source_class IN ('other-student', 'exemplar', 'own')),
  CHECK (source_id < inquiry_id)
);
CREATE TABLE IF NOT EXISTS score_overrides (
  inquiry_id INTEGER PRIMARY KEY REFERENCES inquiries(id),
  category TEXT NOT NULL CHECK (category IN ('null', 'naive', 'emerging', 'informed')),
  reason TEXT NOT NULL,
  by_user INTEGER NOT NULL REFERENCES users(id),
  at INTEGER NOT NULL
);
)sql";

std::int64_t Millis(core::Timestamp t) { return t.time_since_epoch().count(); }

// Prepared statement with positional binding.
class Stmt {
 public:
  Stmt(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw StoreError(std::string("prepare failed: ") + sqlite3_errmsg(db));
    }
  }
  ~Stmt() { sqlite3_finalize(stmt_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  Stmt& Bind(std::int64_t v) {
    sqlite3_bind_int64(stmt_, ++n_, v);
    return *this;
  }
  Stmt& Bind(const std::string& v) {
    sqlite3_bind_text(stmt_, ++n_, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Stmt& Bind(const std::vector<std::uint8_t>& v) {
    sqlite3_bind_blob(stmt_, ++n_, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Stmt& BindNull() {
    sqlite3_bind_null(stmt_, ++n_);
    return *this;
  }
  // Nonzero ids bind as themselves, zero as NULL.
  Stmt& BindRef(std::uint64_t id) { return id == 0 ? BindNull() : Bind(static_cast<std::int64_t>(id)); }

  bool Step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw StoreError(std::string("statement failed: ") + sqlite3_errmsg(db_));
  }
  void Run() { Step(); }

  std::int64_t Int(int col) const { return sqlite3_column_int64(stmt_, col); }
  std::string Text(int col) const {
    const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, col));
    return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col))) : std::string();
  }
  std::vector<std::uint8_t> Blob(int col) const {
    const auto* p = static_cast<const std::uint8_t*>(sqlite3_column_blob(stmt_, col));
    return p ? std::vector<std::uint8_t>(p, p + sqlite3_column_bytes(stmt_, col)) : std::vector<std::uint8_t>{};
  }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
  int n_ = 0;
};

std::string S(const EventRecord& e, const char* key) { return e.data.at(key).get<std::string>(); }
std::int64_t U(const EventRecord& e, const char* key) { return e.data.at(key).get<std::int64_t>(); }

}  // namespace

Store::Store(const std::string& path) {
  const int flags = SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX;
  if (sqlite3_open_v2(path.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
    const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    throw StoreError("cannot open database '" + path + "': " + msg);
  }
  sqlite3_busy_timeout(db_, 5000);
  try {
    Exec(kSchema);
  } catch (const StoreError& e) {
    sqlite3_close(db_);
    db_ = nullptr;
    throw StoreError("cannot initialise database '" + path + "': " + e.what());
  }
}

Store::~Store() { sqlite3_close(db_); }

void Store::Exec(const std::string& sql) {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    const std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw StoreError(msg);
  }
}

std::vector<EventRecord> Store::LoadEvents() const {
  Stmt q(db_, "SELECT line FROM events ORDER BY seq");
  std::vector<EventRecord> out;
  while (q.Step()) out.push_back(core::EventFromJson(json::parse(q.Text(0))));
  return out;
}

std::int64_t Store::EventCount() const { return CountRows("events"); }

std::int64_t Store::CountRows(const std::string& table) const {
  Stmt q(db_, ("SELECT COUNT(*) FROM \"" + table + "\"").c_str());
  q.Step();
  return q.Int(0);
}

void Store::InsertEvent(const EventRecord& e) {
  Stmt(db_, "INSERT INTO events (line) VALUES (?)").Bind(core::ToNdjsonLine(e)).Run();
}

void Store::Persist(const EventRecord& e, const std::function<void()>& extra) {
  Exec("BEGIN IMMEDIATE");
  try {
    InsertEvent(e);
    Project(e);
    if (extra) extra();
    Exec("COMMIT");
  } catch (...) {
    sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
    throw;
  }
}

void Store::PersistAll(const std::vector<EventRecord>& events) {
  if (EventCount() != 0) throw StoreError("import needs an empty database");
  Exec("BEGIN IMMEDIATE");
  try {
    for (const EventRecord& e : events) {
      InsertEvent(e);
      Project(e);
    }
    Exec("COMMIT");
  } catch (...) {
    sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
    throw;
  }
}

void Store::Project(const EventRecord& e) {
  const std::int64_t at = Millis(e.timestamp);
  const auto subject = static_cast<std::int64_t>(e.subject_id);
  const auto actor = static_cast<std::int64_t>(e.actor_id.value);
  auto insert_inquiry = [&](bool exemplar) {
    Stmt(db_,
         "INSERT INTO inquiries (id, author_id, class_id, sensor_type, title, description, notes, status,"
         " exemplar, created_at) VALUES (?, ?, ?, ?, ?, ?, ?, 'draft', ?, ?)")
        .Bind(subject)
        .Bind(actor)
        .BindRef(static_cast<std::uint64_t>(U(e, "class_id")))
        .Bind(std::string(proto::SensorName(*e.sensor_type)))
        .Bind(S(e, "title"))
        .Bind(e.data.value("description", std::string()))
        .Bind(e.data.value("notes", std::string()))
        .Bind(std::int64_t{exemplar})
        .Bind(at)
        .Run();
  };

  switch (e.kind) {
    case EventKind::kUserRegistered:
      Stmt(db_, "INSERT INTO users (id, username, role, created_at) VALUES (?, ?, ?, ?)")
          .Bind(subject)
          .Bind(S(e, "username"))
          .Bind(S(e, "role"))
          .Bind(at)
          .Run();
      break;
    case EventKind::kClassCreated:
      Stmt(db_, "INSERT INTO classes (id, name, join_code, teacher_id, created_at) VALUES (?, ?, ?, ?, ?)")
          .Bind(subject)
          .Bind(S(e, "name"))
          .Bind(S(e, "join_code"))
          .Bind(actor)
          .Bind(at)
          .Run();
      break;
    case EventKind::kJoinCodeRegenerated:
      Stmt(db_, "INSERT INTO revoked_codes (code, class_id) SELECT join_code, id FROM classes WHERE id = ?")
          .Bind(subject)
          .Run();
      Stmt(db_, "UPDATE classes SET join_code = ? WHERE id = ?").Bind(S(e, "join_code")).Bind(subject).Run();
      break;
    case EventKind::kClassJoined:
      Stmt(db_, "INSERT INTO memberships (class_id, user_id, joined_at) VALUES (?, ?, ?)")
          .Bind(subject)
          .Bind(actor)
          .Bind(at)
          .Run();
      break;
    case EventKind::kSessionStart:
      break;
    case EventKind::kInquiryCreated:
      insert_inquiry(e.data.value("exemplar", false));
      break;
    case EventKind::kInquiryEdited:
      for (const char* field : {"title", "description", "notes"}) {
        if (!e.data.contains(field)) continue;
        Stmt(db_, (std::string("UPDATE inquiries SET ") + field + " = ? WHERE id = ?").c_str())
            .Bind(S(e, field))
            .Bind(subject)
            .Run();
      }
      break;
    case EventKind::kDataCaptured: {
      Stmt s(db_,
             "INSERT INTO slots (inquiry_id, slot_index, label, timestamp_ms, values_json, photo_id, captured_at)"
             " VALUES (?, (SELECT COUNT(*) FROM slots WHERE inquiry_id = ?), ?, ?, ?, ?, ?)");
      s.Bind(subject).Bind(subject).Bind(S(e, "label")).Bind(U(e, "timestamp_ms")).Bind(e.data.at("values").dump());
      if (e.data.contains("photo_ref")) {
        s.Bind(S(e, "photo_ref"));
      } else {
        s.BindNull();
      }
      s.Bind(at).Run();
      break;
    }
    case EventKind::kPublished:
      Stmt(db_, "UPDATE inquiries SET status = 'published', published_at = ? WHERE id = ?").Bind(at).Bind(subject).Run();
      break;
    case EventKind::kComment:
      Stmt(db_, "INSERT INTO comments (id, inquiry_id, author_id, body, created_at) VALUES (?, ?, ?, ?, ?)")
          .Bind(U(e, "comment_id"))
          .Bind(subject)
          .Bind(actor)
          .Bind(S(e, "body"))
          .Bind(at)
          .Run();
      break;
    case EventKind::kReplication:
    case EventKind::kRemix:
      insert_inquiry(false);
      Stmt(db_, "INSERT INTO lineage (inquiry_id, source_id, kind, source_class) VALUES (?, ?, ?, ?)")
          .Bind(subject)
          .Bind(U(e, "source_id"))
          .Bind(std::string(core::EventKindName(e.kind)))
          .Bind(S(e, "source_class"))
          .Run();
      break;
    case EventKind::kScoreOverridden:
      Stmt(db_,
           "INSERT INTO score_overrides (inquiry_id, category, reason, by_user, at) VALUES (?, ?, ?, ?, ?)"
           " ON CONFLICT (inquiry_id) DO UPDATE SET category = excluded.category, reason = excluded.reason,"
           " by_user = excluded.by_user, at = excluded.at")
          .Bind(subject)
          .Bind(S(e, "category"))
          .Bind(S(e, "reason"))
          .Bind(actor)
          .Bind(at)
          .Run();
      break;
    case EventKind::kPhotoUploaded:
      Stmt(db_, "INSERT INTO photos (id, media_type, bytes, uploaded_by, uploaded_at) VALUES (?, ?, ?, ?, ?)")
          .Bind(S(e, "photo_id"))
          .Bind(e.data.value("media_type", std::string("application/octet-stream")))
          .Bind(U(e, "bytes"))
          .Bind(actor)
          .Bind(at)
          .Run();
      break;
  }
}

void Store::PutCredentials(core::UserId user, const Credentials& c) {
  Stmt(db_, "INSERT OR REPLACE INTO credentials (user_id, salt, hash, iterations) VALUES (?, ?, ?, ?)")
      .Bind(static_cast<std::int64_t>(user.value))
      .Bind(c.salt)
      .Bind(c.hash)
      .Bind(std::int64_t{c.iterations})
      .Run();
}

std::optional<Credentials> Store::GetCredentials(core::UserId user) const {
  Stmt q(db_, "SELECT salt, hash, iterations FROM credentials WHERE user_id = ?");
  q.Bind(static_cast<std::int64_t>(user.value));
  if (!q.Step()) return std::nullopt;
  return Credentials{q.Blob(0), q.Blob(1), static_cast<int>(q.Int(2))};
}

std::optional<PhotoMeta> Store::FindPhoto(const std::string& id) const {
  Stmt q(db_, "SELECT id, media_type, bytes FROM photos WHERE id = ?");
  q.Bind(id);
  if (!q.Step()) return std::nullopt;
  return PhotoMeta{q.Text(0), q.Text(1), static_cast<std::size_t>(q.Int(2))};
}

}  // namespace inquirylab::service
