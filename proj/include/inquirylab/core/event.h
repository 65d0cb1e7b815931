// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// The event log: one record per successful write. Exported as newline-
// delimited JSON, one record per line:
//
//   {"timestamp":"2021-06-07T09:15:00.000Z","actor_id":12,"kind":"published",
//    "subject_id":57,"sensor_type":"heart_rate","data":{...}}
//
// `data` carries what a replay needs to rebuild the write (texts, ids,
// measurement values); it is empty for kinds that need nothing more.

#ifndef INQUIRYLAB_CORE_EVENT_H_
#define INQUIRYLAB_CORE_EVENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "inquirylab/core/ids.h"
#include "inquirylab/core/time.h"
#include "inquirylab/protocol/messages.h"

namespace inquirylab::core {

enum class EventKind : std::uint8_t {
  kUserRegistered,
  kClassCreated,
  kJoinCodeRegenerated,
  kClassJoined,
  kSessionStart,
  kInquiryCreated,
  kInquiryEdited,
  kDataCaptured,
  kPublished,
  kComment,
  kReplication,
  kRemix,
  kScoreOverridden,
  kPhotoUploaded,
};

std::string_view EventKindName(EventKind kind);
std::optional<EventKind> EventKindFromName(std::string_view name);

// Kinds that bring a new inquiry into existence.
inline bool CreatesInquiry(EventKind k) {
  return k == EventKind::kInquiryCreated || k == EventKind::kReplication || k == EventKind::kRemix;
}

struct EventRecord {
  Timestamp timestamp;
  UserId actor_id;
  EventKind kind = EventKind::kSessionStart;
  std::uint64_t subject_id = 0;
  std::optional<proto::SensorType> sensor_type;
  nlohmann::json data = nlohmann::json::object();

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

nlohmann::json ToJson(const EventRecord& e);
// Throws std::invalid_argument naming the bad field.
EventRecord EventFromJson(const nlohmann::json& j);

std::string ToNdjsonLine(const EventRecord& e);

class LogFormatError : public std::runtime_error {
 public:
  LogFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Reads an NDJSON log. Blank lines are skipped. Throws LogFormatError with
// the 1-based line number of the first malformed record.
std::vector<EventRecord> ReadEventLog(std::istream& in);
void WriteEventLog(std::ostream& out, const std::vector<EventRecord>& events);

}  // namespace inquirylab::core

#endif  // INQUIRYLAB_CORE_EVENT_H_
