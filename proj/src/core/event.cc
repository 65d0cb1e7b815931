// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/core/event.h"

#include <istream>
#include <ostream>

namespace inquirylab::core {
namespace {

constexpr EventKind kAllKinds[] = {
    EventKind::kUserRegistered, EventKind::kClassCreated,   EventKind::kJoinCodeRegenerated,
    EventKind::kClassJoined,    EventKind::kSessionStart,   EventKind::kInquiryCreated,
    EventKind::kInquiryEdited,  EventKind::kDataCaptured,   EventKind::kPublished,
    EventKind::kComment,        EventKind::kReplication,    EventKind::kRemix,
    EventKind::kScoreOverridden, EventKind::kPhotoUploaded,
};

}  // namespace

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kUserRegistered: return "user_registered";
    case EventKind::kClassCreated: return "class_created";
    case EventKind::kJoinCodeRegenerated: return "join_code_regenerated";
    case EventKind::kClassJoined: return "class_joined";
    case EventKind::kSessionStart: return "session_start";
    case EventKind::kInquiryCreated: return "inquiry_created";
    case EventKind::kInquiryEdited: return "inquiry_edited";
    case EventKind::kDataCaptured: return "data_captured";
    case EventKind::kPublished: return "published";
    case EventKind::kComment: return "comment";
    case EventKind::kReplication: return "replication";
    case EventKind::kRemix: return "remix";
    case EventKind::kScoreOverridden: return "score_overridden";
    case EventKind::kPhotoUploaded: return "photo_uploaded";
  }
  return "?";
}

std::optional<EventKind> EventKindFromName(std::string_view name) {
  for (EventKind k : kAllKinds) {
    if (EventKindName(k) == name) return k;
  }
  return std::nullopt;
}

nlohmann::json ToJson(const EventRecord& e) { return nlohmann::json::parse(ToNdjsonLine(e)); }

EventRecord EventFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not an object");
  auto field = [&](const char* name) -> const nlohmann::json& {
    auto it = j.find(name);
    if (it == j.end()) throw std::invalid_argument(std::string("missing field '") + name + "'");
    return *it;
  };
  EventRecord e;
  const auto& ts = field("timestamp");
  if (!ts.is_string()) throw std::invalid_argument("'timestamp' must be a string");
  e.timestamp = ParseTimestamp(ts.get<std::string>());
  const auto& actor = field("actor_id");
  if (!actor.is_number_unsigned()) throw std::invalid_argument("'actor_id' must be a non-negative integer");
  e.actor_id = UserId{actor.get<std::uint64_t>()};
  const auto& kind = field("kind");
  if (!kind.is_string()) throw std::invalid_argument("'kind' must be a string");
  const auto k = EventKindFromName(kind.get<std::string>());
  if (!k) throw std::invalid_argument("unknown kind '" + kind.get<std::string>() + "'");
  e.kind = *k;
  const auto& subject = field("subject_id");
  if (!subject.is_number_unsigned()) throw std::invalid_argument("'subject_id' must be a non-negative integer");
  e.subject_id = subject.get<std::uint64_t>();
  if (auto it = j.find("sensor_type"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw std::invalid_argument("'sensor_type' must be a string");
    const auto st = proto::SensorTypeFromName(it->get<std::string>());
    if (!st) throw std::invalid_argument("unknown sensor_type '" + it->get<std::string>() + "'");
    e.sensor_type = *st;
  }
  if (auto it = j.find("data"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw std::invalid_argument("'data' must be an object");
    e.data = *it;
  }
  return e;
}

std::string ToNdjsonLine(const EventRecord& e) {
  // Fixed key order keeps exported files diffable.
  nlohmann::ordered_json j;
  j["timestamp"] = FormatTimestamp(e.timestamp);
  j["actor_id"] = e.actor_id.value;
  j["kind"] = EventKindName(e.kind);
  j["subject_id"] = e.subject_id;
  j["sensor_type"] = e.sensor_type ? nlohmann::ordered_json(proto::SensorName(*e.sensor_type))
                                   : nlohmann::ordered_json();
  j["data"] = nlohmann::ordered_json::parse(e.data.dump());
  return j.dump();
}

std::vector<EventRecord> ReadEventLog(std::istream& in) {
  std::vector<EventRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(EventFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw LogFormatError(n, std::string("invalid JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw LogFormatError(n, e.what());
    }
  }
  return out;
}

void WriteEventLog(std::ostream& out, const std::vector<EventRecord>& events) {
  for (const EventRecord& e : events) out << ToNdjsonLine(e) << '\n';
}

}  // namespace inquirylab::core
