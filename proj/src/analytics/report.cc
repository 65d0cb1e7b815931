// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/analytics/report.h"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace inquirylab::analytics {
namespace {

using core::EventKind;
using core::EventRecord;
using core::Inquiry;
using core::SourceClass;

constexpr SourceClass kSourceOrder[] = {SourceClass::kOtherStudent, SourceClass::kExemplar, SourceClass::kOwn};

bool InScope(const EventRecord& e, const core::Platform& state, core::ClassId cls) {
  switch (e.kind) {
    case EventKind::kUserRegistered:
    case EventKind::kPhotoUploaded:
      return false;
    case EventKind::kClassCreated:
    case EventKind::kJoinCodeRegenerated:
    case EventKind::kClassJoined:
      return e.subject_id == cls.value;
    case EventKind::kSessionStart: {
      const core::UserAccount* u = state.FindUser(e.actor_id);
      const core::ClassGroup* c = state.FindClass(cls);
      if (u == nullptr || c == nullptr) return false;
      return c->teacher_id == u->id ||
             std::find(u->class_ids.begin(), u->class_ids.end(), cls) != u->class_ids.end();
    }
    default: {
      const Inquiry* inq = state.FindInquiry(core::InquiryId{e.subject_id});
      return inq != nullptr && inq->class_id == cls;
    }
  }
}

}  // namespace

core::ScoreCategory EngagementReport::ModalCategory() const {
  int best = 0;
  for (int i = 1; i < 4; ++i) {
    if (score_distribution[i] > score_distribution[best]) best = i;
  }
  return static_cast<core::ScoreCategory>(best);
}

bool operator==(const EngagementReport& a, const EngagementReport& b) {
  return ToJson(a) == ToJson(b);
}

std::int64_t BasisPoints(std::uint64_t count, std::uint64_t total) {
  if (total == 0) return 0;
  return static_cast<std::int64_t>((count * 20000 + total) / (2 * total));
}

LineageBreakdown ComputeLineage(const std::vector<const Inquiry*>& derived,
                                const std::map<core::InquiryId, Inquiry>& all) {
  LineageBreakdown out;
  std::map<SourceClass, LineageBucket> buckets;
  for (const Inquiry* inq : derived) {
    if (!inq->lineage) continue;
    if (all.count(inq->lineage->source_inquiry_id) == 0) {
      throw core::DomainError(core::ErrorCode::kIntegrity,
                              "inquiry " + std::to_string(inq->id.value) + " derives from unknown inquiry " +
                                  std::to_string(inq->lineage->source_inquiry_id.value));
    }
    LineageBucket& b = buckets[inq->lineage->source_class];
    (inq->lineage->kind == core::LineageKind::kRemix ? b.remixes : b.replications) += 1;
    ++b.count;
    ++out.total;
  }
  if (out.total == 0) return out;
  for (SourceClass sc : kSourceOrder) {
    LineageBucket b = buckets[sc];
    b.source_class = sc;
    b.basis_points = BasisPoints(b.count, out.total);
    out.buckets.push_back(b);
  }
  return out;
}

std::array<std::uint64_t, 4> ScoreDistribution(const std::vector<const Inquiry*>& inquiries,
                                               const scoring::Rubric& rubric) {
  std::array<std::uint64_t, 4> out{};
  for (const Inquiry* inq : inquiries) ++out[static_cast<int>(rubric.Score(*inq).category)];
  return out;
}

std::vector<WeekBucket> WeeklyActivity(const std::vector<EventRecord>& events, int days) {
  std::vector<WeekBucket> out;
  if (events.empty()) return out;
  if (days < 1) throw std::invalid_argument("bucket size must be at least one day");
  const core::Timestamp origin{std::chrono::floor<std::chrono::days>(events.front().timestamp)};
  const std::chrono::milliseconds width = std::chrono::days{days};
  for (const EventRecord& e : events) {
    const auto idx = static_cast<std::size_t>((e.timestamp - origin) / width);
    while (out.size() <= idx) out.push_back({origin + width * static_cast<int>(out.size())});
    WeekBucket& b = out[idx];
    ++b.events;
    if (e.kind == EventKind::kSessionStart) ++b.sessions;
    if (core::CreatesInquiry(e.kind)) ++b.inquiries;
  }
  return out;
}

EngagementReport ComputeReport(const core::Platform& state, const scoring::Rubric& rubric,
                               const ReportScope& scope) {
  EngagementReport r;
  for (proto::SensorType t : proto::kAllSensorTypes) r.sensor_usage[t] = 0;

  std::vector<const Inquiry*> counted;
  for (const auto& [id, inq] : state.inquiries()) {
    if (inq.exemplar) continue;
    if (scope.class_id && inq.class_id != *scope.class_id) continue;
    counted.push_back(&inq);
  }
  std::set<core::UserId> authors;
  for (const Inquiry* inq : counted) {
    ++r.total_inquiries;
    ++(inq->published() ? r.published : r.drafts);
    ++r.sensor_usage[inq->sensor_type];
    if (inq->lineage) ++(inq->lineage->kind == core::LineageKind::kRemix ? r.remixes : r.replications);
    else authors.insert(inq->author_id);
  }
  r.active_users = authors.size();
  for (const auto& [cid, c] : state.comments()) {
    const Inquiry* inq = state.FindInquiry(c.inquiry_id);
    if (inq != nullptr && !inq->exemplar && (!scope.class_id || inq->class_id == *scope.class_id)) ++r.comments;
  }
  r.lineage = ComputeLineage(counted, state.inquiries());
  r.score_distribution = ScoreDistribution(counted, rubric);

  if (scope.class_id) {
    std::vector<EventRecord> scoped;
    for (const EventRecord& e : state.log()) {
      if (InScope(e, state, *scope.class_id)) scoped.push_back(e);
    }
    r.weekly_activity = WeeklyActivity(scoped, scope.bucket_days);
  } else {
    r.weekly_activity = WeeklyActivity(state.log(), scope.bucket_days);
  }
  return r;
}

EngagementReport ReportFromLog(const std::vector<EventRecord>& log, const scoring::Rubric& rubric,
                               const ReportScope& scope) {
  for (std::size_t i = 1; i < log.size(); ++i) {
    if (log[i].timestamp < log[i - 1].timestamp) {
      throw IngestError(i + 1, "timestamp " + core::FormatTimestamp(log[i].timestamp) +
                                   " is earlier than the previous record's " +
                                   core::FormatTimestamp(log[i - 1].timestamp));
    }
  }
  core::Platform state;
  for (std::size_t i = 0; i < log.size(); ++i) {
    try {
      state.Commit(log[i]);
    } catch (const core::DomainError& e) {
      throw IngestError(i + 1, std::string(core::EventKindName(log[i].kind)) + ": " + e.what());
    }
  }
  return ComputeReport(state, rubric, scope);
}

nlohmann::json ToJson(const std::vector<WeekBucket>& weeks) {
  nlohmann::json out = nlohmann::json::array();
  for (const WeekBucket& w : weeks) {
    out.push_back({{"week_start", core::FormatDate(w.start)},
                   {"events", w.events},
                   {"sessions", w.sessions},
                   {"inquiries", w.inquiries}});
  }
  return out;
}

nlohmann::json ToJson(const EngagementReport& r) {
  nlohmann::json lineage = {{"denominator", r.lineage.total}, {"buckets", nlohmann::json::array()}};
  for (const LineageBucket& b : r.lineage.buckets) {
    lineage["buckets"].push_back({{"source_class", core::SourceClassName(b.source_class)},
                                  {"count", b.count},
                                  {"replications", b.replications},
                                  {"remixes", b.remixes},
                                  {"percent", b.percent()}});
  }
  nlohmann::json sensors = nlohmann::json::object();
  for (const auto& [t, n] : r.sensor_usage) sensors[std::string(proto::SensorName(t))] = n;
  nlohmann::json scores = nlohmann::json::object();
  for (core::ScoreCategory c : core::kAllCategories) scores[std::string(core::CategoryName(c))] = r.Score(c);
  return {{"total_inquiries", r.total_inquiries},
          {"active_users", r.active_users},
          {"published", r.published},
          {"drafts", r.drafts},
          {"replications", r.replications},
          {"remixes", r.remixes},
          {"comments", r.comments},
          {"lineage_breakdown", lineage},
          {"sensor_usage", sensors},
          {"score_distribution", scores},
          {"weekly_activity", ToJson(r.weekly_activity)}};
}

std::string RenderTable(const EngagementReport& r) {
  std::string out;
  auto row = [&](std::string_view k, const std::string& v) { out += fmt::format("  {:<26}{:>10}\n", k, v); };
  out += "Engagement\n";
  row("total inquiries", std::to_string(r.total_inquiries));
  row("active users", std::to_string(r.active_users));
  row("published", std::to_string(r.published));
  row("drafts", std::to_string(r.drafts));
  row("replications", std::to_string(r.replications));
  row("remixes", std::to_string(r.remixes));
  row("comments", std::to_string(r.comments));
  out += fmt::format("\nLineage (of {} replications + remixes)\n", r.lineage.total);
  for (const LineageBucket& b : r.lineage.buckets) {
    out += fmt::format("  {:<16}{:>6}{:>10}%   ({} replications, {} remixes)\n",
                       core::SourceClassName(b.source_class), b.count,
                       fmt::format("{}.{:02}", b.basis_points / 100, b.basis_points % 100), b.replications,
                       b.remixes);
  }
  out += "\nSensor usage\n";
  for (const auto& [t, n] : r.sensor_usage) row(proto::SensorName(t), std::to_string(n));
  out += "\nScore distribution\n";
  for (core::ScoreCategory c : core::kAllCategories) row(core::CategoryName(c), std::to_string(r.Score(c)));
  out += "\nWeekly activity\n";
  out += fmt::format("  {:<12}{:>8}{:>10}{:>11}\n", "week", "events", "sessions", "inquiries");
  for (const WeekBucket& w : r.weekly_activity) {
    out += fmt::format("  {:<12}{:>8}{:>10}{:>11}\n", core::FormatDate(w.start), w.events, w.sessions, w.inquiries);
  }
  return out;
}

}  // namespace inquirylab::analytics
