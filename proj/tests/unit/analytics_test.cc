// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numeric>

#include "inquirylab/analytics/report.h"

namespace inquirylab::analytics {
namespace {

using core::LineageKind;
using core::Platform;
using core::Role;
using core::Timestamp;
using proto::SensorType;

Timestamp T(int hours) { return core::ParseTimestamp("2021-06-07T08:00:00Z") + std::chrono::hours(hours); }

const scoring::Rubric& Engine() {
  static const scoring::Rubric r = scoring::Rubric::FromFile();
  return r;
}

struct Small {
  Platform p;
  core::UserId teacher, a, b;
  core::ClassId cls;
  int clock = 0;

  Small() {
    teacher = p.Register("teach", Role::kTeacher, Tick());
    cls = p.CreateClass(teacher, "c", Tick());
    a = p.Register("alice", Role::kStudent, Tick());
    b = p.Register("bob", Role::kStudent, Tick());
    p.Join(a, p.FindClass(cls)->join_code, Tick());
    p.Join(b, p.FindClass(cls)->join_code, Tick());
  }
  Timestamp Tick() { return T(clock++); }
  core::InquiryId Published(core::UserId who, SensorType type = SensorType::kHeartRate) {
    const auto id = p.CreateInquiry(who, {type, cls, "t", "", ""}, Tick());
    proto::Measurement m{type, 0, std::vector<proto::Centi>(proto::ChannelCount(type), proto::Centi::FromDouble(1))};
    p.Capture(who, id, m, "x", std::nullopt, Tick());
    p.Publish(who, id, Tick());
    return id;
  }
};

TEST(ReportTest, EmptyLogIsAllZero) {
  const EngagementReport r = ReportFromLog({}, Engine());
  EXPECT_EQ(r.total_inquiries, 0u);
  EXPECT_EQ(r.active_users, 0u);
  EXPECT_EQ(r.lineage.total, 0u);
  EXPECT_TRUE(r.lineage.buckets.empty());
  EXPECT_TRUE(r.weekly_activity.empty());
  for (auto n : r.score_distribution) EXPECT_EQ(n, 0u);
  for (const auto& [t, n] : r.sensor_usage) EXPECT_EQ(n, 0u);
  EXPECT_EQ(r.sensor_usage.size(), 6u);
}

TEST(ReportTest, CountsAndConservation) {
  Small s;
  const auto src = s.Published(s.a);
  s.Published(s.b, SensorType::kVoc);
  s.p.CreateInquiry(s.b, {SensorType::kBodyTemp, s.cls, "", "", ""}, s.Tick());
  s.p.Derive(s.b, src, LineageKind::kReplication, s.cls, s.Tick());
  const EngagementReport r = ComputeReport(s.p, Engine());
  EXPECT_EQ(r.total_inquiries, 4u);
  EXPECT_EQ(r.published, 2u);
  EXPECT_EQ(r.drafts, 2u);
  EXPECT_EQ(r.active_users, 2u);
  EXPECT_EQ(r.replications, 1u);
  std::uint64_t sensors = 0;
  for (const auto& [t, n] : r.sensor_usage) sensors += n;
  EXPECT_EQ(sensors, r.total_inquiries);
  EXPECT_EQ(std::accumulate(r.score_distribution.begin(), r.score_distribution.end(), std::uint64_t{0}),
            r.total_inquiries);
  std::uint64_t events = 0;
  for (const WeekBucket& w : r.weekly_activity) events += w.events;
  EXPECT_EQ(events, s.p.log().size());
}

TEST(ReportTest, SingleReplicationIsWholeBucket) {
  Small s;
  const auto src = s.Published(s.a);
  s.p.Derive(s.b, src, LineageKind::kReplication, s.cls, s.Tick());
  const EngagementReport r = ComputeReport(s.p, Engine());
  ASSERT_EQ(r.lineage.total, 1u);
  ASSERT_EQ(r.lineage.buckets.size(), 3u);
  EXPECT_EQ(r.lineage.buckets[0].source_class, core::SourceClass::kOtherStudent);
  EXPECT_EQ(r.lineage.buckets[0].basis_points, 10000);
  EXPECT_EQ(r.lineage.buckets[1].basis_points, 0);
}

TEST(ReportTest, BasisPointsRoundHalfUp) {
  EXPECT_EQ(BasisPoints(49, 81), 6049);
  EXPECT_EQ(BasisPoints(24, 81), 2963);
  EXPECT_EQ(BasisPoints(8, 81), 988);
  EXPECT_EQ(BasisPoints(1, 8), 1250);
  EXPECT_EQ(BasisPoints(0, 0), 0);
}

TEST(ReportTest, DanglingLineageIsAnIntegrityError) {
  core::Inquiry orphan;
  orphan.id = core::InquiryId{2};
  orphan.lineage = core::LineageLink{LineageKind::kRemix, core::InquiryId{99}, core::SourceClass::kOwn};
  std::map<core::InquiryId, core::Inquiry> all{{orphan.id, orphan}};
  EXPECT_THROW(ComputeLineage({&all.at(orphan.id)}, all), core::DomainError);
}

TEST(ReportTest, OutOfOrderTimestampsNameTheRecord) {
  Small s;
  std::vector<core::EventRecord> log = s.p.log();
  log[3].timestamp = T(-5);
  try {
    ReportFromLog(log, Engine());
    FAIL();
  } catch (const IngestError& e) {
    EXPECT_EQ(e.record(), 4u);
  }
}

TEST(ReportTest, OneEventOneBucket) {
  const auto weeks = WeeklyActivity({core::EventRecord{T(3), core::UserId{1}, core::EventKind::kSessionStart, 1}});
  ASSERT_EQ(weeks.size(), 1u);
  EXPECT_EQ(weeks[0].events, 1u);
  EXPECT_EQ(weeks[0].sessions, 1u);
  EXPECT_EQ(core::FormatDate(weeks[0].start), "2021-06-07");
}

TEST(ReportTest, BucketsAreContiguous) {
  const auto weeks = WeeklyActivity({
      core::EventRecord{T(0), core::UserId{1}, core::EventKind::kSessionStart, 1},
      core::EventRecord{T(24 * 22), core::UserId{1}, core::EventKind::kSessionStart, 1},
  });
  ASSERT_EQ(weeks.size(), 4u);
  EXPECT_EQ(weeks[1].events + weeks[2].events, 0u);
  EXPECT_EQ(core::FormatDate(weeks[3].start), "2021-06-28");
}

TEST(ReportTest, ClassScopeRestrictsCounts) {
  Small s;
  s.Published(s.a);
  const auto t2 = s.p.Register("teach2", Role::kTeacher, s.Tick());
  const auto cls2 = s.p.CreateClass(t2, "other", s.Tick());
  const auto c = s.p.Register("carol", Role::kStudent, s.Tick());
  s.p.Join(c, s.p.FindClass(cls2)->join_code, s.Tick());
  s.p.CreateInquiry(c, {SensorType::kVoc, cls2, "", "", ""}, s.Tick());
  EXPECT_EQ(ComputeReport(s.p, Engine(), {.class_id = s.cls}).total_inquiries, 1u);
  EXPECT_EQ(ComputeReport(s.p, Engine(), {.class_id = cls2}).total_inquiries, 1u);
  EXPECT_EQ(ComputeReport(s.p, Engine()).total_inquiries, 2u);
}

TEST(ReportTest, ReportIsAPureFold) {
  Small s;
  const auto src = s.Published(s.a);
  s.p.Derive(s.b, src, LineageKind::kRemix, s.cls, s.Tick());
  EXPECT_EQ(ReportFromLog(s.p.log(), Engine()), ComputeReport(s.p, Engine()));
  EXPECT_EQ(RenderTable(ReportFromLog(s.p.log(), Engine())), RenderTable(ComputeReport(s.p, Engine())));
}

}  // namespace
}  // namespace inquirylab::analytics
