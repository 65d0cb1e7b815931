// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "inquirylab/analytics/report.h"
#include "inquirylab/fixture/generator.h"

namespace inquirylab::fixture {
namespace {

using core::ScoreCategory;
using core::SourceClass;
using proto::SensorType;

const scoring::Rubric& Engine() {
  static const scoring::Rubric r = scoring::Rubric::FromFile();
  return r;
}

const Corpus& Generated() {
  static const Corpus c = GenerateCorpus(CorpusPlan{}, Engine());
  return c;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(FixtureTest, ReportMatchesPlan) {
  const analytics::EngagementReport r = analytics::ReportFromLog(Generated().events, Engine());
  EXPECT_EQ(r.total_inquiries, 1336u);
  EXPECT_EQ(r.active_users, 409u);
  EXPECT_EQ(r.published, 988u);
  EXPECT_EQ(r.drafts, 348u);
  EXPECT_EQ(r.replications, 74u);
  EXPECT_EQ(r.remixes, 7u);
  EXPECT_EQ(r.comments, 312u);
  ASSERT_EQ(r.lineage.total, 81u);
  ASSERT_EQ(r.lineage.buckets.size(), 3u);
  // (n * 20000 + 81) / 162 for n = 49, 24, 8
  EXPECT_EQ(r.lineage.buckets[0].source_class, SourceClass::kOtherStudent);
  EXPECT_EQ(r.lineage.buckets[0].basis_points, 6049);
  EXPECT_EQ(r.lineage.buckets[1].basis_points, 2963);
  EXPECT_EQ(r.lineage.buckets[2].basis_points, 988);
  EXPECT_EQ(r.sensor_usage.at(SensorType::kHeartRate), 336u);
  EXPECT_EQ(r.sensor_usage.at(SensorType::kTempHumidity), 275u);
  EXPECT_EQ(r.sensor_usage.at(SensorType::kVoc), 75u);
  EXPECT_EQ(r.Score(ScoreCategory::kInformed), 13u);
  EXPECT_EQ(r.Score(ScoreCategory::kNaive), 721u);
  EXPECT_EQ(r.ModalCategory(), ScoreCategory::kNaive);
}

TEST(FixtureTest, WeeklyActivityDipsInTheLowWindow) {
  const auto weeks = analytics::WeeklyActivity(Generated().events);
  ASSERT_EQ(weeks.size(), 27u);
  EXPECT_EQ(core::FormatDate(weeks.front().start), "2021-06-07");
  std::uint64_t low = 0, high = 0;
  int n_low = 0, n_high = 0;
  for (const auto& w : weeks) {
    const std::string d = core::FormatDate(w.start);
    if (d >= "2021-08-23" && d < "2021-11-14") {
      low += w.events, ++n_low;
    } else {
      high += w.events, ++n_high;
    }
  }
  EXPECT_LT(low * 3 / static_cast<std::uint64_t>(n_low), high / static_cast<std::uint64_t>(n_high));
}

TEST(FixtureTest, LabelsAgreeWithTheEngine) {
  core::Platform p = core::Platform::Replay(Generated().events);
  ASSERT_EQ(Generated().labels.size(), p.inquiries().size());
  for (const auto& [id, cat] : Generated().labels) {
    ASSERT_EQ(Engine().Score(*p.FindInquiry(id)).category, cat) << id.value;
  }
}

TEST(FixtureTest, RegenerationIsByteIdentical) {
  const Corpus again = GenerateCorpus(CorpusPlan{}, Engine());
  std::ostringstream a, b;
  core::WriteEventLog(a, Generated().events);
  core::WriteEventLog(b, again.events);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(Generated().manifest, again.manifest);
}

TEST(FixtureTest, BundledFilesAreCurrent) {
  const std::string dir = ::testing::TempDir() + "/fixture_regen";
  WriteCorpus(Generated(), dir);
  for (const char* name : {"events.ndjson", "labels.csv", "manifest.json"}) {
    EXPECT_EQ(Slurp(dir + "/" + name), Slurp(DefaultCorpusDir() + "/" + name)) << name;
  }
  EXPECT_EQ(ReadLabels(DefaultCorpusDir() + "/labels.csv"), Generated().labels);
}

TEST(FixtureTest, WaterMoleculesIsInTheCorpus) {
  core::Platform p = core::Platform::Replay(Generated().events);
  int found = 0;
  for (const auto& [id, inq] : p.inquiries()) {
    if (inq.title != "Water molecules") continue;
    ++found;
    EXPECT_EQ(Engine().Score(inq).evidence, std::vector<std::string>{"labeled_measurements"});
  }
  EXPECT_EQ(found, 1);
}

}  // namespace
}  // namespace inquirylab::fixture
