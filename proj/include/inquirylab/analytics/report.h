// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_ANALYTICS_REPORT_H_
#define INQUIRYLAB_ANALYTICS_REPORT_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "inquirylab/core/event.h"
#include "inquirylab/core/platform.h"
#include "inquirylab/scoring/rubric.h"

namespace inquirylab::analytics {

// Raised for logs that cannot be folded: ordering or integrity problems.
// `record` is the 1-based position of the offending record.
class IngestError : public std::runtime_error {
 public:
  IngestError(std::size_t record, const std::string& what)
      : std::runtime_error("record " + std::to_string(record) + ": " + what), record_(record) {}
  std::size_t record() const { return record_; }

 private:
  std::size_t record_;
};

struct LineageBucket {
  core::SourceClass source_class = core::SourceClass::kOtherStudent;
  std::uint64_t replications = 0;
  std::uint64_t remixes = 0;
  std::uint64_t count = 0;        // replications + remixes
  std::int64_t basis_points = 0;  // share of all lineage, in 1/100 of a percent

  double percent() const { return static_cast<double>(basis_points) / 100.0; }
};

struct LineageBreakdown {
  std::uint64_t total = 0;  // the shared denominator
  std::vector<LineageBucket> buckets;  // empty when total is 0
};

struct WeekBucket {
  core::Timestamp start;
  std::uint64_t events = 0;
  std::uint64_t sessions = 0;
  std::uint64_t inquiries = 0;
};

struct EngagementReport {
  std::uint64_t total_inquiries = 0;
  std::uint64_t active_users = 0;
  std::uint64_t published = 0;
  std::uint64_t drafts = 0;
  std::uint64_t replications = 0;
  std::uint64_t remixes = 0;
  std::uint64_t comments = 0;
  LineageBreakdown lineage;
  std::map<proto::SensorType, std::uint64_t> sensor_usage;  // all six types present
  std::array<std::uint64_t, 4> score_distribution{};        // indexed by ScoreCategory
  std::vector<WeekBucket> weekly_activity;

  std::uint64_t Score(core::ScoreCategory c) const { return score_distribution[static_cast<int>(c)]; }
  core::ScoreCategory ModalCategory() const;
  friend bool operator==(const EngagementReport&, const EngagementReport&);
};

struct ReportScope {
  std::optional<core::ClassId> class_id;
  int bucket_days = 7;
};

// Exemplars never count toward totals.
EngagementReport ComputeReport(const core::Platform& state, const scoring::Rubric& rubric,
                               const ReportScope& scope = {});

// Validates ordering, replays, then computes. Throws IngestError.
EngagementReport ReportFromLog(const std::vector<core::EventRecord>& log, const scoring::Rubric& rubric,
                               const ReportScope& scope = {});

// Percentages use one denominator: every replication and remix together.
// Throws DomainError(kIntegrity) when a link points at an unknown inquiry.
LineageBreakdown ComputeLineage(const std::vector<const core::Inquiry*>& derived,
                                const std::map<core::InquiryId, core::Inquiry>& all);

std::array<std::uint64_t, 4> ScoreDistribution(const std::vector<const core::Inquiry*>& inquiries,
                                               const scoring::Rubric& rubric);

// Buckets of `days` days starting on the calendar date of the first event.
std::vector<WeekBucket> WeeklyActivity(const std::vector<core::EventRecord>& events, int days = 7);

// count / total rounded half-up to 1/100 of a percent.
std::int64_t BasisPoints(std::uint64_t count, std::uint64_t total);

nlohmann::json ToJson(const EngagementReport& r);
nlohmann::json ToJson(const std::vector<WeekBucket>& weeks);
std::string RenderTable(const EngagementReport& r);

}  // namespace inquirylab::analytics

#endif  // INQUIRYLAB_ANALYTICS_REPORT_H_
