// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_CORE_TYPES_H_
#define INQUIRYLAB_CORE_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inquirylab/core/ids.h"
#include "inquirylab/core/time.h"
#include "inquirylab/protocol/messages.h"

namespace inquirylab::core {

inline constexpr std::size_t kMaxSlots = 3;

// Text caps. Description and notes are free text.
struct TextLimits {
  std::size_t title = 120;
  std::size_t comment = 500;
  std::size_t label = 80;
  std::size_t class_name = 120;
};

enum class Role : std::uint8_t { kStudent, kTeacher, kResearcher };

std::string_view RoleName(Role role);
std::optional<Role> RoleFromName(std::string_view name);

// Deliberately nothing personally identifying: a generic handle and a role.
struct UserAccount {
  UserId id;
  std::string username;
  Role role = Role::kStudent;
  std::vector<ClassId> class_ids;
  Timestamp created_at;
};

struct ClassGroup {
  ClassId id;
  std::string name;
  std::string join_code;  // 6 characters, A-Z0-9
  UserId teacher_id;
  Timestamp created_at;
  std::vector<std::string> revoked_codes;
};

struct CaptureSlot {
  int index = 0;  // 0..2
  proto::Measurement measurement;
  std::string label;
  std::optional<std::string> photo_ref;
  Timestamp captured_at;

  friend bool operator==(const CaptureSlot&, const CaptureSlot&) = default;
};

enum class InquiryStatus : std::uint8_t { kDraft, kPublished };
std::string_view StatusName(InquiryStatus s);

enum class LineageKind : std::uint8_t { kReplication, kRemix };
std::string_view LineageKindName(LineageKind k);
std::optional<LineageKind> LineageKindFromName(std::string_view name);

enum class SourceClass : std::uint8_t { kOtherStudent, kExemplar, kOwn };
std::string_view SourceClassName(SourceClass s);
std::optional<SourceClass> SourceClassFromName(std::string_view name);

struct LineageLink {
  LineageKind kind = LineageKind::kReplication;
  InquiryId source_inquiry_id;
  SourceClass source_class = SourceClass::kOtherStudent;
};

// Null < Naive < Emerging < Informed.
enum class ScoreCategory : std::uint8_t { kNull = 0, kNaive = 1, kEmerging = 2, kInformed = 3 };
inline constexpr ScoreCategory kAllCategories[] = {ScoreCategory::kNull, ScoreCategory::kNaive,
                                                   ScoreCategory::kEmerging,
                                                   ScoreCategory::kInformed};
std::string_view CategoryName(ScoreCategory c);
std::optional<ScoreCategory> CategoryFromName(std::string_view name);

struct InquiryScore {
  ScoreCategory category = ScoreCategory::kNull;
  std::vector<std::string> evidence;  // fired rule ids
  bool overridden = false;

  friend bool operator==(const InquiryScore&, const InquiryScore&) = default;
};

// A human re-coding, with its audit trail.
struct ScoreOverride {
  ScoreCategory category = ScoreCategory::kNull;
  std::string reason;
  UserId by;
  Timestamp at;
};

struct Inquiry {
  InquiryId id;
  UserId author_id;
  ClassId class_id;  // empty for exemplars
  proto::SensorType sensor_type = proto::SensorType::kHeartRate;
  std::string title;
  std::string description;
  std::string notes;
  std::vector<CaptureSlot> slots;
  InquiryStatus status = InquiryStatus::kDraft;
  std::optional<LineageLink> lineage;
  Timestamp created_at;
  std::optional<Timestamp> published_at;
  std::optional<ScoreOverride> manual_score_override;
  bool exemplar = false;  // researcher-authored model inquiry

  bool published() const { return status == InquiryStatus::kPublished; }
};

struct Comment {
  CommentId id;
  InquiryId inquiry_id;
  UserId author_id;
  std::string body;
  Timestamp created_at;
};

}  // namespace inquirylab::core

#endif  // INQUIRYLAB_CORE_TYPES_H_
