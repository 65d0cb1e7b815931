// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/core/errors.h"
#include "inquirylab/core/types.h"

namespace inquirylab::core {
namespace {

template <typename E, std::size_t N>
std::optional<E> Lookup(std::string_view name, const E (&all)[N], std::string_view (*fn)(E)) {
  for (E e : all) {
    if (fn(e) == name) return e;
  }
  return std::nullopt;
}

}  // namespace

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kStudent: return "student";
    case Role::kTeacher: return "teacher";
    case Role::kResearcher: return "researcher";
  }
  return "?";
}

std::optional<Role> RoleFromName(std::string_view name) {
  static constexpr Role kAll[] = {Role::kStudent, Role::kTeacher, Role::kResearcher};
  return Lookup(name, kAll, RoleName);
}

std::string_view StatusName(InquiryStatus s) {
  return s == InquiryStatus::kPublished ? "published" : "draft";
}

std::string_view LineageKindName(LineageKind k) {
  return k == LineageKind::kRemix ? "remix" : "replication";
}

std::optional<LineageKind> LineageKindFromName(std::string_view name) {
  static constexpr LineageKind kAll[] = {LineageKind::kReplication, LineageKind::kRemix};
  return Lookup(name, kAll, LineageKindName);
}

std::string_view SourceClassName(SourceClass s) {
  switch (s) {
    case SourceClass::kOtherStudent: return "other-student";
    case SourceClass::kExemplar: return "exemplar";
    case SourceClass::kOwn: return "own";
  }
  return "?";
}

std::optional<SourceClass> SourceClassFromName(std::string_view name) {
  static constexpr SourceClass kAll[] = {SourceClass::kOtherStudent, SourceClass::kExemplar,
                                         SourceClass::kOwn};
  return Lookup(name, kAll, SourceClassName);
}

std::string_view CategoryName(ScoreCategory c) {
  switch (c) {
    case ScoreCategory::kNull: return "null";
    case ScoreCategory::kNaive: return "naive";
    case ScoreCategory::kEmerging: return "emerging";
    case ScoreCategory::kInformed: return "informed";
  }
  return "?";
}

std::optional<ScoreCategory> CategoryFromName(std::string_view name) {
  return Lookup(name, kAllCategories, CategoryName);
}

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAuthorization: return "authorization";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kExpiredCode: return "expired-code";
    case ErrorCode::kSlotLimit: return "slot-limit";
    case ErrorCode::kState: return "state";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kIntegrity: return "integrity";
  }
  return "?";
}

}  // namespace inquirylab::core
