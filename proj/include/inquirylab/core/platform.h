// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// The inquiry workflow as an event-sourced aggregate.
//
// Every write goes through two steps. A Plan* call validates the request
// against the current state and returns the EventRecord it would produce,
// without touching anything. Commit() re-checks the record and applies it.
// Callers that persist state (the service) put their storage transaction
// between the two, so a failed write leaves neither the store nor the
// in-memory state half-updated.
//
// Replaying a log runs every record through the same Check/Apply path that
// live writes use, so a log that replays cleanly satisfies every workflow
// rule by construction.

#ifndef INQUIRYLAB_CORE_PLATFORM_H_
#define INQUIRYLAB_CORE_PLATFORM_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "inquirylab/core/errors.h"
#include "inquirylab/core/event.h"
#include "inquirylab/core/types.h"

namespace inquirylab::core {

struct PlatformOptions {
  TextLimits limits;
  std::uint64_t join_code_seed = 0x5EEDC0DE;
};

struct NewInquiry {
  proto::SensorType sensor_type = proto::SensorType::kHeartRate;
  std::optional<ClassId> class_id;
  std::string title;
  std::string description;
  std::string notes;
  bool exemplar = false;  // researchers only
};

struct InquiryEdit {
  std::optional<std::string> title;
  std::optional<std::string> description;
  std::optional<std::string> notes;
};

struct DiscoverFilter {
  std::optional<proto::SensorType> sensor;
  std::optional<ClassId> class_id;
  bool include_exemplars = false;
};

// Pure: depends only on the three inputs.
SourceClass ClassifySource(UserId source_author, UserId caller, bool source_is_exemplar);

// Number of Unicode code points in a UTF-8 string.
std::size_t TextLength(std::string_view utf8);

class Platform {
 public:
  explicit Platform(PlatformOptions options = {});

  // Rebuilds state from a log. A record that breaks a rule raises
  // DomainError(kIntegrity) naming its 1-based position.
  static Platform Replay(const std::vector<EventRecord>& log, PlatformOptions options = {});

  // --- planning (const; throws DomainError) ---
  EventRecord PlanRegister(std::string_view username, Role role, Timestamp at) const;
  EventRecord PlanCreateClass(UserId teacher, std::string_view name, Timestamp at) const;
  EventRecord PlanRegenerateCode(UserId teacher, ClassId cls, Timestamp at) const;
  // nullopt when the student is already a member (joins are idempotent).
  std::optional<EventRecord> PlanJoin(UserId student, std::string_view code, Timestamp at) const;
  EventRecord PlanSessionStart(UserId user, Timestamp at) const;
  EventRecord PlanCreateInquiry(UserId author, const NewInquiry& spec, Timestamp at) const;
  EventRecord PlanEdit(UserId caller, InquiryId id, const InquiryEdit& edit, Timestamp at) const;
  EventRecord PlanCapture(UserId caller, InquiryId id, const proto::Measurement& m,
                          std::string_view label, std::optional<std::string> photo_ref,
                          Timestamp at) const;
  EventRecord PlanPublish(UserId caller, InquiryId id, Timestamp at) const;
  EventRecord PlanComment(UserId caller, InquiryId id, std::string_view body, Timestamp at) const;
  EventRecord PlanDerive(UserId caller, InquiryId source, LineageKind kind,
                         std::optional<ClassId> class_id, Timestamp at) const;
  EventRecord PlanOverride(UserId caller, InquiryId id, ScoreCategory category,
                           std::string_view reason, Timestamp at) const;
  EventRecord PlanPhoto(UserId caller, std::string_view photo_id, std::size_t bytes,
                        std::string_view media_type, Timestamp at) const;

  // Validates `e` against the current state without applying it.
  void Check(const EventRecord& e) const;
  // Check, apply, append to the log.
  void Commit(const EventRecord& e);

  // --- convenience: plan + commit ---
  UserId Register(std::string_view username, Role role, Timestamp at);
  ClassId CreateClass(UserId teacher, std::string_view name, Timestamp at);
  std::string RegenerateCode(UserId teacher, ClassId cls, Timestamp at);
  ClassId Join(UserId student, std::string_view code, Timestamp at);
  InquiryId CreateInquiry(UserId author, const NewInquiry& spec, Timestamp at);
  void Edit(UserId caller, InquiryId id, const InquiryEdit& edit, Timestamp at);
  int Capture(UserId caller, InquiryId id, const proto::Measurement& m, std::string_view label,
              std::optional<std::string> photo_ref, Timestamp at);
  void Publish(UserId caller, InquiryId id, Timestamp at);
  CommentId AddComment(UserId caller, InquiryId id, std::string_view body, Timestamp at);
  InquiryId Derive(UserId caller, InquiryId source, LineageKind kind,
                   std::optional<ClassId> class_id, Timestamp at);
  void Override(UserId caller, InquiryId id, ScoreCategory category, std::string_view reason,
                Timestamp at);

  // --- queries ---
  const UserAccount* FindUser(UserId id) const;
  const UserAccount* FindUserByName(std::string_view username) const;
  const ClassGroup* FindClass(ClassId id) const;
  const Inquiry* FindInquiry(InquiryId id) const;

  // The inquiry as `viewer` may see it. Drafts of other users are NotFound.
  const Inquiry& View(UserId viewer, InquiryId id) const;
  bool Visible(UserId viewer, const Inquiry& inq) const;

  // Published inquiries, newest first by (published_at, id).
  std::vector<const Inquiry*> Discover(const DiscoverFilter& filter = {}) const;
  // Every inquiry the caller may see that they authored (drafts included).
  std::vector<const Inquiry*> AuthoredBy(UserId author) const;
  std::vector<const Comment*> CommentsOn(InquiryId id) const;

  const std::map<InquiryId, Inquiry>& inquiries() const { return inquiries_; }
  const std::map<UserId, UserAccount>& users() const { return users_; }
  const std::map<ClassId, ClassGroup>& classes() const { return classes_; }
  const std::map<CommentId, Comment>& comments() const { return comments_; }
  const std::vector<EventRecord>& log() const { return log_; }
  const PlatformOptions& options() const { return options_; }

  // The earliest timestamp the next write may carry.
  Timestamp Watermark() const { return watermark_; }

 private:
  const UserAccount& RequireUser(UserId id) const;
  const Inquiry& RequireInquiry(InquiryId id) const;
  const Inquiry& RequireOwnDraft(UserId caller, InquiryId id) const;
  bool IsAncestor(InquiryId candidate, InquiryId of) const;
  std::string MakeJoinCode(ClassId cls, std::size_t generation) const;

  void CheckRecord(const EventRecord& e) const;
  void Apply(const EventRecord& e);

  PlatformOptions options_;
  std::map<UserId, UserAccount> users_;
  std::unordered_map<std::string, UserId> usernames_;
  std::map<ClassId, ClassGroup> classes_;
  std::unordered_map<std::string, ClassId> active_codes_;
  std::unordered_map<std::string, ClassId> revoked_codes_;
  std::map<InquiryId, Inquiry> inquiries_;
  std::map<CommentId, Comment> comments_;
  std::vector<EventRecord> log_;
  Timestamp watermark_{};
  std::uint64_t next_user_ = 1, next_class_ = 1, next_inquiry_ = 1, next_comment_ = 1;
};

}  // namespace inquirylab::core

#endif  // INQUIRYLAB_CORE_PLATFORM_H_
