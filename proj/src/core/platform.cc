// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/core/platform.h"

#include <algorithm>
#include <cctype>

namespace inquirylab::core {
namespace {

using nlohmann::json;
using proto::SensorType;

[[noreturn]] void Fail(ErrorCode code, const std::string& what, std::vector<std::string> fields = {}) {
  throw DomainError(code, what, std::move(fields));
}

// Accessors for record payloads. A missing or mistyped field can only come
// from a hand-edited log, so it is an integrity problem.
const json& Field(const EventRecord& e, const char* key) {
  auto it = e.data.find(key);
  if (it == e.data.end()) Fail(ErrorCode::kIntegrity, std::string("record lacks data.") + key);
  return *it;
}

std::string Str(const EventRecord& e, const char* key) {
  const json& v = Field(e, key);
  if (!v.is_string()) Fail(ErrorCode::kIntegrity, std::string("data.") + key + " must be a string");
  return v.get<std::string>();
}

std::string StrOr(const EventRecord& e, const char* key) {
  return e.data.contains(key) ? Str(e, key) : std::string();
}

std::uint64_t Uint(const EventRecord& e, const char* key) {
  const json& v = Field(e, key);
  if (!v.is_number_unsigned()) Fail(ErrorCode::kIntegrity, std::string("data.") + key + " must be unsigned");
  return v.get<std::uint64_t>();
}

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

bool ValidUsername(std::string_view name) {
  if (name.size() < 3 || name.size() > 32) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

// Truncates to at most `n` code points.
std::string TruncateText(std::string_view s, std::size_t n) {
  std::size_t points = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (points == n) return std::string(s.substr(0, i));
      ++points;
    }
  }
  return std::string(s);
}

SensorType RequireSensor(const EventRecord& e) {
  if (!e.sensor_type) Fail(ErrorCode::kIntegrity, "record lacks sensor_type");
  return *e.sensor_type;
}

}  // namespace

SourceClass ClassifySource(UserId source_author, UserId caller, bool source_is_exemplar) {
  if (source_is_exemplar) return SourceClass::kExemplar;
  return source_author == caller ? SourceClass::kOwn : SourceClass::kOtherStudent;
}

std::size_t TextLength(std::string_view utf8) {
  return static_cast<std::size_t>(std::count_if(utf8.begin(), utf8.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

Platform::Platform(PlatformOptions options) : options_(options) {}

Platform Platform::Replay(const std::vector<EventRecord>& log, PlatformOptions options) {
  Platform p(options);
  for (std::size_t i = 0; i < log.size(); ++i) {
    try {
      p.Commit(log[i]);
    } catch (const DomainError& e) {
      Fail(ErrorCode::kIntegrity, "record " + std::to_string(i + 1) + " (" +
                                      std::string(EventKindName(log[i].kind)) + "): " + e.what());
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Lookups

const UserAccount* Platform::FindUser(UserId id) const {
  auto it = users_.find(id);
  return it == users_.end() ? nullptr : &it->second;
}

const UserAccount* Platform::FindUserByName(std::string_view username) const {
  auto it = usernames_.find(std::string(username));
  return it == usernames_.end() ? nullptr : FindUser(it->second);
}

const ClassGroup* Platform::FindClass(ClassId id) const {
  auto it = classes_.find(id);
  return it == classes_.end() ? nullptr : &it->second;
}

const Inquiry* Platform::FindInquiry(InquiryId id) const {
  auto it = inquiries_.find(id);
  return it == inquiries_.end() ? nullptr : &it->second;
}

const UserAccount& Platform::RequireUser(UserId id) const {
  const UserAccount* u = FindUser(id);
  if (u == nullptr) Fail(ErrorCode::kAuthorization, "unknown user " + std::to_string(id.value));
  return *u;
}

const Inquiry& Platform::RequireInquiry(InquiryId id) const {
  const Inquiry* inq = FindInquiry(id);
  if (inq == nullptr) Fail(ErrorCode::kNotFound, "inquiry " + std::to_string(id.value) + " not found");
  return *inq;
}

const Inquiry& Platform::RequireOwnDraft(UserId caller, InquiryId id) const {
  const Inquiry& inq = RequireInquiry(id);
  if (inq.author_id != caller) Fail(ErrorCode::kAuthorization, "only the author may change an inquiry");
  if (inq.published()) Fail(ErrorCode::kState, "inquiry is already published");
  return inq;
}

bool Platform::Visible(UserId viewer, const Inquiry& inq) const {
  return inq.published() || inq.author_id == viewer;
}

const Inquiry& Platform::View(UserId viewer, InquiryId id) const {
  const Inquiry* inq = FindInquiry(id);
  if (inq == nullptr || !Visible(viewer, *inq)) {
    Fail(ErrorCode::kNotFound, "inquiry " + std::to_string(id.value) + " not found");
  }
  return *inq;
}

std::vector<const Inquiry*> Platform::Discover(const DiscoverFilter& filter) const {
  std::vector<const Inquiry*> out;
  for (const auto& [id, inq] : inquiries_) {
    if (!inq.published()) continue;
    if (inq.exemplar && !filter.include_exemplars) continue;
    if (filter.sensor && inq.sensor_type != *filter.sensor) continue;
    if (filter.class_id && inq.class_id != *filter.class_id) continue;
    out.push_back(&inq);
  }
  std::sort(out.begin(), out.end(), [](const Inquiry* a, const Inquiry* b) {
    if (*a->published_at != *b->published_at) return *a->published_at > *b->published_at;
    return a->id > b->id;
  });
  return out;
}

std::vector<const Inquiry*> Platform::AuthoredBy(UserId author) const {
  std::vector<const Inquiry*> out;
  for (const auto& [id, inq] : inquiries_) {
    if (inq.author_id == author) out.push_back(&inq);
  }
  return out;
}

std::vector<const Comment*> Platform::CommentsOn(InquiryId id) const {
  std::vector<const Comment*> out;
  for (const auto& [cid, c] : comments_) {
    if (c.inquiry_id == id) out.push_back(&c);
  }
  return out;
}

bool Platform::IsAncestor(InquiryId candidate, InquiryId of) const {
  const Inquiry* cur = FindInquiry(of);
  while (cur != nullptr) {
    if (cur->id == candidate) return true;
    if (!cur->lineage) return false;
    cur = FindInquiry(cur->lineage->source_inquiry_id);
  }
  return false;
}

std::string Platform::MakeJoinCode(ClassId cls, std::size_t generation) const {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  for (std::uint64_t salt = 0;; ++salt) {
    std::uint64_t h = SplitMix(options_.join_code_seed ^ SplitMix(cls.value ^ SplitMix(generation + (salt << 32))));
    std::string code(6, 'A');
    for (char& c : code) {
      c = kAlphabet[h % 36];
      h /= 36;
    }
    if (active_codes_.count(code) == 0 && revoked_codes_.count(code) == 0) return code;
  }
}

// ---------------------------------------------------------------------------
// Planning

EventRecord Platform::PlanRegister(std::string_view username, Role role, Timestamp at) const {
  const UserId id{next_user_};
  EventRecord e{at, id, EventKind::kUserRegistered, id.value, std::nullopt,
                {{"username", username}, {"role", RoleName(role)}}};
  Check(e);
  return e;
}

EventRecord Platform::PlanCreateClass(UserId teacher, std::string_view name, Timestamp at) const {
  const ClassId id{next_class_};
  EventRecord e{at, teacher, EventKind::kClassCreated, id.value, std::nullopt,
                {{"name", name}, {"join_code", MakeJoinCode(id, 0)}}};
  Check(e);
  return e;
}

EventRecord Platform::PlanRegenerateCode(UserId teacher, ClassId cls, Timestamp at) const {
  const ClassGroup* c = FindClass(cls);
  if (c == nullptr) Fail(ErrorCode::kNotFound, "class not found");
  EventRecord e{at, teacher, EventKind::kJoinCodeRegenerated, cls.value, std::nullopt,
                {{"join_code", MakeJoinCode(cls, c->revoked_codes.size() + 1)}}};
  Check(e);
  return e;
}

std::optional<EventRecord> Platform::PlanJoin(UserId student, std::string_view code,
                                              Timestamp at) const {
  std::string upper(code);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  ClassId cls;
  if (auto it = active_codes_.find(upper); it != active_codes_.end()) {
    cls = it->second;
  } else if (revoked_codes_.count(upper) != 0) {
    Fail(ErrorCode::kExpiredCode, "join code has been replaced");
  } else {
    Fail(ErrorCode::kNotFound, "unknown join code");
  }
  const UserAccount& u = RequireUser(student);
  if (std::find(u.class_ids.begin(), u.class_ids.end(), cls) != u.class_ids.end()) return std::nullopt;
  EventRecord e{at, student, EventKind::kClassJoined, cls.value, std::nullopt, json::object()};
  Check(e);
  return e;
}

EventRecord Platform::PlanSessionStart(UserId user, Timestamp at) const {
  EventRecord e{at, user, EventKind::kSessionStart, user.value, std::nullopt, json::object()};
  Check(e);
  return e;
}

EventRecord Platform::PlanCreateInquiry(UserId author, const NewInquiry& spec, Timestamp at) const {
  json data = {{"class_id", spec.class_id ? spec.class_id->value : 0},
               {"title", spec.title},
               {"description", spec.description},
               {"notes", spec.notes}};
  if (spec.exemplar) data["exemplar"] = true;
  EventRecord e{at, author, EventKind::kInquiryCreated, next_inquiry_, spec.sensor_type, std::move(data)};
  Check(e);
  return e;
}

EventRecord Platform::PlanEdit(UserId caller, InquiryId id, const InquiryEdit& edit,
                               Timestamp at) const {
  json data = json::object();
  if (edit.title) data["title"] = *edit.title;
  if (edit.description) data["description"] = *edit.description;
  if (edit.notes) data["notes"] = *edit.notes;
  const Inquiry& inq = RequireInquiry(id);
  EventRecord e{at, caller, EventKind::kInquiryEdited, id.value, inq.sensor_type, std::move(data)};
  Check(e);
  return e;
}

EventRecord Platform::PlanCapture(UserId caller, InquiryId id, const proto::Measurement& m,
                                  std::string_view label, std::optional<std::string> photo_ref,
                                  Timestamp at) const {
  const Inquiry& inq = RequireInquiry(id);
  json values = json::array();
  for (const proto::Centi& v : m.values) values.push_back(v.raw);
  json data = {{"index", inq.slots.size()},
               {"label", label},
               {"measurement_sensor", proto::SensorName(m.sensor_type)},
               {"timestamp_ms", m.timestamp_ms},
               {"values", std::move(values)}};
  if (photo_ref) data["photo_ref"] = *photo_ref;
  EventRecord e{at, caller, EventKind::kDataCaptured, id.value, inq.sensor_type, std::move(data)};
  Check(e);
  return e;
}

EventRecord Platform::PlanPublish(UserId caller, InquiryId id, Timestamp at) const {
  const Inquiry& inq = RequireInquiry(id);
  EventRecord e{at, caller, EventKind::kPublished, id.value, inq.sensor_type, json::object()};
  Check(e);
  return e;
}

EventRecord Platform::PlanComment(UserId caller, InquiryId id, std::string_view body,
                                  Timestamp at) const {
  const Inquiry& inq = View(caller, id);
  EventRecord e{at, caller, EventKind::kComment, id.value, inq.sensor_type,
                {{"comment_id", next_comment_}, {"body", body}}};
  Check(e);
  return e;
}

EventRecord Platform::PlanDerive(UserId caller, InquiryId source, LineageKind kind,
                                 std::optional<ClassId> class_id, Timestamp at) const {
  const Inquiry& src = View(caller, source);
  if (!src.published()) Fail(ErrorCode::kNotFound, "source inquiry is not published");
  json data = {{"source_id", source.value},
               {"source_class", SourceClassName(ClassifySource(src.author_id, caller, src.exemplar))},
               {"class_id", class_id ? class_id->value : 0}};
  if (kind == LineageKind::kReplication) {
    data["title"] = src.title;
    data["description"] = src.description;
    data["notes"] = src.notes;
  } else {
    data["title"] = TruncateText(src.title + " (remix)", options_.limits.title);
    data["description"] = src.description;
    data["notes"] = "";
  }
  EventRecord e{at, caller, kind == LineageKind::kRemix ? EventKind::kRemix : EventKind::kReplication,
                next_inquiry_, src.sensor_type, std::move(data)};
  Check(e);
  return e;
}

EventRecord Platform::PlanOverride(UserId caller, InquiryId id, ScoreCategory category,
                                   std::string_view reason, Timestamp at) const {
  const Inquiry& inq = RequireInquiry(id);
  EventRecord e{at, caller, EventKind::kScoreOverridden, id.value, inq.sensor_type,
                {{"category", CategoryName(category)}, {"reason", reason}}};
  Check(e);
  return e;
}

EventRecord Platform::PlanPhoto(UserId caller, std::string_view photo_id, std::size_t bytes,
                                std::string_view media_type, Timestamp at) const {
  EventRecord e{at, caller, EventKind::kPhotoUploaded, 0, std::nullopt,
                {{"photo_id", photo_id}, {"bytes", bytes}, {"media_type", media_type}}};
  Check(e);
  return e;
}

// ---------------------------------------------------------------------------
// Checking

void Platform::Check(const EventRecord& e) const {
  if (e.timestamp < watermark_) {
    Fail(ErrorCode::kIntegrity, "timestamp " + FormatTimestamp(e.timestamp) +
                                    " precedes previous record " + FormatTimestamp(watermark_));
  }
  if (!e.data.is_object()) Fail(ErrorCode::kIntegrity, "data must be an object");
  CheckRecord(e);
}

void Platform::CheckRecord(const EventRecord& e) const {
  const TextLimits& lim = options_.limits;
  auto check_texts = [&](const std::string& title) {
    if (TextLength(title) > lim.title) {
      Fail(ErrorCode::kValidation, "title exceeds " + std::to_string(lim.title) + " characters", {"title"});
    }
  };
  // Class an inquiry may be filed under: one the author belongs to or teaches.
  auto check_class = [&](const UserAccount& author, std::uint64_t class_id, bool exemplar) {
    if (exemplar) {
      if (author.role != Role::kResearcher) Fail(ErrorCode::kAuthorization, "only researchers author exemplars");
      if (class_id != 0) Fail(ErrorCode::kValidation, "exemplars belong to no class", {"class_id"});
      return;
    }
    if (class_id == 0) return;
    const ClassGroup* c = FindClass(ClassId{class_id});
    if (c == nullptr) Fail(ErrorCode::kNotFound, "class not found");
    const bool member = std::find(author.class_ids.begin(), author.class_ids.end(), c->id) !=
                        author.class_ids.end();
    if (!member && c->teacher_id != author.id) Fail(ErrorCode::kAuthorization, "not a member of the class");
  };
  auto fresh_inquiry = [&] {
    if (FindInquiry(InquiryId{e.subject_id}) != nullptr || e.subject_id == 0) {
      Fail(ErrorCode::kIntegrity, "inquiry id " + std::to_string(e.subject_id) + " already used");
    }
  };

  switch (e.kind) {
    case EventKind::kUserRegistered: {
      const std::string name = Str(e, "username");
      if (!ValidUsername(name)) {
        Fail(ErrorCode::kValidation, "username must be 3-32 characters of A-Z a-z 0-9 _ . -", {"username"});
      }
      if (!RoleFromName(Str(e, "role"))) Fail(ErrorCode::kValidation, "unknown role", {"role"});
      if (usernames_.count(name) != 0) Fail(ErrorCode::kConflict, "username already taken", {"username"});
      if (e.subject_id == 0 || e.actor_id.value != e.subject_id || FindUser(e.actor_id) != nullptr) {
        Fail(ErrorCode::kIntegrity, "user id " + std::to_string(e.subject_id) + " already used");
      }
      return;
    }
    case EventKind::kClassCreated: {
      if (RequireUser(e.actor_id).role != Role::kTeacher) {
        Fail(ErrorCode::kAuthorization, "only teachers create classes");
      }
      const std::string name = Str(e, "name");
      if (name.empty() || TextLength(name) > lim.class_name) {
        Fail(ErrorCode::kValidation, "class name must be 1-" + std::to_string(lim.class_name) + " characters", {"name"});
      }
      const std::string code = Str(e, "join_code");
      if (active_codes_.count(code) != 0 || revoked_codes_.count(code) != 0) {
        Fail(ErrorCode::kIntegrity, "join code reused");
      }
      if (e.subject_id == 0 || FindClass(ClassId{e.subject_id}) != nullptr) {
        Fail(ErrorCode::kIntegrity, "class id already used");
      }
      return;
    }
    case EventKind::kJoinCodeRegenerated: {
      const ClassGroup* c = FindClass(ClassId{e.subject_id});
      if (c == nullptr) Fail(ErrorCode::kNotFound, "class not found");
      RequireUser(e.actor_id);
      if (c->teacher_id != e.actor_id) Fail(ErrorCode::kAuthorization, "only the class teacher may do that");
      const std::string code = Str(e, "join_code");
      if (active_codes_.count(code) != 0 || revoked_codes_.count(code) != 0) {
        Fail(ErrorCode::kIntegrity, "join code reused");
      }
      return;
    }
    case EventKind::kClassJoined: {
      const UserAccount& u = RequireUser(e.actor_id);
      if (u.role != Role::kStudent) Fail(ErrorCode::kAuthorization, "only students join classes");
      if (FindClass(ClassId{e.subject_id}) == nullptr) Fail(ErrorCode::kNotFound, "class not found");
      if (std::find(u.class_ids.begin(), u.class_ids.end(), ClassId{e.subject_id}) != u.class_ids.end()) {
        Fail(ErrorCode::kIntegrity, "duplicate membership");
      }
      return;
    }
    case EventKind::kSessionStart:
      RequireUser(e.actor_id);
      if (e.subject_id != e.actor_id.value) Fail(ErrorCode::kIntegrity, "session subject must be the actor");
      return;
    case EventKind::kInquiryCreated: {
      const UserAccount& u = RequireUser(e.actor_id);
      RequireSensor(e);
      fresh_inquiry();
      const bool exemplar = e.data.value("exemplar", false);
      check_class(u, Uint(e, "class_id"), exemplar);
      check_texts(Str(e, "title"));
      StrOr(e, "description");
      StrOr(e, "notes");
      return;
    }
    case EventKind::kInquiryEdited: {
      RequireUser(e.actor_id);
      RequireOwnDraft(e.actor_id, InquiryId{e.subject_id});
      if (e.data.contains("title")) check_texts(Str(e, "title"));
      StrOr(e, "description");
      StrOr(e, "notes");
      return;
    }
    case EventKind::kDataCaptured: {
      RequireUser(e.actor_id);
      const Inquiry& inq = RequireOwnDraft(e.actor_id, InquiryId{e.subject_id});
      if (inq.slots.size() >= kMaxSlots) {
        Fail(ErrorCode::kSlotLimit, "an inquiry holds at most " + std::to_string(kMaxSlots) + " data points");
      }
      if (Uint(e, "index") != inq.slots.size()) Fail(ErrorCode::kIntegrity, "slot index out of sequence");
      const std::string label = Str(e, "label");
      if (TextLength(label) > lim.label) {
        Fail(ErrorCode::kValidation, "label exceeds " + std::to_string(lim.label) + " characters", {"label"});
      }
      const auto sensor = proto::SensorTypeFromName(Str(e, "measurement_sensor"));
      if (!sensor || *sensor != inq.sensor_type) {
        Fail(ErrorCode::kValidation, "measurement comes from a different sensor type", {"measurement"});
      }
      const json& values = Field(e, "values");
      if (!values.is_array() || static_cast<int>(values.size()) != proto::ChannelCount(inq.sensor_type) ||
          !std::all_of(values.begin(), values.end(), [](const json& v) { return v.is_number_integer(); })) {
        Fail(ErrorCode::kValidation, "measurement needs one value per channel", {"measurement"});
      }
      Uint(e, "timestamp_ms");
      if (e.data.contains("photo_ref")) Str(e, "photo_ref");
      return;
    }
    case EventKind::kPublished: {
      RequireUser(e.actor_id);
      const Inquiry& inq = RequireOwnDraft(e.actor_id, InquiryId{e.subject_id});
      std::vector<std::string> missing;
      if (inq.title.empty()) missing.push_back("title");
      if (inq.slots.empty()) missing.push_back("slots");
      if (!missing.empty()) Fail(ErrorCode::kValidation, "cannot publish without a title and a data point", missing);
      return;
    }
    case EventKind::kComment: {
      RequireUser(e.actor_id);
      const Inquiry& inq = RequireInquiry(InquiryId{e.subject_id});
      if (!inq.published()) {
        if (inq.author_id != e.actor_id) Fail(ErrorCode::kNotFound, "inquiry not found");
        Fail(ErrorCode::kState, "comments attach only to published inquiries");
      }
      const std::string body = Str(e, "body");
      if (body.empty() || TextLength(body) > lim.comment) {
        Fail(ErrorCode::kValidation, "comment must be 1-" + std::to_string(lim.comment) + " characters", {"body"});
      }
      const std::uint64_t cid = Uint(e, "comment_id");
      if (cid == 0 || comments_.count(CommentId{cid}) != 0) Fail(ErrorCode::kIntegrity, "comment id already used");
      return;
    }
    case EventKind::kReplication:
    case EventKind::kRemix: {
      const UserAccount& u = RequireUser(e.actor_id);
      fresh_inquiry();
      const Inquiry* src = FindInquiry(InquiryId{Uint(e, "source_id")});
      if (src == nullptr || !src->published()) Fail(ErrorCode::kNotFound, "source inquiry not found");
      if (RequireSensor(e) != src->sensor_type) Fail(ErrorCode::kIntegrity, "sensor differs from source");
      const auto recorded = SourceClassFromName(Str(e, "source_class"));
      if (!recorded || *recorded != ClassifySource(src->author_id, e.actor_id, src->exemplar)) {
        Fail(ErrorCode::kIntegrity, "source_class does not match the source");
      }
      if (IsAncestor(InquiryId{e.subject_id}, src->id)) Fail(ErrorCode::kIntegrity, "lineage cycle");
      check_class(u, Uint(e, "class_id"), false);
      check_texts(Str(e, "title"));
      StrOr(e, "description");
      StrOr(e, "notes");
      return;
    }
    case EventKind::kScoreOverridden: {
      const UserAccount& u = RequireUser(e.actor_id);
      const Inquiry& inq = RequireInquiry(InquiryId{e.subject_id});
      if (u.role == Role::kStudent) Fail(ErrorCode::kAuthorization, "students cannot re-code scores");
      if (!inq.published()) {
        if (inq.author_id != e.actor_id) Fail(ErrorCode::kNotFound, "inquiry not found");
        Fail(ErrorCode::kState, "only published inquiries are scored");
      }
      if (u.role == Role::kTeacher) {
        const ClassGroup* c = FindClass(inq.class_id);
        if (c == nullptr || c->teacher_id != u.id) {
          Fail(ErrorCode::kAuthorization, "teachers re-code only their own class's inquiries");
        }
      }
      if (!CategoryFromName(Str(e, "category"))) Fail(ErrorCode::kValidation, "unknown category", {"category"});
      const std::string reason = Str(e, "reason");
      if (reason.find_first_not_of(" \t\r\n") == std::string::npos) {
        Fail(ErrorCode::kValidation, "an override needs a reason", {"reason"});
      }
      return;
    }
    case EventKind::kPhotoUploaded:
      RequireUser(e.actor_id);
      Str(e, "photo_id");
      Uint(e, "bytes");
      return;
  }
  Fail(ErrorCode::kIntegrity, "unknown record kind");
}

// ---------------------------------------------------------------------------
// Applying

void Platform::Apply(const EventRecord& e) {
  auto new_inquiry = [&](bool exemplar) -> Inquiry& {
    Inquiry inq;
    inq.id = InquiryId{e.subject_id};
    inq.author_id = e.actor_id;
    inq.class_id = ClassId{Uint(e, "class_id")};
    inq.sensor_type = *e.sensor_type;
    inq.title = Str(e, "title");
    inq.description = StrOr(e, "description");
    inq.notes = StrOr(e, "notes");
    inq.created_at = e.timestamp;
    inq.exemplar = exemplar;
    next_inquiry_ = std::max(next_inquiry_, e.subject_id + 1);
    return inquiries_.emplace(inq.id, std::move(inq)).first->second;
  };

  switch (e.kind) {
    case EventKind::kUserRegistered: {
      UserAccount u{e.actor_id, Str(e, "username"), *RoleFromName(Str(e, "role")), {}, e.timestamp};
      usernames_.emplace(u.username, u.id);
      users_.emplace(u.id, std::move(u));
      next_user_ = std::max(next_user_, e.subject_id + 1);
      break;
    }
    case EventKind::kClassCreated: {
      ClassGroup c{ClassId{e.subject_id}, Str(e, "name"), Str(e, "join_code"), e.actor_id, e.timestamp, {}};
      active_codes_.emplace(c.join_code, c.id);
      classes_.emplace(c.id, std::move(c));
      next_class_ = std::max(next_class_, e.subject_id + 1);
      break;
    }
    case EventKind::kJoinCodeRegenerated: {
      ClassGroup& c = classes_.at(ClassId{e.subject_id});
      active_codes_.erase(c.join_code);
      revoked_codes_.emplace(c.join_code, c.id);
      c.revoked_codes.push_back(c.join_code);
      c.join_code = Str(e, "join_code");
      active_codes_.emplace(c.join_code, c.id);
      break;
    }
    case EventKind::kClassJoined:
      users_.at(e.actor_id).class_ids.push_back(ClassId{e.subject_id});
      break;
    case EventKind::kSessionStart:
    case EventKind::kPhotoUploaded:
      break;
    case EventKind::kInquiryCreated:
      new_inquiry(e.data.value("exemplar", false));
      break;
    case EventKind::kInquiryEdited: {
      Inquiry& inq = inquiries_.at(InquiryId{e.subject_id});
      if (e.data.contains("title")) inq.title = Str(e, "title");
      if (e.data.contains("description")) inq.description = Str(e, "description");
      if (e.data.contains("notes")) inq.notes = Str(e, "notes");
      break;
    }
    case EventKind::kDataCaptured: {
      Inquiry& inq = inquiries_.at(InquiryId{e.subject_id});
      CaptureSlot slot;
      slot.index = static_cast<int>(inq.slots.size());
      slot.measurement.sensor_type = inq.sensor_type;
      slot.measurement.timestamp_ms = static_cast<std::uint32_t>(Uint(e, "timestamp_ms"));
      for (const json& v : Field(e, "values")) slot.measurement.values.push_back(proto::Centi::FromRaw(v.get<std::int32_t>()));
      slot.label = Str(e, "label");
      if (e.data.contains("photo_ref")) slot.photo_ref = Str(e, "photo_ref");
      slot.captured_at = e.timestamp;
      inq.slots.push_back(std::move(slot));
      break;
    }
    case EventKind::kPublished: {
      Inquiry& inq = inquiries_.at(InquiryId{e.subject_id});
      inq.status = InquiryStatus::kPublished;
      inq.published_at = e.timestamp;
      break;
    }
    case EventKind::kComment: {
      const CommentId id{Uint(e, "comment_id")};
      comments_.emplace(id, Comment{id, InquiryId{e.subject_id}, e.actor_id, Str(e, "body"), e.timestamp});
      next_comment_ = std::max(next_comment_, id.value + 1);
      break;
    }
    case EventKind::kReplication:
    case EventKind::kRemix: {
      Inquiry& inq = new_inquiry(false);
      inq.lineage = LineageLink{e.kind == EventKind::kRemix ? LineageKind::kRemix : LineageKind::kReplication,
                                InquiryId{Uint(e, "source_id")}, *SourceClassFromName(Str(e, "source_class"))};
      break;
    }
    case EventKind::kScoreOverridden:
      inquiries_.at(InquiryId{e.subject_id}).manual_score_override =
          ScoreOverride{*CategoryFromName(Str(e, "category")), Str(e, "reason"), e.actor_id, e.timestamp};
      break;
  }
  watermark_ = e.timestamp;
}

void Platform::Commit(const EventRecord& e) {
  Check(e);
  Apply(e);
  log_.push_back(e);
}

// ---------------------------------------------------------------------------
// Convenience wrappers

UserId Platform::Register(std::string_view username, Role role, Timestamp at) {
  const EventRecord e = PlanRegister(username, role, at);
  Commit(e);
  return e.actor_id;
}

ClassId Platform::CreateClass(UserId teacher, std::string_view name, Timestamp at) {
  const EventRecord e = PlanCreateClass(teacher, name, at);
  Commit(e);
  return ClassId{e.subject_id};
}

std::string Platform::RegenerateCode(UserId teacher, ClassId cls, Timestamp at) {
  Commit(PlanRegenerateCode(teacher, cls, at));
  return classes_.at(cls).join_code;
}

ClassId Platform::Join(UserId student, std::string_view code, Timestamp at) {
  if (auto e = PlanJoin(student, code, at)) {
    Commit(*e);
    return ClassId{e->subject_id};
  }
  std::string upper(code);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return active_codes_.at(upper);
}

InquiryId Platform::CreateInquiry(UserId author, const NewInquiry& spec, Timestamp at) {
  const EventRecord e = PlanCreateInquiry(author, spec, at);
  Commit(e);
  return InquiryId{e.subject_id};
}

void Platform::Edit(UserId caller, InquiryId id, const InquiryEdit& edit, Timestamp at) {
  Commit(PlanEdit(caller, id, edit, at));
}

int Platform::Capture(UserId caller, InquiryId id, const proto::Measurement& m, std::string_view label,
                      std::optional<std::string> photo_ref, Timestamp at) {
  Commit(PlanCapture(caller, id, m, label, std::move(photo_ref), at));
  return inquiries_.at(id).slots.back().index;
}

void Platform::Publish(UserId caller, InquiryId id, Timestamp at) { Commit(PlanPublish(caller, id, at)); }

CommentId Platform::AddComment(UserId caller, InquiryId id, std::string_view body, Timestamp at) {
  const EventRecord e = PlanComment(caller, id, body, at);
  Commit(e);
  return CommentId{e.data["comment_id"].get<std::uint64_t>()};
}

InquiryId Platform::Derive(UserId caller, InquiryId source, LineageKind kind,
                           std::optional<ClassId> class_id, Timestamp at) {
  const EventRecord e = PlanDerive(caller, source, kind, class_id, at);
  Commit(e);
  return InquiryId{e.subject_id};
}

void Platform::Override(UserId caller, InquiryId id, ScoreCategory category, std::string_view reason,
                        Timestamp at) {
  Commit(PlanOverride(caller, id, category, reason, at));
}

}  // namespace inquirylab::core
