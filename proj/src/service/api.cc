// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/service/api.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "inquirylab/analytics/report.h"

namespace inquirylab::service {

using core::DomainError;
using core::ErrorCode;
using core::EventRecord;
using core::Platform;
using core::Timestamp;
using core::UserId;
using nlohmann::json;

namespace {

// Errors that exist only at the HTTP layer.
struct HttpError : std::runtime_error {
  HttpError(int status, const std::string& code, const std::string& what)
      : std::runtime_error(what), status(status), code(code) {}
  int status;
  std::string code;
};

[[noreturn]] void Unauthorized() { throw HttpError(401, "unauthenticated", "missing, unknown or expired token"); }
[[noreturn]] void NotFound(const std::string& what) { throw DomainError(ErrorCode::kNotFound, what); }
[[noreturn]] void Invalid(const std::string& what, std::vector<std::string> fields) {
  throw DomainError(ErrorCode::kValidation, what, std::move(fields));
}
[[noreturn]] void Forbidden(const std::string& what) { throw DomainError(ErrorCode::kAuthorization, what); }

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAuthorization: return 403;
    case ErrorCode::kNotFound:
    case ErrorCode::kExpiredCode: return 404;
    case ErrorCode::kSlotLimit:
    case ErrorCode::kState:
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kValidation: return 422;
    case ErrorCode::kIntegrity: return 500;
  }
  return 500;
}

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, int status, const std::string& code, const std::string& message,
                const std::vector<std::string>& fields = {}) {
  json body = {{"error", code}, {"message", message}};
  if (!fields.empty()) body["fields"] = fields;
  Reply(res, status, body);
}

json Body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw HttpError(400, "bad-request", "body must be a JSON object");
  return j;
}

std::string RequiredString(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || !it->is_string()) Invalid(std::string(key) + " is required", {key});
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) Invalid(std::string(key) + " must be a string", {key});
  return it->get<std::string>();
}

std::optional<std::uint64_t> OptionalId(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_unsigned()) Invalid(std::string(key) + " must be a positive id", {key});
  return it->get<std::uint64_t>();
}

std::uint64_t PathId(const httplib::Request& req, std::size_t n = 1) {
  const std::string& s = req.matches[static_cast<int>(n)];
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v == 0) NotFound("no such resource");
  return v;
}

std::int64_t Millis(Timestamp t) { return t.time_since_epoch().count(); }

json MeasurementJson(const proto::Measurement& m) {
  json values = json::array();
  for (const proto::Centi v : m.values) values.push_back(v.ToDouble());
  return {{"sensor_type", proto::SensorName(m.sensor_type)}, {"timestamp_ms", m.timestamp_ms}, {"values", values}};
}

json UserJson(const core::UserAccount& u) {
  json classes = json::array();
  for (const core::ClassId c : u.class_ids) classes.push_back(c.value);
  return {{"id", u.id.value},
          {"username", u.username},
          {"role", core::RoleName(u.role)},
          {"class_ids", classes},
          {"created_at", core::FormatTimestamp(u.created_at)}};
}

json ClassJson(const core::ClassGroup& c, bool with_code) {
  json j = {{"id", c.id.value},
            {"name", c.name},
            {"teacher_id", c.teacher_id.value},
            {"created_at", core::FormatTimestamp(c.created_at)}};
  if (with_code) j["join_code"] = c.join_code;
  return j;
}

json CommentJson(const Platform& p, const core::Comment& c) {
  const core::UserAccount* author = p.FindUser(c.author_id);
  return {{"id", c.id.value},
          {"inquiry_id", c.inquiry_id.value},
          {"author_id", c.author_id.value},
          {"author", author ? author->username : ""},
          {"body", c.body},
          {"created_at", core::FormatTimestamp(c.created_at)}};
}

json ScoreJson(const core::InquiryScore& s, const core::Inquiry& inq) {
  json j = {{"category", core::CategoryName(s.category)}, {"evidence", s.evidence}, {"overridden", s.overridden}};
  if (inq.manual_score_override) {
    const core::ScoreOverride& o = *inq.manual_score_override;
    j["override"] = {{"category", core::CategoryName(o.category)},
                     {"reason", o.reason},
                     {"by", o.by.value},
                     {"at", core::FormatTimestamp(o.at)}};
  }
  return j;
}

json InquiryJson(const Platform& p, const core::Inquiry& inq, const scoring::Rubric* rubric) {
  const core::UserAccount* author = p.FindUser(inq.author_id);
  json slots = json::array();
  for (const core::CaptureSlot& s : inq.slots) {
    slots.push_back({{"index", s.index},
                     {"label", s.label},
                     {"photo_id", s.photo_ref ? json(*s.photo_ref) : json(nullptr)},
                     {"captured_at", core::FormatTimestamp(s.captured_at)},
                     {"measurement", MeasurementJson(s.measurement)}});
  }
  json j = {{"id", inq.id.value},
            {"author_id", inq.author_id.value},
            {"author", author ? author->username : ""},
            {"class_id", inq.class_id.value ? json(inq.class_id.value) : json(nullptr)},
            {"sensor_type", proto::SensorName(inq.sensor_type)},
            {"title", inq.title},
            {"description", inq.description},
            {"notes", inq.notes},
            {"status", core::StatusName(inq.status)},
            {"exemplar", inq.exemplar},
            {"created_at", core::FormatTimestamp(inq.created_at)},
            {"published_at", inq.published_at ? json(core::FormatTimestamp(*inq.published_at)) : json(nullptr)},
            {"slots", slots},
            {"comment_count", p.CommentsOn(inq.id).size()},
            {"lineage", nullptr}};
  if (inq.lineage) {
    j["lineage"] = {{"kind", core::LineageKindName(inq.lineage->kind)},
                    {"source_id", inq.lineage->source_inquiry_id.value},
                    {"source_class", core::SourceClassName(inq.lineage->source_class)}};
  }
  if (rubric) j["score"] = ScoreJson(rubric->Score(inq), inq);
  return j;
}

// Cursor over a newest-first list keyed by (time, id).
struct Cursor {
  std::int64_t ms;
  std::uint64_t id;
  static std::optional<Cursor> Parse(const std::string& s) {
    const auto colon = s.find(':');
    Cursor c{};
    if (colon == std::string::npos) return std::nullopt;
    const auto [p1, e1] = std::from_chars(s.data(), s.data() + colon, c.ms);
    const auto [p2, e2] = std::from_chars(s.data() + colon + 1, s.data() + s.size(), c.id);
    if (e1 != std::errc() || e2 != std::errc() || p1 != s.data() + colon || p2 != s.data() + s.size()) {
      return std::nullopt;
    }
    return c;
  }
  std::string ToString() const { return std::to_string(ms) + ":" + std::to_string(id); }
  bool Before(const Cursor& o) const { return ms < o.ms || (ms == o.ms && id < o.id); }
};

}  // namespace

// ---------------------------------------------------------------------------

Service::Service(ServiceConfig config, std::vector<DeviceInfo> devices)
    : config_(std::move(config)),
      store_(config_.db_path),
      photos_(config_.photo_dir),
      rubric_(scoring::Rubric::FromFile(config_.cue_path)),
      tokens_(config_.token_ttl),
      gateway_(std::move(devices), config_.gateway),
      platform_(Platform::Replay(store_.LoadEvents())) {}

Service::~Service() { gateway_.Shutdown(); }

Timestamp Service::Clock() const { return config_.clock(); }

std::optional<EventRecord> Service::Write(const Planner& plan,
                                          const std::function<void(const EventRecord&)>& extra) {
  std::unique_lock lock(mu_);
  const Timestamp at = std::max(Clock(), platform_.Watermark());
  std::optional<EventRecord> e = plan(platform_, at);
  if (!e) return std::nullopt;
  std::function<void()> more;
  if (extra) more = [&] { extra(*e); };
  store_.Persist(*e, more);
  try {
    platform_.Commit(*e);
  } catch (const std::exception& ex) {
    // Planned and checked under the same lock, so this means a bug.
    spdlog::critical("event persisted but not applied: {}", ex.what());
    throw;
  }
  return e;
}

void Service::Import(const std::vector<EventRecord>& log) {
  std::unique_lock lock(mu_);
  if (store_.EventCount() != 0) throw StoreError("database already holds events");
  Platform replayed = Platform::Replay(log);
  store_.PersistAll(log);
  platform_ = std::move(replayed);
}

void Service::SetMissingPasswords(const std::string& password) {
  std::unique_lock lock(mu_);
  const Credentials creds = HashPassword(password, config_.pbkdf2_iterations);
  store_.Exec("BEGIN IMMEDIATE");
  try {
    for (const auto& [id, user] : platform_.users()) {
      if (!store_.GetCredentials(id)) store_.PutCredentials(id, creds);
    }
    store_.Exec("COMMIT");
  } catch (...) {
    store_.Exec("ROLLBACK");
    throw;
  }
}

Platform Service::Snapshot() const {
  std::shared_lock lock(mu_);
  return platform_;
}

// ---------------------------------------------------------------------------

class Service::Handlers {
 public:
  explicit Handlers(Service& s) : s_(s) {}

  using Fn = std::function<void(const httplib::Request&, httplib::Response&)>;

  // Runs `fn`, turning exceptions into JSON error replies.
  static Fn Guard(Fn fn) {
    return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const HttpError& e) {
        ReplyError(res, e.status, e.code, e.what());
      } catch (const DomainError& e) {
        ReplyError(res, StatusFor(e.code()), core::ToString(e.code()), e.what(), e.fields());
      } catch (const json::exception& e) {
        ReplyError(res, 400, "bad-request", e.what());
      } catch (const std::exception& e) {
        spdlog::error("{} {}: {}", req.method, req.path, e.what());
        ReplyError(res, 500, "internal", "internal error");
      }
    };
  }

  UserId Caller(const httplib::Request& req) {
    const std::string header = req.get_header_value("Authorization");
    static constexpr std::string_view kBearer = "Bearer ";
    if (header.rfind(kBearer, 0) != 0) Unauthorized();
    const auto user = s_.tokens_.Resolve(header.substr(kBearer.size()), s_.Clock());
    if (!user) Unauthorized();
    std::shared_lock lock(s_.mu_);
    if (!s_.platform_.FindUser(*user)) Unauthorized();
    return *user;
  }

  core::Role RoleOf(UserId u) const { return s_.platform_.FindUser(u)->role; }

  // Scores are shown to staff only.
  const scoring::Rubric* ScoreFor(UserId viewer) const {
    return RoleOf(viewer) == core::Role::kStudent ? nullptr : &s_.rubric_;
  }

  json Token(const SessionToken& t) {
    std::shared_lock lock(s_.mu_);
    return {{"token", t.token},
            {"expires_at", core::FormatTimestamp(t.expires_at)},
            {"user", UserJson(*s_.platform_.FindUser(t.user_id))}};
  }

  // --- auth ---

  void Register(const httplib::Request& req, httplib::Response& res) {
    const json body = Body(req);
    const std::string username = RequiredString(body, "username");
    const std::string password = RequiredString(body, "password");
    const auto role = core::RoleFromName(OptionalString(body, "role").value_or("student"));
    if (!role) Invalid("role must be student or teacher", {"role"});
    if (*role == core::Role::kResearcher) Forbidden("researcher accounts are provisioned by an operator");
    if (password.size() < 8) Invalid("password needs at least 8 characters", {"password"});
    const Credentials creds = HashPassword(password, s_.config_.pbkdf2_iterations);
    const auto e = s_.Write([&](const Platform& p, Timestamp at) { return p.PlanRegister(username, *role, at); },
                            [&](const EventRecord& e) { s_.store_.PutCredentials(e.actor_id, creds); });
    Reply(res, 201, Token(s_.tokens_.Issue(e->actor_id, s_.Clock())));
  }

  void Login(const httplib::Request& req, httplib::Response& res) {
    const json body = Body(req);
    const std::string username = RequiredString(body, "username");
    const std::string password = RequiredString(body, "password");
    std::optional<UserId> user;
    {
      std::shared_lock lock(s_.mu_);
      if (const core::UserAccount* u = s_.platform_.FindUserByName(username)) user = u->id;
    }
    std::optional<Credentials> creds;
    if (user) creds = s_.store_.GetCredentials(*user);
    if (!creds || !VerifyPassword(password, *creds)) {
      throw HttpError(401, "unauthenticated", "unknown username or wrong password");
    }
    s_.Write([&](const Platform& p, Timestamp at) { return p.PlanSessionStart(*user, at); });
    Reply(res, 200, Token(s_.tokens_.Issue(*user, s_.Clock())));
  }

  void Logout(const httplib::Request& req, httplib::Response& res) {
    Caller(req);
    s_.tokens_.Revoke(req.get_header_value("Authorization").substr(7));
    res.status = 204;
  }

  void Me(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    std::shared_lock lock(s_.mu_);
    const Platform& p = s_.platform_;
    json j = UserJson(*p.FindUser(me));
    json classes = json::array();
    for (const auto& [id, c] : p.classes()) {
      const bool teaches = c.teacher_id == me;
      const auto& mine = p.FindUser(me)->class_ids;
      if (teaches || std::find(mine.begin(), mine.end(), id) != mine.end()) classes.push_back(ClassJson(c, teaches));
    }
    j["classes"] = classes;
    Reply(res, 200, j);
  }

  // --- classes ---

  void CreateClass(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const std::string name = RequiredString(Body(req), "name");
    const auto e = s_.Write([&](const Platform& p, Timestamp at) { return p.PlanCreateClass(me, name, at); });
    std::shared_lock lock(s_.mu_);
    Reply(res, 201, ClassJson(*s_.platform_.FindClass(core::ClassId{e->subject_id}), true));
  }

  void Join(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const std::string code = req.matches[1];
    core::ClassId joined;
    const auto e = s_.Write([&](const Platform& p, Timestamp at) {
      auto planned = p.PlanJoin(me, code, at);
      if (!planned) {
        // Already a member: find which class the code belongs to.
        for (const core::ClassId c : p.FindUser(me)->class_ids) {
          std::string upper = code;
          for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
          if (p.FindClass(c)->join_code == upper) joined = c;
        }
      }
      return planned;
    });
    if (e) joined = core::ClassId{e->subject_id};
    std::shared_lock lock(s_.mu_);
    json j = ClassJson(*s_.platform_.FindClass(joined), false);
    j["already_member"] = !e.has_value();
    Reply(res, 200, j);
  }

  void RegenerateCode(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const core::ClassId cls{PathId(req)};
    s_.Write([&](const Platform& p, Timestamp at) { return p.PlanRegenerateCode(me, cls, at); });
    std::shared_lock lock(s_.mu_);
    Reply(res, 200, ClassJson(*s_.platform_.FindClass(cls), true));
  }

  // The class, if the caller may see it: its teacher, a member, or a researcher.
  const core::ClassGroup& ClassFor(UserId me, core::ClassId id, bool staff_only) {
    const Platform& p = s_.platform_;
    const core::ClassGroup* c = p.FindClass(id);
    if (!c) NotFound("class not found");
    const core::UserAccount& u = *p.FindUser(me);
    if (u.role == core::Role::kResearcher || c->teacher_id == me) return *c;
    const bool member = std::find(u.class_ids.begin(), u.class_ids.end(), id) != u.class_ids.end();
    if (!member) NotFound("class not found");
    if (staff_only) Forbidden("class reports are for the class teacher");
    return *c;
  }

  void GetClass(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    std::shared_lock lock(s_.mu_);
    const core::ClassGroup& c = ClassFor(me, core::ClassId{PathId(req)}, false);
    Reply(res, 200, ClassJson(c, c.teacher_id == me));
  }

  analytics::EngagementReport ClassReport(const httplib::Request& req) {
    const UserId me = Caller(req);
    std::shared_lock lock(s_.mu_);
    const core::ClassGroup& c = ClassFor(me, core::ClassId{PathId(req)}, true);
    return analytics::ComputeReport(s_.platform_, s_.rubric_, {.class_id = c.id});
  }

  void Report(const httplib::Request& req, httplib::Response& res) {
    Reply(res, 200, analytics::ToJson(ClassReport(req)));
  }

  void Activity(const httplib::Request& req, httplib::Response& res) {
    Reply(res, 200, analytics::ToJson(ClassReport(req).weekly_activity));
  }

  void PlatformReport(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    std::shared_lock lock(s_.mu_);
    if (RoleOf(me) != core::Role::kResearcher) Forbidden("the platform-wide report is for researchers");
    Reply(res, 200, analytics::ToJson(analytics::ComputeReport(s_.platform_, s_.rubric_)));
  }

  // --- inquiries ---

  json ViewJson(UserId me, core::InquiryId id) {
    std::shared_lock lock(s_.mu_);
    return InquiryJson(s_.platform_, s_.platform_.View(me, id), ScoreFor(me));
  }

  void CreateInquiry(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const json body = Body(req);
    const auto sensor = proto::SensorTypeFromName(RequiredString(body, "sensor_type"));
    if (!sensor) Invalid("unknown sensor type", {"sensor_type"});
    core::NewInquiry spec;
    spec.sensor_type = *sensor;
    if (const auto c = OptionalId(body, "class_id")) spec.class_id = core::ClassId{*c};
    spec.title = OptionalString(body, "title").value_or("");
    spec.description = OptionalString(body, "description").value_or("");
    spec.notes = OptionalString(body, "notes").value_or("");
    if (const auto it = body.find("exemplar"); it != body.end()) {
      if (!it->is_boolean()) Invalid("exemplar must be a boolean", {"exemplar"});
      spec.exemplar = it->get<bool>();
    }
    const auto e = s_.Write([&](const Platform& p, Timestamp at) { return p.PlanCreateInquiry(me, spec, at); });
    Reply(res, 201, ViewJson(me, core::InquiryId{e->subject_id}));
  }

  void EditInquiry(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const core::InquiryId id{PathId(req)};
    const json body = Body(req);
    const core::InquiryEdit edit{OptionalString(body, "title"), OptionalString(body, "description"),
                                 OptionalString(body, "notes")};
    s_.Write([&](const Platform& p, Timestamp at) { return p.PlanEdit(me, id, edit, at); });
    Reply(res, 200, ViewJson(me, id));
  }

  void GetInquiry(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    Reply(res, 200, ViewJson(me, core::InquiryId{PathId(req)}));
  }

  void Capture(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const core::InquiryId id{PathId(req)};
    const json body = Body(req);
    const std::string label = OptionalString(body, "label").value_or("");
    const std::optional<std::string> photo = OptionalString(body, "photo_id");
    if (photo && !s_.store_.FindPhoto(*photo)) Invalid("unknown photo", {"photo_id"});
    const auto m_it = body.find("measurement");
    if (m_it == body.end() || !m_it->is_object()) Invalid("measurement is required", {"measurement"});
    const json& mj = *m_it;
    proto::Measurement m;
    const auto values = mj.find("values");
    if (values == mj.end() || !values->is_array()) Invalid("measurement.values is required", {"measurement"});
    for (const json& v : *values) {
      if (!v.is_number() || !std::isfinite(v.get<double>()) || std::abs(v.get<double>()) > 2.0e7) {
        Invalid("measurement values must be finite numbers", {"measurement"});
      }
      m.values.push_back(proto::Centi::FromDouble(v.get<double>()));
    }
    if (const auto t = mj.find("timestamp_ms"); t != mj.end()) {
      if (!t->is_number_unsigned() || t->get<std::uint64_t>() > UINT32_MAX) {
        Invalid("timestamp_ms must be a 32-bit unsigned integer", {"measurement"});
      }
      m.timestamp_ms = t->get<std::uint32_t>();
    }
    std::optional<proto::SensorType> sensor;
    if (const auto st = OptionalString(mj, "sensor_type")) {
      sensor = proto::SensorTypeFromName(*st);
      if (!sensor) Invalid("unknown sensor type", {"measurement"});
    }
    int index = 0;
    s_.Write([&](const Platform& p, Timestamp at) {
      const core::Inquiry& inq = p.View(me, id);
      m.sensor_type = sensor.value_or(inq.sensor_type);
      index = static_cast<int>(inq.slots.size());
      return p.PlanCapture(me, id, m, label, photo, at);
    });
    json j = {{"slot", index}, {"inquiry", ViewJson(me, id)}};
    Reply(res, 201, j);
  }

  void Publish(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const core::InquiryId id{PathId(req)};
    s_.Write([&](const Platform& p, Timestamp at) { return p.PlanPublish(me, id, at); });
    Reply(res, 200, ViewJson(me, id));
  }

  void AddComment(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const core::InquiryId id{PathId(req)};
    const std::string text = RequiredString(Body(req), "body");
    const auto e = s_.Write([&](const Platform& p, Timestamp at) { return p.PlanComment(me, id, text, at); });
    std::shared_lock lock(s_.mu_);
    const core::CommentId cid{e->data.at("comment_id").get<std::uint64_t>()};
    Reply(res, 201, CommentJson(s_.platform_, s_.platform_.comments().at(cid)));
  }

  void ListComments(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const core::InquiryId id{PathId(req)};
    std::shared_lock lock(s_.mu_);
    s_.platform_.View(me, id);
    json items = json::array();
    for (const core::Comment* c : s_.platform_.CommentsOn(id)) items.push_back(CommentJson(s_.platform_, *c));
    Reply(res, 200, {{"items", items}});
  }

  void Derive(const httplib::Request& req, httplib::Response& res, core::LineageKind kind) {
    const UserId me = Caller(req);
    const core::InquiryId source{PathId(req)};
    std::optional<core::ClassId> cls;
    if (const auto c = OptionalId(Body(req), "class_id")) cls = core::ClassId{*c};
    const auto e =
        s_.Write([&](const Platform& p, Timestamp at) { return p.PlanDerive(me, source, kind, cls, at); });
    Reply(res, 201, ViewJson(me, core::InquiryId{e->subject_id}));
  }

  void GetScore(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    std::shared_lock lock(s_.mu_);
    if (RoleOf(me) == core::Role::kStudent) Forbidden("scores are visible to teachers and researchers");
    const core::Inquiry& inq = s_.platform_.View(me, core::InquiryId{PathId(req)});
    Reply(res, 200, ScoreJson(s_.rubric_.Score(inq), inq));
  }

  void OverrideScore(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const core::InquiryId id{PathId(req)};
    const json body = Body(req);
    const auto category = core::CategoryFromName(RequiredString(body, "category"));
    if (!category) Invalid("unknown category", {"category"});
    const std::string reason = RequiredString(body, "reason");
    s_.Write([&](const Platform& p, Timestamp at) { return p.PlanOverride(me, id, *category, reason, at); });
    std::shared_lock lock(s_.mu_);
    const core::Inquiry& inq = *s_.platform_.FindInquiry(id);
    Reply(res, 200, ScoreJson(s_.rubric_.Score(inq), inq));
  }

  void ListInquiries(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const std::string status = req.has_param("status") ? req.get_param_value("status") : "published";
    std::optional<Cursor> after;
    if (req.has_param("cursor")) {
      after = Cursor::Parse(req.get_param_value("cursor"));
      if (!after) Invalid("malformed cursor", {"cursor"});
    }
    std::size_t limit = kPageSize;
    if (req.has_param("limit")) {
      const std::string s = req.get_param_value("limit");
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), limit);
      if (ec != std::errc() || p != s.data() + s.size() || limit == 0 || limit > 100) {
        Invalid("limit must be 1-100", {"limit"});
      }
    }
    core::DiscoverFilter filter;
    if (req.has_param("sensor")) {
      filter.sensor = proto::SensorTypeFromName(req.get_param_value("sensor"));
      if (!filter.sensor) Invalid("unknown sensor type", {"sensor"});
    }
    if (req.has_param("class_id")) {
      const std::string s = req.get_param_value("class_id");
      std::uint64_t v = 0;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) Invalid("class_id must be an id", {"class_id"});
      filter.class_id = core::ClassId{v};
    }
    filter.include_exemplars = req.get_param_value("exemplars") == "true";

    std::shared_lock lock(s_.mu_);
    const Platform& p = s_.platform_;
    std::vector<std::pair<Cursor, const core::Inquiry*>> rows;
    if (status == "published") {
      for (const core::Inquiry* inq : p.Discover(filter)) rows.push_back({{Millis(*inq->published_at), inq->id.value}, inq});
    } else if (status == "draft") {
      for (const core::Inquiry* inq : p.AuthoredBy(me)) {
        if (inq->published()) continue;
        if (filter.sensor && inq->sensor_type != *filter.sensor) continue;
        rows.push_back({{Millis(inq->created_at), inq->id.value}, inq});
      }
      std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return b.first.Before(a.first); });
    } else {
      Invalid("status must be published or draft", {"status"});
    }
    json items = json::array();
    const scoring::Rubric* rubric = ScoreFor(me);
    std::optional<Cursor> last;
    std::size_t remaining = 0;
    for (const auto& [key, inq] : rows) {
      if (after && !key.Before(*after)) continue;
      if (items.size() == limit) {
        ++remaining;
        continue;
      }
      items.push_back(InquiryJson(p, *inq, rubric));
      last = key;
    }
    Reply(res, 200,
          {{"items", items},
           {"total", rows.size()},
           {"next_cursor", remaining && last ? json(last->ToString()) : json(nullptr)}});
  }

  // --- photos ---

  void UploadPhoto(const httplib::Request& req, httplib::Response& res) {
    const UserId me = Caller(req);
    const std::string media = req.get_header_value("Content-Type");
    if (media.rfind("image/", 0) != 0) Invalid("photos must have an image/* content type", {"media_type"});
    if (req.body.empty() || req.body.size() > kMaxPhotoBytes) Invalid("photos must be 1 byte to 5 MiB", {"photo"});
    const std::string id = s_.photos_.Put(req.body);
    bool created = false;
    s_.Write([&](const Platform& p, Timestamp at) -> std::optional<EventRecord> {
      if (s_.store_.FindPhoto(id)) return std::nullopt;
      created = true;
      return p.PlanPhoto(me, id, req.body.size(), media, at);
    });
    const PhotoMeta meta = *s_.store_.FindPhoto(id);
    Reply(res, created ? 201 : 200, {{"id", meta.id}, {"bytes", meta.bytes}, {"media_type", meta.media_type}});
  }

  void GetPhoto(const httplib::Request& req, httplib::Response& res) {
    Caller(req);
    const std::string id = req.matches[1];
    const auto meta = s_.store_.FindPhoto(id);
    const auto bytes = meta ? s_.photos_.Get(id) : std::nullopt;
    if (!bytes) NotFound("photo not found");
    res.status = 200;
    res.set_content(*bytes, meta->media_type);
  }

  // --- devices ---

  static json DeviceJson(const DeviceInfo& d) {
    return {{"id", d.id},
            {"sensor_type", proto::SensorName(d.sensor_type)},
            {"serial_number", d.serial_number},
            {"endpoint", d.endpoint.ToString()}};
  }

  void ListDevices(const httplib::Request& req, httplib::Response& res) {
    Caller(req);
    json items = json::array();
    for (const DeviceInfo& d : s_.gateway_.List()) items.push_back(DeviceJson(d));
    Reply(res, 200, {{"items", items}});
  }

  void Stream(const httplib::Request& req, httplib::Response& res) {
    Caller(req);
    const std::string id = req.matches[1];
    auto sub = s_.gateway_.Subscribe(id);
    if (!sub) NotFound("device not found");
    DeviceGateway& gw = s_.gateway_;
    res.set_chunked_content_provider(
        "application/x-ndjson",
        [sub](std::size_t, httplib::DataSink& sink) {
          if (auto rec = sub->Pop(std::chrono::milliseconds(250))) {
            const std::string line = rec->dump() + "\n";
            return sink.write(line.data(), line.size());
          }
          if (sub->finished()) sink.done();
          return true;
        },
        [&gw, id, sub](bool) { gw.Unsubscribe(id, sub); });
  }

  void Health(const httplib::Request&, httplib::Response& res) {
    std::shared_lock lock(s_.mu_);
    Reply(res, 200, {{"status", "ok"}, {"events", s_.platform_.log().size()}});
  }

 private:
  Service& s_;
};

void Service::Mount(httplib::Server& srv) {
  auto h = std::make_shared<Handlers>(*this);
  auto bind = [h](void (Handlers::*m)(const httplib::Request&, httplib::Response&)) {
    return Handlers::Guard([h, m](const httplib::Request& req, httplib::Response& res) { ((*h).*m)(req, res); });
  };
  srv.set_payload_max_length(kMaxPhotoBytes + 1024 * 1024);
  srv.Get("/healthz", bind(&Handlers::Health));
  srv.Post("/auth/register", bind(&Handlers::Register));
  srv.Post("/auth/login", bind(&Handlers::Login));
  srv.Post("/auth/logout", bind(&Handlers::Logout));
  srv.Get("/me", bind(&Handlers::Me));
  srv.Post("/classes", bind(&Handlers::CreateClass));
  srv.Post(R"(/classes/([A-Za-z0-9]+)/join)", bind(&Handlers::Join));
  srv.Post(R"(/classes/(\d+)/code)", bind(&Handlers::RegenerateCode));
  srv.Get(R"(/classes/(\d+))", bind(&Handlers::GetClass));
  srv.Get(R"(/classes/(\d+)/report)", bind(&Handlers::Report));
  srv.Get(R"(/classes/(\d+)/activity)", bind(&Handlers::Activity));
  srv.Get("/report", bind(&Handlers::PlatformReport));
  srv.Post("/inquiries", bind(&Handlers::CreateInquiry));
  srv.Get("/inquiries", bind(&Handlers::ListInquiries));
  srv.Get(R"(/inquiries/(\d+))", bind(&Handlers::GetInquiry));
  srv.Patch(R"(/inquiries/(\d+))", bind(&Handlers::EditInquiry));
  srv.Post(R"(/inquiries/(\d+)/datapoints)", bind(&Handlers::Capture));
  srv.Post(R"(/inquiries/(\d+)/publish)", bind(&Handlers::Publish));
  srv.Post(R"(/inquiries/(\d+)/comments)", bind(&Handlers::AddComment));
  srv.Get(R"(/inquiries/(\d+)/comments)", bind(&Handlers::ListComments));
  srv.Post(R"(/inquiries/(\d+)/replicate)",
           Handlers::Guard([h](const httplib::Request& q, httplib::Response& r) {
             h->Derive(q, r, core::LineageKind::kReplication);
           }));
  srv.Post(R"(/inquiries/(\d+)/remix)", Handlers::Guard([h](const httplib::Request& q, httplib::Response& r) {
             h->Derive(q, r, core::LineageKind::kRemix);
           }));
  srv.Get(R"(/inquiries/(\d+)/score)", bind(&Handlers::GetScore));
  srv.Post(R"(/inquiries/(\d+)/score-override)", bind(&Handlers::OverrideScore));
  srv.Post("/photos", bind(&Handlers::UploadPhoto));
  srv.Get(R"(/photos/([0-9a-f]{64}))", bind(&Handlers::GetPhoto));
  srv.Get("/devices", bind(&Handlers::ListDevices));
  srv.Get(R"(/devices/([A-Za-z0-9_.:-]+)/stream)", bind(&Handlers::Stream));
}

}  // namespace inquirylab::service
