// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "inquirylab/core/platform.h"

namespace inquirylab::core {
namespace {

using proto::SensorType;

Timestamp T(int minutes) { return ParseTimestamp("2021-06-07T09:00:00Z") + std::chrono::minutes(minutes); }

proto::Measurement Hr(double bpm) {
  return {SensorType::kHeartRate, 0, {proto::Centi::FromDouble(bpm)}};
}

class PlatformTest : public ::testing::Test {
 protected:
  void SetUp() override {
    teacher_ = p_.Register("teacher1", Role::kTeacher, T(0));
    cls_ = p_.CreateClass(teacher_, "Year 9 Science", T(1));
    alice_ = p_.Register("alice", Role::kStudent, T(2));
    bob_ = p_.Register("bob", Role::kStudent, T(3));
    p_.Join(alice_, p_.FindClass(cls_)->join_code, T(4));
    p_.Join(bob_, p_.FindClass(cls_)->join_code, T(5));
  }

  InquiryId Draft(UserId author, std::string title = "Pulse after running") {
    return p_.CreateInquiry(author, {SensorType::kHeartRate, cls_, std::move(title), "", ""}, Tick());
  }

  InquiryId PublishedBy(UserId author) {
    const InquiryId id = Draft(author);
    p_.Capture(author, id, Hr(72), "resting", std::nullopt, Tick());
    p_.Publish(author, id, Tick());
    return id;
  }

  Timestamp Tick() { return T(10 + clock_++); }

  ErrorCode CodeOf(const std::function<void()>& fn) {
    try {
      fn();
    } catch (const DomainError& e) {
      return e.code();
    }
    ADD_FAILURE() << "expected a DomainError";
    return ErrorCode::kIntegrity;
  }

  Platform p_;
  UserId teacher_, alice_, bob_;
  ClassId cls_;
  int clock_ = 0;
};

TEST_F(PlatformTest, CreateClassIssuesSixCharacterCode) {
  const std::string& code = p_.FindClass(cls_)->join_code;
  ASSERT_EQ(code.size(), 6u);
  for (char c : code) EXPECT_TRUE((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) << code;
}

TEST_F(PlatformTest, ClassCodesAreDistinct) {
  std::set<std::string> codes{p_.FindClass(cls_)->join_code};
  for (int i = 0; i < 200; ++i) {
    codes.insert(p_.FindClass(p_.CreateClass(teacher_, "Class " + std::to_string(i), Tick()))->join_code);
  }
  EXPECT_EQ(codes.size(), 201u);
}

TEST_F(PlatformTest, StudentsCannotCreateClasses) {
  EXPECT_EQ(CodeOf([&] { p_.CreateClass(alice_, "Mine", Tick()); }), ErrorCode::kAuthorization);
}

TEST_F(PlatformTest, JoinIsIdempotent) {
  const std::size_t before = p_.log().size();
  p_.Join(alice_, p_.FindClass(cls_)->join_code, Tick());
  EXPECT_EQ(p_.FindUser(alice_)->class_ids.size(), 1u);
  EXPECT_EQ(p_.log().size(), before);
}

TEST_F(PlatformTest, JoinCodesAreCaseInsensitive) {
  const UserId carol = p_.Register("carol", Role::kStudent, Tick());
  std::string code = p_.FindClass(cls_)->join_code;
  for (char& c : code) c = static_cast<char>(std::tolower(c));
  EXPECT_EQ(p_.Join(carol, code, Tick()), cls_);
}

TEST_F(PlatformTest, UnknownAndRevokedCodes) {
  const UserId carol = p_.Register("carol", Role::kStudent, Tick());
  EXPECT_EQ(CodeOf([&] { p_.Join(carol, "ZZZZZZ", Tick()); }), ErrorCode::kNotFound);
  const std::string old_code = p_.FindClass(cls_)->join_code;
  const std::string new_code = p_.RegenerateCode(teacher_, cls_, Tick());
  EXPECT_NE(old_code, new_code);
  EXPECT_EQ(CodeOf([&] { p_.Join(carol, old_code, Tick()); }), ErrorCode::kExpiredCode);
  EXPECT_EQ(p_.Join(carol, new_code, Tick()), cls_);
}

TEST_F(PlatformTest, OnlyTheClassTeacherRegenerates) {
  const UserId other = p_.Register("teacher2", Role::kTeacher, Tick());
  EXPECT_EQ(CodeOf([&] { p_.RegenerateCode(other, cls_, Tick()); }), ErrorCode::kAuthorization);
}

TEST_F(PlatformTest, UsernamesAreUniqueAndGeneric) {
  EXPECT_EQ(CodeOf([&] { p_.Register("alice", Role::kStudent, Tick()); }), ErrorCode::kConflict);
  EXPECT_EQ(CodeOf([&] { p_.Register("a b", Role::kStudent, Tick()); }), ErrorCode::kValidation);
}

TEST_F(PlatformTest, SlotsFillInOrderUpToThree) {
  const InquiryId id = Draft(alice_);
  EXPECT_EQ(p_.Capture(alice_, id, Hr(70), "one", std::nullopt, Tick()), 0);
  EXPECT_EQ(p_.Capture(alice_, id, Hr(71), "two", std::nullopt, Tick()), 1);
  EXPECT_EQ(p_.Capture(alice_, id, Hr(72), "three", std::nullopt, Tick()), 2);
  EXPECT_EQ(CodeOf([&] { p_.Capture(alice_, id, Hr(73), "four", std::nullopt, Tick()); }), ErrorCode::kSlotLimit);
  EXPECT_EQ(p_.FindInquiry(id)->slots.size(), 3u);
}

TEST_F(PlatformTest, CaptureRules) {
  const InquiryId id = Draft(alice_);
  EXPECT_EQ(CodeOf([&] { p_.Capture(bob_, id, Hr(70), "x", std::nullopt, Tick()); }), ErrorCode::kAuthorization);
  EXPECT_EQ(CodeOf([&] { p_.Capture(alice_, id, Hr(70), std::string(81, 'x'), std::nullopt, Tick()); }),
            ErrorCode::kValidation);
  const proto::Measurement wrong{SensorType::kVoc, 0, {proto::Centi::FromDouble(10)}};
  EXPECT_EQ(CodeOf([&] { p_.Capture(alice_, id, wrong, "x", std::nullopt, Tick()); }), ErrorCode::kValidation);
  const InquiryId pub = PublishedBy(alice_);
  EXPECT_EQ(CodeOf([&] { p_.Capture(alice_, pub, Hr(70), "x", std::nullopt, Tick()); }), ErrorCode::kState);
}

TEST_F(PlatformTest, PublishRequiresTitleAndSlot) {
  const InquiryId id = Draft(alice_, "");
  try {
    p_.Publish(alice_, id, Tick());
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
    EXPECT_EQ(e.fields(), (std::vector<std::string>{"title", "slots"}));
  }
  p_.Edit(alice_, id, {.title = "Heart rate"}, Tick());
  p_.Capture(alice_, id, Hr(70), "x", std::nullopt, Tick());
  p_.Publish(alice_, id, Tick());
  EXPECT_TRUE(p_.FindInquiry(id)->published());
  EXPECT_TRUE(p_.FindInquiry(id)->published_at.has_value());
  EXPECT_EQ(CodeOf([&] { p_.Publish(alice_, id, Tick()); }), ErrorCode::kState);
}

TEST_F(PlatformTest, DraftsAreVisibleOnlyToTheirAuthor) {
  const InquiryId id = Draft(alice_);
  EXPECT_NO_THROW(p_.View(alice_, id));
  EXPECT_EQ(CodeOf([&] { p_.View(bob_, id); }), ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { p_.View(teacher_, id); }), ErrorCode::kNotFound);
  EXPECT_TRUE(p_.Discover().empty());
}

TEST_F(PlatformTest, CommentsOnlyOnPublished) {
  const InquiryId draft = Draft(alice_);
  EXPECT_EQ(CodeOf([&] { p_.AddComment(bob_, draft, "nice", Tick()); }), ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { p_.AddComment(alice_, draft, "nice", Tick()); }), ErrorCode::kState);
  const InquiryId pub = PublishedBy(alice_);
  EXPECT_EQ(CodeOf([&] { p_.AddComment(bob_, pub, "", Tick()); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([&] { p_.AddComment(bob_, pub, std::string(501, 'a'), Tick()); }), ErrorCode::kValidation);
  p_.AddComment(bob_, pub, "Did you rest first?", Tick());
  EXPECT_EQ(p_.CommentsOn(pub).size(), 1u);
}

TEST_F(PlatformTest, ReplicationClassifiesItsSource) {
  const InquiryId alices = PublishedBy(alice_);
  const InquiryId r1 = p_.Derive(bob_, alices, LineageKind::kReplication, cls_, Tick());
  EXPECT_EQ(p_.FindInquiry(r1)->lineage->source_class, SourceClass::kOtherStudent);
  const InquiryId r2 = p_.Derive(alice_, alices, LineageKind::kReplication, cls_, Tick());
  EXPECT_EQ(p_.FindInquiry(r2)->lineage->source_class, SourceClass::kOwn);

  const UserId researcher = p_.Register("research1", Role::kResearcher, Tick());
  const InquiryId ex = p_.CreateInquiry(researcher, {SensorType::kHeartRate, std::nullopt, "Model", "", "", true}, Tick());
  p_.Capture(researcher, ex, Hr(60), "rest", std::nullopt, Tick());
  p_.Publish(researcher, ex, Tick());
  const InquiryId r3 = p_.Derive(bob_, ex, LineageKind::kReplication, cls_, Tick());
  EXPECT_EQ(p_.FindInquiry(r3)->lineage->source_class, SourceClass::kExemplar);

  const Inquiry& copy = *p_.FindInquiry(r1);
  EXPECT_FALSE(copy.published());
  EXPECT_TRUE(copy.slots.empty());
  EXPECT_EQ(copy.title, p_.FindInquiry(alices)->title);
  EXPECT_EQ(copy.author_id, bob_);
}

TEST_F(PlatformTest, RemixPrefillsTitleAndDescription) {
  const InquiryId src = p_.CreateInquiry(alice_, {SensorType::kHeartRate, cls_, "Pulse", "Run then measure", "n"}, Tick());
  p_.Capture(alice_, src, Hr(90), "after", std::nullopt, Tick());
  p_.Publish(alice_, src, Tick());
  const InquiryId rm = p_.Derive(bob_, src, LineageKind::kRemix, cls_, Tick());
  const Inquiry& inq = *p_.FindInquiry(rm);
  EXPECT_EQ(inq.title, "Pulse (remix)");
  EXPECT_EQ(inq.description, "Run then measure");
  EXPECT_EQ(inq.notes, "");
  EXPECT_TRUE(inq.slots.empty());
  EXPECT_EQ(inq.lineage->kind, LineageKind::kRemix);
  p_.Capture(bob_, rm, Hr(95), "after", std::nullopt, Tick());
  p_.Publish(bob_, rm, Tick());
  ASSERT_EQ(p_.Discover().size(), 2u);
  EXPECT_EQ(p_.Discover().front()->id, rm);
  EXPECT_EQ(p_.Discover().front()->lineage->source_inquiry_id, src);
}

TEST_F(PlatformTest, RemixTitleIsCappedAtTheLimit) {
  const InquiryId src = p_.CreateInquiry(alice_, {SensorType::kHeartRate, cls_, std::string(118, 'a'), "", ""}, Tick());
  p_.Capture(alice_, src, Hr(90), "after", std::nullopt, Tick());
  p_.Publish(alice_, src, Tick());
  const InquiryId rm = p_.Derive(bob_, src, LineageKind::kRemix, cls_, Tick());
  EXPECT_EQ(p_.FindInquiry(rm)->title.size(), 120u);
}

TEST_F(PlatformTest, DerivingFromADraftIsNotFound) {
  const InquiryId draft = Draft(alice_);
  EXPECT_EQ(CodeOf([&] { p_.Derive(bob_, draft, LineageKind::kRemix, cls_, Tick()); }), ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { p_.Derive(alice_, draft, LineageKind::kReplication, cls_, Tick()); }), ErrorCode::kNotFound);
}

TEST_F(PlatformTest, DiscoverFiltersBySensorAndOrdersNewestFirst) {
  const InquiryId a = PublishedBy(alice_);
  const InquiryId b = PublishedBy(bob_);
  const InquiryId v = p_.CreateInquiry(alice_, {SensorType::kVoc, cls_, "Air", "", ""}, Tick());
  p_.Capture(alice_, v, {SensorType::kVoc, 0, {proto::Centi::FromDouble(200)}}, "kitchen", std::nullopt, Tick());
  p_.Publish(alice_, v, Tick());
  const auto hr = p_.Discover({.sensor = SensorType::kHeartRate});
  ASSERT_EQ(hr.size(), 2u);
  EXPECT_EQ(hr[0]->id, b);
  EXPECT_EQ(hr[1]->id, a);
  EXPECT_TRUE(p_.Discover({.sensor = SensorType::kBodyTemp}).empty());
  EXPECT_EQ(p_.Discover().size(), 3u);
}

TEST_F(PlatformTest, OverrideRules) {
  const InquiryId id = PublishedBy(alice_);
  EXPECT_EQ(CodeOf([&] { p_.Override(bob_, id, ScoreCategory::kEmerging, "x", Tick()); }), ErrorCode::kAuthorization);
  EXPECT_EQ(CodeOf([&] { p_.Override(teacher_, id, ScoreCategory::kEmerging, "  ", Tick()); }), ErrorCode::kValidation);
  const UserId other = p_.Register("teacher2", Role::kTeacher, Tick());
  EXPECT_EQ(CodeOf([&] { p_.Override(other, id, ScoreCategory::kEmerging, "x", Tick()); }), ErrorCode::kAuthorization);
  p_.Override(teacher_, id, ScoreCategory::kEmerging, "interview showed reasoning", Tick());
  const auto& ov = p_.FindInquiry(id)->manual_score_override;
  ASSERT_TRUE(ov.has_value());
  EXPECT_EQ(ov->category, ScoreCategory::kEmerging);
  EXPECT_EQ(ov->by, teacher_);
}

TEST_F(PlatformTest, ClassifySourceIsPure) {
  EXPECT_EQ(ClassifySource(UserId{1}, UserId{1}, true), SourceClass::kExemplar);
  EXPECT_EQ(ClassifySource(UserId{1}, UserId{1}, false), SourceClass::kOwn);
  EXPECT_EQ(ClassifySource(UserId{1}, UserId{2}, false), SourceClass::kOtherStudent);
}

TEST_F(PlatformTest, ReplayRebuildsIdenticalState) {
  const InquiryId a = PublishedBy(alice_);
  p_.Derive(bob_, a, LineageKind::kRemix, cls_, Tick());
  p_.AddComment(bob_, a, "cool", Tick());
  std::stringstream ss;
  WriteEventLog(ss, p_.log());
  const Platform q = Platform::Replay(ReadEventLog(ss));
  EXPECT_EQ(q.log(), p_.log());
  EXPECT_EQ(q.inquiries().size(), p_.inquiries().size());
  EXPECT_EQ(q.FindInquiry(a)->slots, p_.FindInquiry(a)->slots);
  EXPECT_EQ(q.FindClass(cls_)->join_code, p_.FindClass(cls_)->join_code);
}

TEST_F(PlatformTest, ReplayRejectsBrokenLogs) {
  PublishedBy(alice_);
  std::vector<EventRecord> log = p_.log();
  std::swap(log[1], log[5]);
  try {
    Platform::Replay(log);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIntegrity);
    EXPECT_NE(std::string(e.what()).find("record 2"), std::string::npos) << e.what();
  }
}

TEST_F(PlatformTest, WritesAreAtomic) {
  const InquiryId id = Draft(alice_);
  const std::size_t before = p_.log().size();
  EXPECT_THROW(p_.Capture(alice_, id, Hr(70), std::string(200, 'x'), std::nullopt, Tick()), DomainError);
  EXPECT_EQ(p_.log().size(), before);
  EXPECT_TRUE(p_.FindInquiry(id)->slots.empty());
}

TEST(EventLogTest, MalformedLineIsNamed) {
  std::stringstream ss;
  ss << R"({"timestamp":"2021-06-07T09:00:00.000Z","actor_id":1,"kind":"session_start","subject_id":1,"sensor_type":null,"data":{}})"
     << "\n\n{not json}\n";
  try {
    ReadEventLog(ss);
    FAIL();
  } catch (const LogFormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(EventLogTest, UnknownKindRejected) {
  std::stringstream ss(R"({"timestamp":"2021-06-07T09:00:00Z","actor_id":1,"kind":"teleport","subject_id":1})");
  EXPECT_THROW(ReadEventLog(ss), LogFormatError);
}

TEST(EventLogTest, FieldNamesMatchTheRecordType) {
  const EventRecord e{ParseTimestamp("2021-06-07T09:00:00Z"), UserId{4}, EventKind::kPublished, 9,
                      SensorType::kHeartRate, nlohmann::json::object()};
  EXPECT_EQ(ToNdjsonLine(e),
            R"({"timestamp":"2021-06-07T09:00:00.000Z","actor_id":4,"kind":"published","subject_id":9,"sensor_type":"heart_rate","data":{}})");
  EXPECT_EQ(EventFromJson(ToJson(e)), e);
}

// ---------------------------------------------------------------------------
// Random operation sequences. Failures are expected and ignored; the
// invariants must hold after every step whatever happened.

void CheckInvariants(const Platform& p) {
  for (const auto& [id, inq] : p.inquiries()) {
    ASSERT_LE(inq.slots.size(), kMaxSlots);
    for (std::size_t i = 0; i < inq.slots.size(); ++i) ASSERT_EQ(inq.slots[i].index, static_cast<int>(i));
    if (inq.published()) {
      ASSERT_FALSE(inq.title.empty());
      ASSERT_FALSE(inq.slots.empty());
      ASSERT_TRUE(inq.published_at.has_value());
    } else {
      ASSERT_FALSE(inq.published_at.has_value());
    }
    // Walking the lineage terminates and never revisits a node.
    std::set<InquiryId> seen{id};
    const Inquiry* cur = &inq;
    while (cur->lineage) {
      const Inquiry* src = p.FindInquiry(cur->lineage->source_inquiry_id);
      ASSERT_NE(src, nullptr);
      ASSERT_TRUE(src->published());
      ASSERT_TRUE(seen.insert(src->id).second) << "cycle through " << src->id;
      cur = src;
    }
  }
  for (const auto& [uid, user] : p.users()) {
    for (const auto& [id, inq] : p.inquiries()) {
      const bool visible = p.Visible(uid, inq);
      if (!inq.published()) {
        ASSERT_EQ(visible, inq.author_id == uid);
      }
    }
  }
  for (const Inquiry* inq : p.Discover({.include_exemplars = true})) ASSERT_TRUE(inq->published());
}

TEST(PlatformPropertyTest, RandomSequencesKeepInvariants) {
  std::mt19937_64 rng(20210607);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  for (int round = 0; round < 40; ++round) {
    Platform p;
    int minute = 0;
    auto at = [&] { return T(minute++); };
    const UserId teacher = p.Register("teacher", Role::kTeacher, at());
    const ClassId cls = p.CreateClass(teacher, "c", at());
    std::vector<UserId> students;
    for (int i = 0; i < 4; ++i) {
      students.push_back(p.Register("student" + std::to_string(i), Role::kStudent, at()));
      p.Join(students.back(), p.FindClass(cls)->join_code, at());
    }
    std::vector<UserId> everyone = students;
    everyone.push_back(teacher);
    for (int step = 0; step < 300; ++step) {
      const UserId who = everyone[pick(everyone.size())];
      std::vector<InquiryId> ids;
      for (const auto& [id, inq] : p.inquiries()) ids.push_back(id);
      const InquiryId target = ids.empty() ? InquiryId{1} : ids[pick(ids.size())];
      try {
        switch (pick(7)) {
          case 0:
            p.CreateInquiry(who, {SensorType::kHeartRate, cls, pick(3) == 0 ? "" : "t", "", ""}, at());
            break;
          case 1:
          case 2:
            p.Capture(who, target, Hr(60 + static_cast<double>(pick(40))), "l", std::nullopt, at());
            break;
          case 3:
            p.Publish(who, target, at());
            break;
          case 4:
            p.Derive(who, target, pick(2) ? LineageKind::kRemix : LineageKind::kReplication, cls, at());
            break;
          case 5:
            p.Edit(who, target, {.title = pick(2) ? "" : "x"}, at());
            break;
          case 6:
            p.AddComment(who, target, "c", at());
            break;
        }
      } catch (const DomainError&) {
      }
      ASSERT_NO_FATAL_FAILURE(CheckInvariants(p));
    }
    const Platform replayed = Platform::Replay(p.log());
    ASSERT_EQ(replayed.inquiries().size(), p.inquiries().size());
  }
}

}  // namespace
}  // namespace inquirylab::core
