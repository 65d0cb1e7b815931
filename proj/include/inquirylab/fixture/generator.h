// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic generator for the bundled classroom corpus. The corpus is
// produced by driving a Platform through a planned term of lessons, so every
// record in the output log passes the same checks as a live write.
//
// Output files (see WriteCorpus):
//   events.ndjson  the event log
//   labels.csv     inquiry_id,category for every inquiry, as authored
//   manifest.json  sizes, windows and which figures are synthetic

#ifndef INQUIRYLAB_FIXTURE_GENERATOR_H_
#define INQUIRYLAB_FIXTURE_GENERATOR_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "inquirylab/core/event.h"
#include "inquirylab/core/types.h"
#include "inquirylab/scoring/rubric.h"

namespace inquirylab::fixture {

// Small, fully specified PRNG (splitmix64) so the corpus does not depend on
// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t Next();
  // Uniform in [0, n). n must be positive.
  std::uint64_t Below(std::uint64_t n);
  bool Percent(unsigned p) { return Below(100) < p; }
  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[Below(i)]);
  }
  template <typename T>
  const T& Pick(const std::vector<T>& v) {
    return v[Below(v.size())];
  }

 private:
  std::uint64_t state_;
};

// Shape of the corpus. Defaults describe the bundled one.
struct CorpusPlan {
  std::uint64_t seed = 20210607;
  int classes = 16;
  int students = 409;
  int total_inquiries = 1336;  // excluding exemplars
  int published = 988;
  int comments = 312;
  std::map<proto::SensorType, int> sensor_usage = {
      {proto::SensorType::kHeartRate, 336}, {proto::SensorType::kTempHumidity, 275},
      {proto::SensorType::kLightUv, 250},   {proto::SensorType::kConductance, 210},
      {proto::SensorType::kBodyTemp, 190},  {proto::SensorType::kVoc, 75},
  };
  std::map<core::ScoreCategory, int> scores = {
      {core::ScoreCategory::kNull, 310},
      {core::ScoreCategory::kNaive, 721},
      {core::ScoreCategory::kEmerging, 292},
      {core::ScoreCategory::kInformed, 13},
  };
  int informed_in_focus_class = 6;
  // Replications then remixes, by source class.
  std::map<core::SourceClass, std::pair<int, int>> lineage = {
      {core::SourceClass::kOtherStudent, {45, 4}},
      {core::SourceClass::kExemplar, {22, 2}},
      {core::SourceClass::kOwn, {7, 1}},
  };
  int lineage_heavy_classes = 4;
  int lineage_outside_heavy = 10;
  int units_per_sensor_type = 20;
  std::string first_day = "2021-06-07";
  std::string last_day = "2021-12-10";
  std::string low_from = "2021-08-23";
  std::string low_to = "2021-11-14";
};

struct Corpus {
  std::vector<core::EventRecord> events;
  std::vector<std::pair<core::InquiryId, core::ScoreCategory>> labels;
  nlohmann::json manifest;
};

// Throws std::logic_error if the plan cannot be realised or if the rubric
// disagrees with an authored label.
Corpus GenerateCorpus(const CorpusPlan& plan, const scoring::Rubric& rubric);

void WriteCorpus(const Corpus& corpus, const std::string& dir);

std::vector<std::pair<core::InquiryId, core::ScoreCategory>> ReadLabels(const std::string& path);

// data/fixture inside the source tree.
std::string DefaultCorpusDir();

}  // namespace inquirylab::fixture

#endif  // INQUIRYLAB_FIXTURE_GENERATOR_H_
