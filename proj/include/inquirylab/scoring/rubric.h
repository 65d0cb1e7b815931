// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Keyword/structure rubric coder. Cue lists come from a text file:
//
//   [hypothesis]
//   predict
//   [interpretation]
//   because
//   [method]
//   measure
//
// Categories: Null (no features), Naive (features but neither hypothesis
// nor interpretation), Emerging (hypothesis or interpretation), Informed
// (hypothesis, method steps and interpretation together).

#ifndef INQUIRYLAB_SCORING_RUBRIC_H_
#define INQUIRYLAB_SCORING_RUBRIC_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "inquirylab/core/types.h"

namespace inquirylab::scoring {

inline constexpr std::string_view kLabeledMeasurements = "labeled_measurements";
inline constexpr std::string_view kHypothesisMarker = "hypothesis_marker";
inline constexpr std::string_view kMethodSteps = "method_steps";
inline constexpr std::string_view kInterpretation = "interpretation";
inline constexpr std::string_view kManualOverride = "manual_override";

struct CueLists {
  std::vector<std::string> hypothesis;
  std::vector<std::string> interpretation;
  std::vector<std::string> method_verbs;
};

// Throws std::runtime_error on an unknown section or a cue outside any section.
CueLists ParseCues(std::istream& in);
CueLists LoadCues(const std::string& path);
// The cue file bundled with the repository.
std::string DefaultCuePath();

struct Features {
  bool labeled_measurements = false;
  bool hypothesis_marker = false;
  bool method_steps = false;
  bool interpretation = false;

  bool any() const { return labeled_measurements || hypothesis_marker || method_steps || interpretation; }
  friend bool operator==(const Features&, const Features&) = default;
};

// True when `cue` occurs in `text` starting at a word boundary, ignoring case.
bool ContainsCue(std::string_view text, std::string_view cue);

class Rubric {
 public:
  explicit Rubric(CueLists cues);
  static Rubric FromFile(const std::string& path = DefaultCuePath());

  Features Extract(const core::Inquiry& inq) const;
  core::ScoreCategory Categorize(const Features& f) const;
  // Engine result, replaced by the manual override when one is stored.
  core::InquiryScore Score(const core::Inquiry& inq) const;
  core::InquiryScore EngineScore(const core::Inquiry& inq) const;

  bool IsStepLine(std::string_view line) const;
  const CueLists& cues() const { return cues_; }

 private:
  CueLists cues_;
};

}  // namespace inquirylab::scoring

#endif  // INQUIRYLAB_SCORING_RUBRIC_H_
