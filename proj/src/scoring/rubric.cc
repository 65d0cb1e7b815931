// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/scoring/rubric.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace inquirylab::scoring {
namespace {

char Lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
bool IsWordChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '\''; }

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string LowerCopy(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), Lower);
  return out;
}

bool AnyCue(std::string_view text, const std::vector<std::string>& cues) {
  return std::any_of(cues.begin(), cues.end(), [&](const std::string& c) { return ContainsCue(text, c); });
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    out.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

}  // namespace

CueLists ParseCues(std::istream& in) {
  CueLists cues;
  std::vector<std::string>* section = nullptr;
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line == "[hypothesis]") section = &cues.hypothesis;
      else if (line == "[interpretation]") section = &cues.interpretation;
      else if (line == "[method]") section = &cues.method_verbs;
      else throw std::runtime_error("cue file line " + std::to_string(n) + ": unknown section " + std::string(line));
      continue;
    }
    if (section == nullptr) throw std::runtime_error("cue file line " + std::to_string(n) + ": cue before any section");
    section->push_back(LowerCopy(line));
  }
  return cues;
}

CueLists LoadCues(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cue file " + path);
  return ParseCues(in);
}

std::string DefaultCuePath() { return std::string(INQUIRYLAB_DATA_DIR) + "/rubric_cues.txt"; }

bool ContainsCue(std::string_view text, std::string_view cue) {
  if (cue.empty() || cue.size() > text.size()) return false;
  for (std::size_t i = 0; i + cue.size() <= text.size(); ++i) {
    if (i > 0 && IsWordChar(text[i - 1])) continue;
    bool match = true;
    for (std::size_t k = 0; k < cue.size() && match; ++k) match = Lower(text[i + k]) == Lower(cue[k]);
    if (match) return true;
  }
  return false;
}

Rubric::Rubric(CueLists cues) : cues_(std::move(cues)) {}

Rubric Rubric::FromFile(const std::string& path) { return Rubric(LoadCues(path)); }

bool Rubric::IsStepLine(std::string_view line) const {
  line = Trim(line);
  if (line.empty()) return false;
  if (line.front() == '-' || line.front() == '*') return line.size() > 1;
  std::size_t digits = 0;
  while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) ++digits;
  if (digits > 0 && digits < line.size() && (line[digits] == '.' || line[digits] == ')')) return true;
  const std::string lower = LowerCopy(line.substr(0, std::min<std::size_t>(line.size(), 24)));
  if (lower.rfind("step ", 0) == 0 && lower.size() > 5 && std::isdigit(static_cast<unsigned char>(lower[5]))) {
    return true;
  }
  std::size_t end = 0;
  while (end < line.size() && std::isalpha(static_cast<unsigned char>(line[end]))) ++end;
  const std::string first = LowerCopy(line.substr(0, end));
  return std::find(cues_.method_verbs.begin(), cues_.method_verbs.end(), first) != cues_.method_verbs.end();
}

Features Rubric::Extract(const core::Inquiry& inq) const {
  Features f;
  std::set<std::string> labels;
  for (const core::CaptureSlot& s : inq.slots) {
    const std::string_view t = Trim(s.label);
    if (!t.empty()) labels.insert(LowerCopy(t));
  }
  f.labeled_measurements = labels.size() >= 2;

  std::string combined = inq.title + "\n" + inq.description + "\n" + inq.notes;
  for (const core::CaptureSlot& s : inq.slots) combined += "\n" + s.label;
  f.hypothesis_marker = AnyCue(combined, cues_.hypothesis);

  const std::string body = inq.description + "\n" + inq.notes;
  f.interpretation = AnyCue(body, cues_.interpretation);
  const auto lines = Lines(body);
  f.method_steps = std::count_if(lines.begin(), lines.end(), [&](std::string_view l) { return IsStepLine(l); }) >= 2;
  return f;
}

core::ScoreCategory Rubric::Categorize(const Features& f) const {
  using core::ScoreCategory;
  if (f.hypothesis_marker && f.method_steps && f.interpretation) return ScoreCategory::kInformed;
  if (f.hypothesis_marker || f.interpretation) return ScoreCategory::kEmerging;
  if (f.any()) return ScoreCategory::kNaive;
  return ScoreCategory::kNull;
}

core::InquiryScore Rubric::EngineScore(const core::Inquiry& inq) const {
  const Features f = Extract(inq);
  core::InquiryScore s;
  s.category = Categorize(f);
  if (f.labeled_measurements) s.evidence.emplace_back(kLabeledMeasurements);
  if (f.hypothesis_marker) s.evidence.emplace_back(kHypothesisMarker);
  if (f.method_steps) s.evidence.emplace_back(kMethodSteps);
  if (f.interpretation) s.evidence.emplace_back(kInterpretation);
  return s;
}

core::InquiryScore Rubric::Score(const core::Inquiry& inq) const {
  core::InquiryScore s = EngineScore(inq);
  if (inq.manual_score_override) {
    s.category = inq.manual_score_override->category;
    s.overridden = true;
    s.evidence.emplace_back(kManualOverride);
  }
  return s;
}

}  // namespace inquirylab::scoring
