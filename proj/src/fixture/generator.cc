// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/fixture/generator.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "inquirylab/core/platform.h"

namespace inquirylab::fixture {

std::uint64_t Rng::Next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t Rng::Below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::Below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = Next();
  } while (x >= limit);
  return x % n;
}

namespace {

using core::LineageKind;
using core::ScoreCategory;
using core::SourceClass;
using core::Timestamp;
using proto::Centi;
using proto::SensorType;
using std::chrono::days;
using std::chrono::minutes;
using std::chrono::seconds;

// ---------------------------------------------------------------------------
// Vocabulary. Nothing here may contain a rubric cue except where a template
// adds one on purpose.

struct Topic {
  SensorType sensor;
  std::vector<std::string> titles;
  std::string thing;
  std::vector<std::string> conditions;
  std::string base;
  std::vector<std::string> reasons;
  std::vector<std::string> labels;
  std::vector<std::string> null_titles;
  std::string exemplar_title;
};

const std::vector<Topic>& Topics() {
  static const std::vector<Topic> kTopics = {
      {SensorType::kHeartRate,
       {"Heart rate after exercise", "Pulse and running", "Heart rate challenge", "Resting heart rate",
        "Heart rate while singing", "Star jumps and pulse", "Heart rate in PE"},
       "heart rate",
       {"after running on the spot", "after twenty star jumps", "after climbing the stairs",
        "after a dance break"},
       "sitting still",
       {"the muscles need more oxygen", "the heart pumps faster to move blood to the muscles"},
       {"sitting", "after running", "after star jumps", "lying down", "standing", "after stairs"},
       {"heart", "pulse", "hr test", "test"},
       "Model inquiry: heart rate and exercise"},
      {SensorType::kTempHumidity,
       {"Temperature around the school", "Hot and cold spots", "Sun vs shade", "Humidity in the bathroom",
        "Classroom temperature", "Temperature of our breath"},
       "the temperature",
       {"in the sun", "next to the heater", "inside the greenhouse", "by the window"},
       "in the shade",
       {"the sun heats the air", "the heater warms the air around it", "the glass traps heat"},
       {"classroom", "outside", "sun", "shade", "hallway", "bathroom", "by the window"},
       {"temp", "temperature", "untitled", "my test"},
       "Model inquiry: warm and cool places"},
      {SensorType::kLightUv,
       {"UV at lunchtime", "Light levels in class", "Does sunscreen block UV", "Shade sail test",
        "Light under the desk", "UV through glass"},
       "the UV index",
       {"in direct sunlight", "at midday", "on the field"},
       "under the shade sail",
       {"the shade blocks the sun's rays", "the sun is highest at midday", "glass absorbs some UV"},
       {"field", "shade sail", "under desk", "window", "classroom", "courtyard"},
       {"light", "uv", "test", "hello"},
       "Model inquiry: where is UV strongest"},
      {SensorType::kVoc,
       {"Smelly markers", "Air quality in class", "VOCs from hand sanitiser", "Air near the bins",
        "Perfume test"},
       "the VOC reading",
       {"next to the whiteboard markers", "after using hand sanitiser", "near the rubbish bin"},
       "in fresh air",
       {"the markers give off chemicals into the air", "alcohol from the sanitiser evaporates"},
       {"fresh air", "markers", "sanitiser", "bin", "open window"},
       {"voc", "air", "test"},
       "Model inquiry: what makes the air smell"},
      {SensorType::kConductance,
       {"Salt water circuits", "Conductance of drinks", "Tap water vs salty water", "Wet and dry hands",
        "Sugar or salt"},
       "the conductance",
       {"in salty water", "with wet hands", "in lemon juice"},
       "in tap water",
       {"salt makes ions that carry the charge", "water on the skin lets current flow"},
       {"tap water", "salt water", "sugar water", "lemon juice", "dry hands", "wet hands"},
       {"conductance", "water", "test"},
       "Model inquiry: which liquids conduct"},
      {SensorType::kBodyTemp,
       {"Body temperature after ice", "Forehead vs hand", "Temperature after exercise",
        "Warm hands cold hands", "Body temperature during the day"},
       "body temperature",
       {"after holding an ice pack", "after running", "in the afternoon"},
       "at the start of class",
       {"blood vessels shrink in the cold", "the body makes heat when muscles work"},
       {"hand", "forehead", "after ice", "after running", "morning", "afternoon"},
       {"body temp", "temp test", "me"},
       "Model inquiry: keeping warm"},
  };
  return kTopics;
}

const Topic& TopicFor(SensorType t) {
  for (const Topic& topic : Topics()) {
    if (topic.sensor == t) return topic;
  }
  throw std::logic_error("no topic for sensor");
}

const std::vector<std::string> kNotes = {"", "", "", "Worked in pairs.", "Fun!", "We ran out of time.",
                                         "The sensor was easy to plug in.", "Done in science class."};

const std::vector<std::string> kComments = {
    "Nice work!", "How did you keep the sensor still?", "Cool results", "We got a similar number",
    "Try measuring it a few more times", "What did you change between the readings?", "Interesting!",
    "Our class tried this too", "Great title", "Did you do it more than once?"};

std::string Cap(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

struct Text {
  std::string title, description, notes;
  bool needs_labels = false;  // category relies on distinct slot labels
};

Text MakeText(const Topic& t, ScoreCategory cat, Rng& rng) {
  const std::string cond = rng.Pick(t.conditions);
  const std::string reason = rng.Pick(t.reasons);
  Text out;
  out.title = rng.Pick(t.titles);
  out.notes = rng.Pick(kNotes);
  auto steps = [&](int n) {
    std::vector<std::string> lines = {"Plug the sensor into the laptop", "Measure " + t.thing + " " + t.base,
                                      "Measure " + t.thing + " " + cond, "Write the numbers in a table"};
    std::string s;
    const bool bullets = rng.Percent(30);
    for (int i = 0; i < n; ++i) {
      s += (i ? "\n" : "") + (bullets ? std::string("- ") : std::to_string(i + 1) + ". ") +
           lines[static_cast<std::size_t>(4 - n + i)];
    }
    return s;
  };
  switch (cat) {
    case ScoreCategory::kNull:
      out.title = rng.Pick(t.null_titles);
      out.notes = rng.Percent(30) ? "fun" : "";
      break;
    case ScoreCategory::kNaive:
      if (rng.Percent(55)) {
        out.description = steps(2 + static_cast<int>(rng.Below(3)));
      } else {
        out.needs_labels = true;
        switch (rng.Below(3)) {
          case 0: out.description = "We measured " + t.thing + " " + t.base + " and " + cond + "."; break;
          case 1: out.description = "Testing the sensor " + cond + "."; break;
          default: out.description.clear(); break;
        }
      }
      break;
    case ScoreCategory::kEmerging:
      switch (rng.Below(5)) {
        case 0: out.description = "I think " + t.thing + " will be higher " + cond + " than " + t.base + "."; break;
        case 1:
          out.description = "We predict that " + t.thing + " goes up " + cond + ".\n" + steps(2);
          break;
        case 2: out.description = Cap(t.thing) + " was higher " + cond + " than " + t.base + " because " + reason + "."; break;
        case 3: out.description = "The readings went up " + cond + ". This shows " + reason + "."; break;
        default:
          out.description = "Our hypothesis is that " + t.thing + " rises " + cond + ". It did, which means " + reason + ".";
          break;
      }
      break;
    case ScoreCategory::kInformed:
      out.description = "Hypothesis: " + t.thing + " will be higher " + cond + " than " + t.base + ".\n" +
                        "1. Measure " + t.thing + " " + t.base + " three times\n" +
                        "2. Measure " + t.thing + " " + cond + " three times\n" +
                        "3. Compare the averages\n" + "Result: " + t.thing + " was higher " + cond +
                        ". This shows that " + reason + ".";
      out.notes = "We repeated each reading so another class can check our results.";
      break;
  }
  return out;
}

std::vector<Centi> Reading(SensorType s, Rng& rng) {
  auto v = [&](int lo, int hi) { return Centi::FromRaw(lo * 100 + static_cast<int>(rng.Below(static_cast<std::uint64_t>((hi - lo) * 100)))); };
  switch (s) {
    case SensorType::kHeartRate: return {v(58, 130)};
    case SensorType::kTempHumidity: return {v(12, 32), v(30, 80)};
    case SensorType::kLightUv: return {v(200, 90000), v(0, 11)};
    case SensorType::kVoc: return {v(20, 4000)};
    case SensorType::kConductance: return {v(0, 1500)};
    case SensorType::kBodyTemp: return {v(1500, 1750)};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Plan structures

struct ClassPlan {
  int weekday = 0;
  int start_hour = 9;
  int start_week = 0;
  std::vector<int> students;
};

struct PlannedInquiry {
  int author = -1;  // student index, or -1 for the researcher
  int cls = -1;
  SensorType sensor = SensorType::kHeartRate;
  ScoreCategory category = ScoreCategory::kNull;
  bool published = false;
  bool exemplar = false;
  std::optional<LineageKind> kind;
  SourceClass source_class = SourceClass::kOtherStudent;
  int source = -1;
  int day = 0;  // days after the first day
  Text text;
  std::vector<std::string> labels;
  std::vector<std::vector<Centi>> readings;
};

enum class Op { kRegister, kCreateClass, kJoin, kSession, kCreate, kCapture, kPublish, kComment };

struct Action {
  Timestamp at;
  Op op;
  int user = -1;  // global user index
  int inquiry = -1;
  int slot = -1;
  int cls = -1;
  std::string text;
};

template <typename K>
K WeightedPick(const std::vector<std::pair<K, std::uint64_t>>& weights, Rng& rng) {
  std::uint64_t total = 0;
  for (const auto& [k, w] : weights) total += w;
  std::uint64_t x = rng.Below(total);
  for (const auto& [k, w] : weights) {
    if (x < w) return k;
    x -= w;
  }
  return weights.back().first;
}

std::vector<std::string> DistinctLabels(const Topic& t, int n, Rng& rng) {
  std::vector<std::string> pool = t.labels;
  rng.Shuffle(pool);
  pool.resize(static_cast<std::size_t>(n));
  return pool;
}

}  // namespace

Corpus GenerateCorpus(const CorpusPlan& plan, const scoring::Rubric& rubric) {
  Rng rng(plan.seed);
  const Timestamp day0 = core::ParseTimestamp(plan.first_day + "T00:00:00Z");
  const Timestamp last = core::ParseTimestamp(plan.last_day + "T00:00:00Z");
  const Timestamp low_from = core::ParseTimestamp(plan.low_from + "T00:00:00Z");
  const Timestamp low_to = core::ParseTimestamp(plan.low_to + "T00:00:00Z");
  const int weeks = static_cast<int>((last - day0) / days(7)) + 1;

  // Lesson weeks: full weight in term, a trickle inside the low window, and
  // a softer first week while classes get set up.
  std::vector<std::uint64_t> week_weight(static_cast<std::size_t>(weeks));
  for (int w = 0; w < weeks; ++w) {
    const Timestamp start = day0 + days(7 * w);
    const bool low = start >= low_from && start < low_to;
    week_weight[static_cast<std::size_t>(w)] = low ? 1 : (w == 0 ? 4 : 7 + rng.Below(4));
  }

  // --- classes and students ---
  std::vector<ClassPlan> classes(static_cast<std::size_t>(plan.classes));
  for (int c = 0; c < plan.classes; ++c) {
    classes[c].weekday = c % 5;
    classes[c].start_hour = 9 + (c * 3) % 4;
    classes[c].start_week = c % 5;
  }
  std::vector<int> student_class(static_cast<std::size_t>(plan.students));
  std::vector<int> student_pos(static_cast<std::size_t>(plan.students));
  for (int s = 0; s < plan.students; ++s) {
    student_class[s] = s % plan.classes;
    student_pos[s] = static_cast<int>(classes[student_class[s]].students.size());
    classes[student_class[s]].students.push_back(s);
  }
  std::vector<int> heavy;
  for (int i = 0; i < plan.lineage_heavy_classes; ++i) heavy.push_back(1 + 3 * i);
  const int focus_class = heavy.size() > 1 ? heavy[1] : 0;
  auto is_heavy = [&](int c) { return std::find(heavy.begin(), heavy.end(), c) != heavy.end(); };

  auto lesson_day = [&](int cls, int week) { return 7 * week + classes[cls].weekday; };
  // Weighted lesson day for a class strictly after `after_day`; -1 if none.
  auto pick_day = [&](int cls, int after_day) {
    std::vector<std::pair<int, std::uint64_t>> options;
    for (int w = classes[cls].start_week; w < weeks; ++w) {
      if (lesson_day(cls, w) > after_day) options.emplace_back(w, week_weight[w]);
    }
    if (options.empty()) return -1;
    return lesson_day(cls, WeightedPick(options, rng));
  };

  std::vector<PlannedInquiry> inq;

  // --- exemplars: one per sensor type, authored before any class starts ---
  for (const Topic& t : Topics()) {
    PlannedInquiry e;
    e.sensor = t.sensor;
    e.exemplar = true;
    e.published = true;
    e.category = ScoreCategory::kEmerging;
    e.text.title = t.exemplar_title;
    e.text.description = "I think " + t.thing + " will be higher " + t.conditions[0] + " than " + t.base +
                         ".\n1. Measure " + t.thing + " " + t.base + "\n2. Measure " + t.thing + " " +
                         t.conditions[0] + "\n3. Compare the two readings";
    e.text.notes = "Use this as a starting point for your own inquiry.";
    e.labels = {t.labels[0], t.labels[1], t.labels[2]};
    inq.push_back(e);
  }
  const int n_exemplars = static_cast<int>(inq.size());

  // --- derived inquiries: decide their shape first so originals get the rest ---
  struct DerivedSpec {
    LineageKind kind;
    SourceClass sc;
    bool in_heavy;
  };
  std::vector<DerivedSpec> derived;
  for (const auto& [sc, counts] : plan.lineage) {
    for (int i = 0; i < counts.first; ++i) derived.push_back({LineageKind::kReplication, sc, true});
    for (int i = 0; i < counts.second; ++i) derived.push_back({LineageKind::kRemix, sc, true});
  }
  rng.Shuffle(derived);
  for (int i = 0; i < plan.lineage_outside_heavy && i < static_cast<int>(derived.size()); ++i) {
    derived[derived.size() - 1 - static_cast<std::size_t>(i)].in_heavy = false;
  }
  const int n_derived = static_cast<int>(derived.size());
  const int n_originals = plan.total_inquiries - n_derived;

  std::vector<std::pair<SensorType, std::uint64_t>> sensor_weights;
  for (const auto& [s, n] : plan.sensor_usage) sensor_weights.emplace_back(s, static_cast<std::uint64_t>(n));
  std::vector<std::pair<ScoreCategory, std::uint64_t>> derived_cat_weights;
  for (const auto& [c, n] : plan.scores) {
    if (c != ScoreCategory::kInformed) derived_cat_weights.emplace_back(c, static_cast<std::uint64_t>(n));
  }

  std::vector<SensorType> d_sensor(derived.size());
  std::vector<ScoreCategory> d_cat(derived.size());
  std::map<SensorType, int> sensor_left = plan.sensor_usage;
  std::map<ScoreCategory, int> cat_left = plan.scores;
  for (std::size_t i = 0; i < derived.size(); ++i) {
    d_sensor[i] = WeightedPick(sensor_weights, rng);
    d_cat[i] = derived[i].sc == SourceClass::kExemplar ? ScoreCategory::kEmerging
                                                       : WeightedPick(derived_cat_weights, rng);
    --sensor_left[d_sensor[i]];
    --cat_left[d_cat[i]];
  }
  int derived_published = 0;
  std::vector<bool> d_published(derived.size());
  for (std::size_t i = 0; i < derived.size(); ++i) {
    d_published[i] = d_sensor[i] == SensorType::kHeartRate || rng.Percent(65);
    derived_published += d_published[i];
  }

  // --- originals: authors, weeks, sensors, status, categories ---
  const int first_original = static_cast<int>(inq.size());
  std::vector<int> authors;
  for (int s = 0; s < plan.students; ++s) authors.push_back(s);
  std::vector<std::pair<int, std::uint64_t>> keen;
  for (int s = 0; s < plan.students; ++s) keen.emplace_back(s, 1 + rng.Below(4) * rng.Below(3));
  while (static_cast<int>(authors.size()) < n_originals) authors.push_back(WeightedPick(keen, rng));

  std::vector<SensorType> sensors;
  for (const auto& [s, n] : sensor_left) sensors.insert(sensors.end(), static_cast<std::size_t>(n), s);
  if (static_cast<int>(sensors.size()) != n_originals) throw std::logic_error("sensor quotas do not add up");
  rng.Shuffle(sensors);

  for (int i = 0; i < n_originals; ++i) {
    PlannedInquiry p;
    p.author = authors[i];
    p.cls = student_class[p.author];
    p.sensor = sensors[i];
    p.day = pick_day(p.cls, -1);
    inq.push_back(p);
  }
  auto originals = [&] {
    std::vector<int> v;
    for (int i = first_original; i < first_original + n_originals; ++i) v.push_back(i);
    return v;
  }();

  // Informed: a cluster in the focus class, the rest spread out.
  {
    std::vector<int> focus, others;
    for (int i : originals) (inq[i].cls == focus_class ? focus : others).push_back(i);
    rng.Shuffle(focus);
    rng.Shuffle(others);
    const int total_informed = cat_left[ScoreCategory::kInformed];
    for (int k = 0; k < total_informed; ++k) {
      const int i = k < plan.informed_in_focus_class ? focus.at(static_cast<std::size_t>(k))
                                                     : others.at(static_cast<std::size_t>(k));
      inq[i].category = ScoreCategory::kInformed;
      inq[i].published = true;
    }
    cat_left[ScoreCategory::kInformed] = 0;
  }
  for (int i : originals) {
    if (inq[i].sensor == SensorType::kHeartRate) inq[i].published = true;
  }
  {
    int published = 0;
    std::vector<int> open;
    for (int i : originals) {
      if (inq[i].published) ++published;
      else open.push_back(i);
    }
    const int want = plan.published - derived_published - published;
    if (want < 0 || want > static_cast<int>(open.size())) throw std::logic_error("published quota unreachable");
    rng.Shuffle(open);
    for (int k = 0; k < want; ++k) inq[open[static_cast<std::size_t>(k)]].published = true;
  }
  {
    std::vector<ScoreCategory> cats;
    for (const auto& [c, n] : cat_left) cats.insert(cats.end(), static_cast<std::size_t>(n), c);
    rng.Shuffle(cats);
    std::size_t k = 0;
    for (int i : originals) {
      if (inq[i].category == ScoreCategory::kInformed) continue;
      inq[i].category = cats.at(k++);
    }
    if (k != cats.size()) throw std::logic_error("category quotas do not add up");
  }

  // Texts and captures for originals.
  bool water_molecules = false;
  for (int i : originals) {
    PlannedInquiry& p = inq[i];
    const Topic& t = TopicFor(p.sensor);
    if (!water_molecules && p.sensor == SensorType::kTempHumidity && p.category == ScoreCategory::kNaive &&
        p.published) {
      water_molecules = true;
      p.text = {"Water molecules", "", "", true};
      p.labels = {"glass water", "outside", "breath"};
      continue;
    }
    p.text = MakeText(t, p.category, rng);
    int slots;
    if (p.category == ScoreCategory::kNull) {
      slots = p.published ? 1 : static_cast<int>(rng.Below(2));
      if (!p.published && rng.Percent(40)) p.text.title.clear();
    } else if (p.text.needs_labels) {
      slots = 2 + static_cast<int>(rng.Below(2));
    } else {
      slots = (p.published ? 1 : 0) + static_cast<int>(rng.Below(p.published ? 3 : 4));
    }
    p.labels = DistinctLabels(t, slots, rng);
    if (p.category == ScoreCategory::kNull && slots == 1 && rng.Percent(30)) p.labels[0].clear();
  }

  // --- derived: pick authors, sources and days ---
  std::vector<int> heavy_students, other_students;
  for (int s = 0; s < plan.students; ++s) (is_heavy(student_class[s]) ? heavy_students : other_students).push_back(s);
  for (std::size_t d = 0; d < derived.size(); ++d) {
    const DerivedSpec& spec = derived[d];
    PlannedInquiry p;
    p.kind = spec.kind;
    p.source_class = spec.sc;
    p.sensor = d_sensor[d];
    p.category = d_cat[d];
    p.published = d_published[d];
    const std::vector<int>& pool = spec.in_heavy ? heavy_students : other_students;
    bool placed = false;
    for (int attempt = 0; attempt < 500 && !placed; ++attempt) {
      if (spec.sc == SourceClass::kExemplar) {
        p.author = rng.Pick(pool);
        p.source = static_cast<int>(std::find_if(inq.begin(), inq.begin() + n_exemplars,
                                                 [&](const PlannedInquiry& e) { return e.sensor == p.sensor; }) -
                                    inq.begin());
        p.day = pick_day(student_class[p.author], -1);
      } else {
        std::vector<int> sources;
        for (int i : originals) {
          const PlannedInquiry& s = inq[i];
          if (!s.published || s.sensor != p.sensor || s.category != p.category) continue;
          if (spec.sc == SourceClass::kOwn && spec.in_heavy != is_heavy(s.cls)) continue;
          sources.push_back(i);
        }
        if (sources.empty()) break;
        p.source = rng.Pick(sources);
        p.author = spec.sc == SourceClass::kOwn ? inq[p.source].author : rng.Pick(pool);
        if (spec.sc == SourceClass::kOtherStudent && p.author == inq[p.source].author) continue;
        p.day = pick_day(student_class[p.author], inq[p.source].day);
      }
      placed = p.day >= 0;
    }
    if (!placed) throw std::logic_error("could not place derived inquiry " + std::to_string(d));
    p.cls = student_class[p.author];
    const Topic& t = TopicFor(p.sensor);
    const int slots = p.category == ScoreCategory::kNull ? (p.published ? 1 : 0) : 2 + static_cast<int>(rng.Below(2));
    p.labels = DistinctLabels(t, slots, rng);
    inq.push_back(p);
  }

  for (PlannedInquiry& p : inq) {
    for (std::size_t k = 0; k < p.labels.size(); ++k) p.readings.push_back(Reading(p.sensor, rng));
  }

  // --- comments ---
  struct PlannedComment {
    int author, target, day;
    std::string body;
  };
  std::vector<PlannedComment> comments;
  {
    std::vector<int> targets;
    for (int i = n_exemplars; i < static_cast<int>(inq.size()); ++i) {
      if (inq[i].published) targets.push_back(i);
    }
    while (static_cast<int>(comments.size()) < plan.comments) {
      const int target = rng.Pick(targets);
      const std::vector<int>& mates = classes[inq[target].cls].students;
      const int author = rng.Pick(mates);
      if (author == inq[target].author) continue;
      const int day = pick_day(inq[target].cls, inq[target].day);
      if (day < 0) continue;
      comments.push_back({author, target, day, rng.Pick(kComments)});
    }
  }

  // --- timeline ---
  // Global user index: 0 researcher, 1..classes teachers, then students.
  auto teacher_user = [&](int c) { return 1 + c; };
  auto student_user = [&](int s) { return 1 + plan.classes + s; };
  const int n_users = 1 + plan.classes + plan.students;
  auto at = [&](int day, int hour, int minute, int second = 0) {
    return day0 + days(day) + std::chrono::hours(hour) + minutes(minute) + seconds(second);
  };

  std::vector<Action> actions;
  auto lifecycle = [&](int idx, Timestamp t0, int user) {
    actions.push_back({t0, Op::kCreate, user, idx});
    for (std::size_t k = 0; k < inq[idx].labels.size(); ++k) {
      actions.push_back({t0 + minutes(1 + static_cast<int>(k)), Op::kCapture, user, idx, static_cast<int>(k)});
    }
    if (inq[idx].published) actions.push_back({t0 + minutes(5), Op::kPublish, user, idx});
  };

  actions.push_back({at(0, 7, 0), Op::kRegister, 0});
  for (int e = 0; e < n_exemplars; ++e) lifecycle(e, at(0, 7, 5 + 6 * e), 0);

  // Per (student, day) queues, in plan order: originals, derived, comments.
  std::map<std::pair<int, int>, std::vector<std::function<void(Timestamp)>>> day_work;
  for (int i = first_original; i < static_cast<int>(inq.size()); ++i) {
    const int user = student_user(inq[i].author);
    day_work[{inq[i].author, inq[i].day}].push_back([&, i, user](Timestamp t) { lifecycle(i, t, user); });
  }
  for (const PlannedComment& c : comments) {
    const int user = student_user(c.author);
    day_work[{c.author, c.day}].push_back([&actions, &c, user](Timestamp t) {
      actions.push_back({t, Op::kComment, user, c.target, -1, -1, c.body});
    });
  }

  std::vector<int> first_day_of(static_cast<std::size_t>(plan.students), -1);
  std::set<std::pair<int, int>> class_days;
  for (const auto& [key, work] : day_work) {
    const auto [s, day] = key;
    if (first_day_of[s] < 0 || day < first_day_of[s]) first_day_of[s] = day;
    class_days.insert({student_class[s], day});
  }
  for (int s = 0; s < plan.students; ++s) {
    if (first_day_of[s] < 0) throw std::logic_error("student without activity");
  }
  std::vector<int> class_first_day(static_cast<std::size_t>(plan.classes), -1);
  for (const auto& [c, day] : class_days) {
    if (class_first_day[c] < 0) class_first_day[c] = day;
  }
  for (int c = 0; c < plan.classes; ++c) {
    const int t = teacher_user(c);
    actions.push_back({at(class_first_day[c], 7, 30 + c, 0), Op::kRegister, t});
    actions.push_back({at(class_first_day[c], 7, 30 + c, 20), Op::kCreateClass, t, -1, -1, c});
  }
  for (const auto& [c, day] : class_days) {
    actions.push_back({at(day, classes[c].start_hour, 0) - minutes(2), Op::kSession, teacher_user(c)});
  }
  for (int s = 0; s < plan.students; ++s) {
    const int c = student_class[s];
    const Timestamp t = at(first_day_of[s], classes[c].start_hour, 0) - minutes(10) + seconds(6 * student_pos[s]);
    actions.push_back({t, Op::kRegister, student_user(s)});
    actions.push_back({t + seconds(3), Op::kJoin, student_user(s), -1, -1, c});
  }
  for (auto& [key, work] : day_work) {
    const auto [s, day] = key;
    const int c = student_class[s];
    const Timestamp start = at(day, classes[c].start_hour, 0);
    actions.push_back({start + minutes(1) + seconds(5 * student_pos[s]), Op::kSession, student_user(s)});
    for (std::size_t k = 0; k < work.size(); ++k) {
      work[k](start + minutes(5 + 12 * static_cast<int>(k)) + seconds(3 * student_pos[s]));
    }
  }
  std::stable_sort(actions.begin(), actions.end(), [](const Action& a, const Action& b) { return a.at < b.at; });

  // --- drive the platform ---
  core::Platform platform;
  std::vector<core::UserId> uid(static_cast<std::size_t>(n_users));
  std::vector<core::ClassId> cid(static_cast<std::size_t>(plan.classes));
  std::vector<core::InquiryId> iid(inq.size());
  auto username = [&](int user) -> std::string {
    char buf[32];
    if (user == 0) return "research.team";
    if (user <= plan.classes) {
      std::snprintf(buf, sizeof buf, "c%02d.teacher", user);
      return buf;
    }
    const int s = user - 1 - plan.classes;
    std::snprintf(buf, sizeof buf, "c%02d.s%02d", student_class[s] + 1, student_pos[s] + 1);
    return buf;
  };
  for (const Action& a : actions) {
    switch (a.op) {
      case Op::kRegister: {
        const core::Role role = a.user == 0 ? core::Role::kResearcher
                                : a.user <= plan.classes ? core::Role::kTeacher
                                                         : core::Role::kStudent;
        uid[a.user] = platform.Register(username(a.user), role, a.at);
        break;
      }
      case Op::kCreateClass:
        cid[a.cls] = platform.CreateClass(uid[a.user], "Junior Science " + std::to_string(a.cls + 1), a.at);
        break;
      case Op::kJoin:
        platform.Join(uid[a.user], platform.FindClass(cid[a.cls])->join_code, a.at);
        break;
      case Op::kSession:
        platform.Commit(platform.PlanSessionStart(uid[a.user], a.at));
        break;
      case Op::kCreate: {
        const PlannedInquiry& p = inq[a.inquiry];
        const std::optional<core::ClassId> cls = p.cls >= 0 ? std::optional(cid[p.cls]) : std::nullopt;
        if (p.kind) {
          iid[a.inquiry] = platform.Derive(uid[a.user], iid[p.source], *p.kind, cls, a.at);
        } else {
          iid[a.inquiry] = platform.CreateInquiry(
              uid[a.user], {p.sensor, cls, p.text.title, p.text.description, p.text.notes, p.exemplar}, a.at);
        }
        break;
      }
      case Op::kCapture: {
        const PlannedInquiry& p = inq[a.inquiry];
        const proto::Measurement m{p.sensor, 1000u * static_cast<std::uint32_t>(a.slot + 1) * 7,
                                   p.readings[a.slot]};
        platform.Capture(uid[a.user], iid[a.inquiry], m, p.labels[a.slot], std::nullopt, a.at);
        break;
      }
      case Op::kPublish:
        platform.Publish(uid[a.user], iid[a.inquiry], a.at);
        break;
      case Op::kComment:
        platform.AddComment(uid[a.user], iid[a.inquiry], a.text, a.at);
        break;
    }
  }

  // --- labels, checked against the engine ---
  Corpus corpus;
  for (std::size_t i = 0; i < inq.size(); ++i) {
    const core::Inquiry& got = *platform.FindInquiry(iid[i]);
    const ScoreCategory engine = rubric.Score(got).category;
    if (engine != inq[i].category) {
      throw std::logic_error("inquiry " + std::to_string(got.id.value) + " authored as " +
                             std::string(core::CategoryName(inq[i].category)) + " but scores " +
                             std::string(core::CategoryName(engine)) + ": '" + got.title + "' / '" +
                             got.description + "'");
    }
    corpus.labels.emplace_back(got.id, inq[i].category);
  }
  std::sort(corpus.labels.begin(), corpus.labels.end());
  corpus.events = platform.log();

  nlohmann::json ranges = nlohmann::json::object();
  for (SensorType s : proto::kAllSensorTypes) {
    nlohmann::json chans = nlohmann::json::array();
    for (const proto::ChannelSpec& ch : proto::DefaultChannels(s)) {
      chans.push_back({{"unit", proto::UnitSymbol(ch.unit)}, {"min", ch.range_min.ToDouble()}, {"max", ch.range_max.ToDouble()}});
    }
    ranges[std::string(proto::SensorName(s))] = chans;
  }
  nlohmann::json usage = nlohmann::json::object();
  for (const auto& [s, n] : plan.sensor_usage) usage[std::string(proto::SensorName(s))] = n;
  nlohmann::json scores = nlohmann::json::object();
  for (const auto& [c, n] : plan.scores) scores[std::string(core::CategoryName(c))] = n;
  nlohmann::json lineage = nlohmann::json::object();
  for (const auto& [sc, n] : plan.lineage) {
    lineage[std::string(core::SourceClassName(sc))] = {{"replications", n.first}, {"remixes", n.second}};
  }
  corpus.manifest = {
      {"seed", plan.seed},
      {"window", {{"first_day", plan.first_day}, {"last_day", plan.last_day}}},
      {"low_activity_window", {{"from", plan.low_from}, {"to", plan.low_to}}},
      {"classes", plan.classes},
      {"teachers", plan.classes},
      {"students", plan.students},
      {"researchers", 1},
      {"exemplars", n_exemplars},
      {"class_kit", {{"units_per_sensor_type", plan.units_per_sensor_type}, {"sensor_types", 6}}},
      {"channel_ranges", ranges},
      {"body_temp_calibration", "per-device gain/offset; channel range derived from the calibration"},
      {"inquiries", {{"total", plan.total_inquiries}, {"published", plan.published},
                     {"drafts", plan.total_inquiries - plan.published}}},
      {"sensor_usage", usage},
      {"score_distribution", scores},
      {"lineage", lineage},
      {"comments", plan.comments},
      {"events", corpus.events.size()},
      {"synthetic",
       {"sensor_usage.light_uv", "sensor_usage.conductance", "sensor_usage.body_temp", "sensor_usage.voc",
        "score_distribution.null", "score_distribution.naive", "score_distribution.emerging", "comments",
        "class sizes and lesson timetable", "inquiry texts and measurement values"}},
  };
  return corpus;
}

void WriteCorpus(const Corpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/events.ndjson", std::ios::binary);
    core::WriteEventLog(out, corpus.events);
  }
  {
    std::ofstream out(dir + "/labels.csv", std::ios::binary);
    out << "inquiry_id,category\n";
    for (const auto& [id, cat] : corpus.labels) out << id.value << ',' << core::CategoryName(cat) << '\n';
  }
  std::ofstream(dir + "/manifest.json", std::ios::binary) << corpus.manifest.dump(2) << '\n';
}

std::vector<std::pair<core::InquiryId, ScoreCategory>> ReadLabels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::pair<core::InquiryId, ScoreCategory>> out;
  std::string line;
  std::getline(in, line);  // header
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const auto cat = core::CategoryFromName(comma == std::string::npos ? "" : line.substr(comma + 1));
    if (!cat) throw std::runtime_error(path + ":" + std::to_string(n) + ": bad label line");
    out.emplace_back(core::InquiryId{std::stoull(line.substr(0, comma))}, *cat);
  }
  return out;
}

std::string DefaultCorpusDir() { return std::string(INQUIRYLAB_DATA_DIR) + "/fixture"; }

}  // namespace inquirylab::fixture
