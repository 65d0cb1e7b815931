// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/core/time.h"

#include <cstdio>
#include <stdexcept>

namespace inquirylab::core {

using namespace std::chrono;

std::string FormatTimestamp(Timestamp t) {
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss<milliseconds> tod{t - day};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()), static_cast<int>(tod.subseconds().count()));
  return buf;
}

std::string FormatDate(Timestamp t) { return FormatTimestamp(t).substr(0, 10); }

Timestamp ParseTimestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0, ms = 0, consumed = 0;
  const std::string str(text);
  const int n = std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &s, &consumed);
  if (n != 6) throw std::invalid_argument("bad timestamp '" + str + "'");
  std::string_view rest = text.substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest.front() == '.') {
    if (rest.size() < 4) throw std::invalid_argument("bad timestamp '" + str + "'");
    ms = std::stoi(std::string(rest.substr(1, 3)));
    rest.remove_prefix(4);
  }
  if (rest != "Z") throw std::invalid_argument("timestamp must end in Z: '" + str + "'");
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) throw std::invalid_argument("bad timestamp '" + str + "'");
  return Timestamp{sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi} + seconds{s} +
                   milliseconds{ms}};
}

Timestamp Now() { return time_point_cast<milliseconds>(system_clock::now()); }

}  // namespace inquirylab::core
