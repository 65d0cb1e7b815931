// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_CORE_TIME_H_
#define INQUIRYLAB_CORE_TIME_H_

#include <chrono>
#include <string>
#include <string_view>

namespace inquirylab::core {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// "2021-06-07T09:15:00.000Z"
std::string FormatTimestamp(Timestamp t);
// Accepts the format above, with or without the millisecond part.
// Throws std::invalid_argument.
Timestamp ParseTimestamp(std::string_view text);
// "2021-06-07"
std::string FormatDate(Timestamp t);

Timestamp Now();

}  // namespace inquirylab::core

#endif  // INQUIRYLAB_CORE_TIME_H_
