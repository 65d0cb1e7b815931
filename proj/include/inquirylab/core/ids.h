// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_CORE_IDS_H_
#define INQUIRYLAB_CORE_IDS_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

namespace inquirylab::core {

template <typename Tag>
struct Id {
  std::uint64_t value = 0;

  constexpr explicit operator bool() const { return value != 0; }
  friend constexpr auto operator<=>(Id, Id) = default;
  friend std::ostream& operator<<(std::ostream& os, Id id) { return os << id.value; }
};

using UserId = Id<struct UserTag>;
using ClassId = Id<struct ClassTag>;
using InquiryId = Id<struct InquiryTag>;
using CommentId = Id<struct CommentTag>;

}  // namespace inquirylab::core

template <typename Tag>
struct std::hash<inquirylab::core::Id<Tag>> {
  std::size_t operator()(inquirylab::core::Id<Tag> id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

#endif  // INQUIRYLAB_CORE_IDS_H_
