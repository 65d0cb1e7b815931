// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_SERVICE_PHOTOS_H_
#define INQUIRYLAB_SERVICE_PHOTOS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace inquirylab::service {

inline constexpr std::size_t kMaxPhotoBytes = 5u * 1024u * 1024u;

// Content-addressed blobs: the id is the SHA-256 of the bytes, so equal
// uploads share one file.
class PhotoStore {
 public:
  // Creates the directory if needed.
  explicit PhotoStore(std::string dir);

  // Writes the blob unless it already exists and returns its id.
  std::string Put(std::string_view bytes);
  std::optional<std::string> Get(const std::string& id) const;

  static bool IsValidId(std::string_view id);
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
};

}  // namespace inquirylab::service

#endif  // INQUIRYLAB_SERVICE_PHOTOS_H_
