// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/service/photos.h"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "inquirylab/service/auth.h"

namespace inquirylab::service {

namespace fs = std::filesystem;

PhotoStore::PhotoStore(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

bool PhotoStore::IsValidId(std::string_view id) {
  return id.size() == 64 &&
         id.find_first_not_of("0123456789abcdef") == std::string_view::npos;
}

std::string PhotoStore::Put(std::string_view bytes) {
  const std::string id = Sha256Hex(bytes);
  const fs::path final_path = fs::path(dir_) / id;
  if (fs::exists(final_path)) return id;
  // Write then rename so readers never see a partial file.
  const fs::path tmp = fs::path(dir_) / (id + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write photo " + id);
  }
  fs::rename(tmp, final_path);
  return id;
}

std::optional<std::string> PhotoStore::Get(const std::string& id) const {
  if (!IsValidId(id)) return std::nullopt;
  std::ifstream in(fs::path(dir_) / id, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace inquirylab::service
