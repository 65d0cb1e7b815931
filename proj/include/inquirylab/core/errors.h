// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_CORE_ERRORS_H_
#define INQUIRYLAB_CORE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace inquirylab::core {

enum class ErrorCode {
  kAuthorization,  // role or ownership violation
  kNotFound,       // unknown id/code, or something the caller may not see
  kExpiredCode,    // join code was regenerated
  kSlotLimit,      // fourth capture
  kState,          // operation not valid in the current state
  kValidation,     // bad input; fields() lists the offending fields
  kConflict,       // uniqueness violation (e.g. username taken)
  kIntegrity,      // replayed data references something that does not exist
};

const char* ToString(ErrorCode code);

class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorCode code, const std::string& what, std::vector<std::string> fields = {})
      : std::runtime_error(what), code_(code), fields_(std::move(fields)) {}

  ErrorCode code() const { return code_; }
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  ErrorCode code_;
  std::vector<std::string> fields_;
};

}  // namespace inquirylab::core

#endif  // INQUIRYLAB_CORE_ERRORS_H_
