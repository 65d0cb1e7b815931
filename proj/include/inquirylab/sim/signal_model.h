// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INQUIRYLAB_SIM_SIGNAL_MODEL_H_
#define INQUIRYLAB_SIM_SIGNAL_MODEL_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "inquirylab/protocol/messages.h"

namespace inquirylab::sim {

enum class SignalMode : std::uint8_t { kConstant, kSinusoidDrift, kStepResponse };

std::string_view SignalModeName(SignalMode mode);
std::optional<SignalMode> SignalModeFromName(std::string_view name);

// Per-channel baseline and drift bound. Every generated value stays within
// baseline +/- amplitude.
struct SignalModel {
  std::vector<proto::Centi> baseline;
  std::vector<proto::Centi> amplitude;
  SignalMode mode = SignalMode::kConstant;
};

// Deterministic value source: the sequence depends only on the model and the
// seed. Reset() restarts the sequence.
class SignalGenerator {
 public:
  SignalGenerator(SignalModel model, std::uint64_t seed);

  std::vector<proto::Centi> Sample(std::uint32_t timestamp_ms);
  void Reset();

 private:
  double Jitter();

  SignalModel model_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

}  // namespace inquirylab::sim

#endif  // INQUIRYLAB_SIM_SIGNAL_MODEL_H_
