// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/sim/signal_model.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace inquirylab::sim {
namespace {

constexpr double kDriftPeriodMs = 60'000.0;
constexpr double kStepTimeConstantMs = 5'000.0;

}  // namespace

std::string_view SignalModeName(SignalMode mode) {
  switch (mode) {
    case SignalMode::kConstant: return "constant";
    case SignalMode::kSinusoidDrift: return "sinusoid-drift";
    case SignalMode::kStepResponse: return "step-response";
  }
  return "?";
}

std::optional<SignalMode> SignalModeFromName(std::string_view name) {
  for (SignalMode m : {SignalMode::kConstant, SignalMode::kSinusoidDrift, SignalMode::kStepResponse}) {
    if (SignalModeName(m) == name) return m;
  }
  return std::nullopt;
}

SignalGenerator::SignalGenerator(SignalModel model, std::uint64_t seed)
    : model_(std::move(model)), seed_(seed), rng_(seed) {
  if (model_.baseline.size() != model_.amplitude.size()) {
    throw std::invalid_argument("signal model needs one amplitude per baseline");
  }
}

void SignalGenerator::Reset() { rng_.seed(seed_); }

double SignalGenerator::Jitter() {
  // Top 53 bits -> [0, 1) -> [-1, 1); avoids implementation-defined distributions.
  const double unit = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return 2.0 * unit - 1.0;
}

std::vector<proto::Centi> SignalGenerator::Sample(std::uint32_t timestamp_ms) {
  std::vector<proto::Centi> out;
  out.reserve(model_.baseline.size());
  const double t = static_cast<double>(timestamp_ms);
  for (std::size_t ch = 0; ch < model_.baseline.size(); ++ch) {
    const double base = model_.baseline[ch].raw;
    const double amp = model_.amplitude[ch].raw;
    double shape = 0.0;
    switch (model_.mode) {
      case SignalMode::kConstant:
        break;
      case SignalMode::kSinusoidDrift:
        shape = 0.7 * std::sin(2.0 * std::numbers::pi * t / kDriftPeriodMs +
                               static_cast<double>(ch)) +
                0.3 * Jitter();
        break;
      case SignalMode::kStepResponse:
        shape = 0.9 * (2.0 * (1.0 - std::exp(-t / kStepTimeConstantMs)) - 1.0) + 0.1 * Jitter();
        break;
    }
    const double v = std::clamp(base + amp * shape, base - amp, base + amp);
    out.push_back(proto::Centi::FromRaw(static_cast<std::int32_t>(std::llround(v))));
  }
  return out;
}

}  // namespace inquirylab::sim
