// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0

#include "inquirylab/protocol/host_session.h"

#include <array>
#include <string>

#include "inquirylab/protocol/errors.h"

namespace inquirylab::proto {

using Clock = std::chrono::steady_clock;

HostSession::HostSession(std::unique_ptr<ByteStream> stream) : stream_(std::move(stream)) {}

void HostSession::Send(FrameType type, std::vector<std::uint8_t> payload) {
  stream_->Write(EncodeFrame(Frame{type, std::move(payload)}));
}

DecodeResult HostSession::Receive(Clock::time_point deadline) {
  std::array<std::uint8_t, 256> buf{};
  for (;;) {
    DecodeResult r = decoder_.Next();
    if (r.status != DecodeStatus::kNeedMore) {
      if (r.status == DecodeStatus::kFrame) ++stats_.frames;
      if (r.status == DecodeStatus::kChecksumError) ++stats_.checksum_errors;
      if (r.status == DecodeStatus::kProtocolError) ++stats_.protocol_errors;
      return r;
    }
    const auto now = Clock::now();
    if (now >= deadline) return r;
    const auto left = std::chrono::ceil<std::chrono::milliseconds>(deadline - now);
    const std::size_t n = stream_->Read(buf, left);
    decoder_.Feed(std::span(buf).first(n));
  }
}

SensorDescriptor HostSession::Handshake(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  Send(FrameType::kIdentReq);
  for (;;) {
    DecodeResult r = Receive(deadline);
    if (r.status == DecodeStatus::kNeedMore) {
      throw ProtocolError(ErrorCode::kDeviceAbsent,
                          "no IDENT_RESP within " + std::to_string(timeout.count()) + " ms");
    }
    if (r.status != DecodeStatus::kFrame) continue;
    if (r.frame->type == FrameType::kNack) {
      const Nack nack = DecodeNack(r.frame->payload);
      throw ProtocolError(ErrorCode::kNack, "device refused IDENT_REQ", nack.offending_byte);
    }
    if (r.frame->type != FrameType::kIdentResp) continue;  // stale DATA
    descriptor_ = DecodeDescriptor(r.frame->payload);
    return *descriptor_;
  }
}

void HostSession::Start(std::chrono::milliseconds period) {
  Send(FrameType::kStart, EncodeStart(period));
}

void HostSession::Stop() { Send(FrameType::kStop); }

StreamEvent HostSession::Next(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    DecodeResult r = Receive(deadline);
    switch (r.status) {
      case DecodeStatus::kNeedMore:
        return StreamEvent{StreamEvent::Kind::kTimeout, {}};
      case DecodeStatus::kChecksumError:
        return StreamEvent{StreamEvent::Kind::kChecksumError, {}};
      case DecodeStatus::kProtocolError:
        return StreamEvent{StreamEvent::Kind::kProtocolError, {}};
      case DecodeStatus::kFrame:
        break;
    }
    if (r.frame->type == FrameType::kNack) {
      ++stats_.protocol_errors;
      return StreamEvent{StreamEvent::Kind::kProtocolError, {}};
    }
    if (r.frame->type != FrameType::kData) continue;
    try {
      DataMessage msg = DecodeData(r.frame->payload);
      if (descriptor_) ValidateMeasurement(msg.measurement, *descriptor_);
      ++stats_.measurements;
      return StreamEvent{StreamEvent::Kind::kMeasurement, std::move(msg)};
    } catch (const ProtocolError&) {
      ++stats_.rejected_measurements;
      ++stats_.protocol_errors;
      return StreamEvent{StreamEvent::Kind::kProtocolError, {}};
    }
  }
}

}  // namespace inquirylab::proto
