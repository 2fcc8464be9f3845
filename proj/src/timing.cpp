#include "chainfair/timing.hpp"

#include <cmath>
#include <string>

#include "chainfair/errors.hpp"

namespace chainfair {

void MacTiming::validate() const {
  for (double v : {difs, eifs, sifs, slot, rts, cts, ack, plcp}) {
    if (!(v > 0.0)) throw DomainError("MacTiming: delays must be strictly positive");
  }
  if (!(cw_min >= 0.0)) throw DomainError("MacTiming: cw_min must be >= 0");
  if (!(eifs > difs)) throw DomainError("MacTiming: eifs must exceed difs");
}

void FrameSpec::validate() const {
  if (!(bytes >= kMinBytes && bytes <= kMaxBytes)) {
    throw DomainError("FrameSpec: frame size " + std::to_string(bytes) +
                      " bytes outside [14, 2346]");
  }
  if (rate_mbps != 1.0 && rate_mbps != 2.0 && rate_mbps != 5.5 && rate_mbps != 11.0) {
    throw DomainError("FrameSpec: rate must be 1, 2, 5.5 or 11 Mbit/s");
  }
}

double send_time_us(double bytes, double rate_mbps, const MacTiming& timing) {
  return timing.rts + timing.plcp + 8.0 * bytes / rate_mbps;
}

double t_send(const FrameSpec& frame, const MacTiming& timing) {
  frame.validate();
  timing.validate();
  return send_time_us(frame.bytes, frame.rate_mbps, timing);
}

double t_wait(const MacTiming& timing) {
  timing.validate();
  double w = timing.slot * timing.cw_min * 0.5 + 3.0 * timing.sifs + timing.cts + timing.ack;
  switch (timing.wait_accounting) {
    case WaitAccounting::exclude_ifs:
      break;
    case WaitAccounting::include_difs:
      w += timing.difs;
      break;
    case WaitAccounting::include_eifs:
      w += timing.eifs;
      break;
  }
  return w;
}

double alpha_of_packet(const FrameSpec& frame, const MacTiming& timing) {
  const double ts = t_send(frame, timing);
  return ts / (ts + t_wait(timing));
}

long packet_for_alpha(double alpha, double rate_mbps, const MacTiming& timing) {
  const double lo = alpha_of_packet({FrameSpec::kMinBytes, rate_mbps}, timing);
  const double hi = alpha_of_packet({FrameSpec::kMaxBytes, rate_mbps}, timing);
  if (!(alpha >= lo && alpha <= hi)) {
    throw RangeError("packet_for_alpha: alpha " + std::to_string(alpha) +
                         " not achievable at " + std::to_string(rate_mbps) +
                         " Mbit/s; achievable interval [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]",
                     lo, hi);
  }
  // T_s = alpha T_w / (1 - alpha) and T_s = rts + plcp + 8 s / d.
  const double ts = alpha * t_wait(timing) / (1.0 - alpha);
  const double bytes = rate_mbps * (ts - timing.rts - timing.plcp) / 8.0;
  return static_cast<long>(std::floor(bytes + 0.5));
}

}  // namespace chainfair
