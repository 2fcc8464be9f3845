#pragma once

namespace chainfair {

/// Which inter-frame delay, if any, is counted as time a pair wastes while
/// its neighbours are idle. The default excludes it: neighbours are usually
/// transmitting during the DIFS/EIFS wait.
enum class WaitAccounting { exclude_ifs, include_difs, include_eifs };

/// 802.11b DSSS RTS/CTS delays in microseconds; cw_min in slots.
struct MacTiming {
  double difs = 50.0;
  double eifs = 364.0;
  double sifs = 10.0;
  double slot = 20.0;
  double cw_min = 31.0;
  double rts = 304.0;
  double cts = 352.0;
  double ack = 304.0;
  double plcp = 192.0;  ///< PHY preamble and header
  WaitAccounting wait_accounting = WaitAccounting::exclude_ifs;

  /// Throws DomainError unless every delay is positive (cw_min may be 0) and
  /// eifs > difs.
  void validate() const;
};

/// A MAC data frame of s bytes sent at d Mbit/s.
struct FrameSpec {
  double bytes = 1500.0;
  double rate_mbps = 2.0;

  static constexpr double kMinBytes = 14.0;
  static constexpr double kMaxBytes = 2346.0;

  /// Bytes in [14, 2346], rate in {1, 2, 5.5, 11}.
  void validate() const;
};

/// rts + plcp + 8 s / d, without validating s or d.
double send_time_us(double bytes, double rate_mbps, const MacTiming& timing = {});

/// T_s for a validated frame. 496 + 8s/d with default timing.
double t_send(const FrameSpec& frame, const MacTiming& timing = {});

/// T_w: mean backoff slot * cw_min / 2, three SIFS, CTS and ACK, plus the
/// optional DIFS or EIFS term. 996 with defaults.
double t_wait(const MacTiming& timing = {});

/// alpha = T_s / (T_s + T_w).
double alpha_of_packet(const FrameSpec& frame, const MacTiming& timing = {});

/// Frame size in whole bytes whose alpha is closest to the request, rounded
/// to nearest with ties up. Throws RangeError if alpha is not reachable by a
/// frame in [14, 2346] bytes.
long packet_for_alpha(double alpha, double rate_mbps, const MacTiming& timing = {});

}  // namespace chainfair
