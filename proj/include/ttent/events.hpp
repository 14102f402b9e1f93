#pragma once

// Dilepton pseudo-events: production kinematics plus the lepton directions
// q+ (antilepton, top rest frame) and q- (lepton, antitop rest frame) in
// beam-basis coordinates. Their joint density is
//
//   (1 + B+.q+ - B-.q- - q+.C.q-) / (4 pi)^2.
//
// Sampling is deterministic in the seed: events are produced in fixed-size
// chunks, each with its own derived generator, so the output does not depend
// on the number of worker threads.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ttent/bloch.hpp"
#include "ttent/lumi.hpp"

namespace ttent {

struct DileptonEvent {
  double m_ttbar = 0.0;
  double cos_theta = 0.0;
  Vec3 q_plus = Vec3::UnitZ();
  Vec3 q_minus = Vec3::UnitZ();
};

inline constexpr std::size_t kEventChunk = 16384;

/// Lepton directions drawn from a fixed beam-basis state; every event carries
/// the given (m_ttbar, cos_theta). Throws InputNotPhysical.
std::vector<DileptonEvent> sample_fixed_state(const TwoQubitState& state, std::size_t n,
                                              std::uint64_t seed, double m_ttbar = 0.0,
                                              double cos_theta = 0.0, unsigned threads = 0);

/// (M, cos_theta) drawn from the LO differential cross-section in
/// [max(m_lo, 2 m_t), m_max] with a uniform azimuth; lepton directions from the
/// pointwise spin state rotated to the beam basis.
/// Throws EmptyWindow, OutOfRange, EnvelopeFailure.
std::vector<DileptonEvent> sample_events(std::size_t n, double m_max, const LuminosityTable& table,
                                         const PhysicsConfig& cfg, std::uint64_t seed,
                                         ChannelMix mix = ChannelMix::mixed, double m_lo = 0.0,
                                         unsigned threads = 0);

inline constexpr const char* kEventColumns = "M,cos_theta,qpx,qpy,qpz,qmx,qmy,qmz";

void write_events_csv(std::ostream& out, const std::vector<DileptonEvent>& events);
/// Throws ParseError.
std::vector<DileptonEvent> read_events_csv(std::istream& in);

/// Little-endian: 8-byte magic "TTEV0001", uint64 count, then per event
/// M, cos_theta, q+ (3), q- (3) as float64.
void write_events_binary(std::ostream& out, const std::vector<DileptonEvent>& events);
/// Throws ParseError.
std::vector<DileptonEvent> read_events_binary(std::istream& in);

/// Dispatches on the extension: ".csv" is text, anything else binary.
void save_events(const std::string& path, const std::vector<DileptonEvent>& events);
std::vector<DileptonEvent> load_events(const std::string& path);

}  // namespace ttent
