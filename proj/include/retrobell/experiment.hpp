#pragma once

// One Bell run: settings are known at preparation, ontic states are sampled
// accordingly, each wing evolves locally under the coupling, and the plate
// position decides the outcome.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "retrobell/ensemble.hpp"
#include "retrobell/packet.hpp"
#include "retrobell/records.hpp"

namespace retrobell {

/// Raised when the branches would not separate enough for an unambiguous readout.
class SeparationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WingGeometry {
  /// x coordinate of the decision plane, midway between the two branch centers.
  double decision_x = 0.0;
};

/// +1 when final_position.x >= decision_x, otherwise -1.
Sign plate_readout(const Vec3& final_position, const WingGeometry& geometry);

struct WingEvolution {
  GaussianPacket packet;  ///< packet at readout
  Vec3 position{};        ///< particle position at readout
  WingGeometry geometry;
};

/// Evolves one particle from preparation to readout: a free interval of
/// length free_time followed by the coupling for duration. Depends only on
/// data local to the wing.
WingEvolution evolve_wing(Sign label, const GaussianPacket& packet, const Vec3& start,
                          double coupling, double duration, double free_time, double step);

WingRecord read_wing(Wing wing, Sign label, const GaussianPacket& packet, const Vec3& start,
                     double coupling, double duration, double free_time, double step);

struct RunDiagnostics {
  std::int64_t readout_errors = 0;
  double branch_overlap_first = 0.0;   ///< overlap of the +/- branches of packet 1 at readout
  double branch_overlap_second = 0.0;
  BornWeights branch_weights_start{};  ///< epistemic branch weights at coupling start
  BornWeights branch_weights_end{};    ///< and at readout
  BornWeights label_weights{};         ///< weights the labels were drawn from
};

struct RunResult {
  EnsembleSpec spec;
  std::vector<PairRecord> records;
  RunDiagnostics diagnostics;
};

/// Throws SeparationError unless g*T >= separation_sigmas * width along x for
/// both packets, the readout-time branch overlap is at most max_overlap, and
/// any position override stays inside the separation margin.
void check_separation(const EnsembleSpec& spec);

RunResult run_experiment(const EnsembleSpec& spec);

}  // namespace retrobell
