#pragma once

// Hidden-variable ensembles: sampling of ontic states (spin labels of the
// future settings, packets, positions) in equilibrium and out of it, and the
// estimators that act on the resulting records.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "retrobell/dynamics.hpp"
#include "retrobell/packet.hpp"
#include "retrobell/random.hpp"
#include "retrobell/records.hpp"
#include "retrobell/spin.hpp"
#include "retrobell/stats.hpp"

namespace retrobell {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SettingPair {
  UnitVector3 a;
  UnitVector3 b;

  friend bool operator==(const SettingPair&, const SettingPair&) = default;
};

// Position samplers, all relative to the packet center.

struct ShiftedGaussian {
  Vec3 offset{};
  Vec3 width{1.0, 1.0, 1.0};
  friend bool operator==(const ShiftedGaussian&, const ShiftedGaussian&) = default;
};

struct UniformBox {
  Vec3 offset{};
  Vec3 half_width{1.0, 1.0, 1.0};
  friend bool operator==(const UniformBox&, const UniformBox&) = default;
};

struct GaussianMixture {
  ShiftedGaussian first;
  ShiftedGaussian second;
  double first_weight = 0.5;
  friend bool operator==(const GaussianMixture&, const GaussianMixture&) = default;
};

using PositionSampler = std::variant<ShiftedGaussian, UniformBox, GaussianMixture>;

void validate(const PositionSampler& s);
Vec3 sample_offset(const PositionSampler& s, Rng& rng);
/// Largest |x offset| the sampler produces, counting Gaussians out to
/// `sigmas` standard deviations.
double x_extent(const PositionSampler& s, double sigmas);

struct BranchPositions {
  PositionSampler first;
  PositionSampler second;
  friend bool operator==(const BranchPositions&, const BranchPositions&) = default;
};

/// Initial position densities per joint label, indexed by LabelPair::index().
using PositionOverride = std::array<BranchPositions, 4>;

/// Preset: particle 1 starts offset by i2 * shift along x, particle 2 by
/// i1 * shift, each with the given width. The local marginal then depends on
/// the remote setting while the label distribution stays in equilibrium.
PositionOverride branch_shifted_positions(double shift, double width);

struct OnticWeights {
  enum class Mode { equilibrium, redistributed, fixed };
  Mode mode = Mode::equilibrium;
  BornWeights fixed{};  ///< used when mode == fixed

  friend bool operator==(const OnticWeights&, const OnticWeights&) = default;
};

struct EnsembleSpec {
  TwoQubitState state = singlet();
  SettingPair settings{};
  GaussianPacket packet1{};
  GaussianPacket packet2{};
  OnticWeights weights{};
  std::optional<PositionOverride> positions;
  double coupling = 1.0;      ///< g
  double duration = 10.0;     ///< T, length of the coupling window
  double free_time = 0.0;     ///< force-free interval between preparation and coupling
  double step = 1e-2;         ///< RK4 step for non-uniform fields
  std::int64_t pair_count = 100000;
  std::uint64_t seed = 0;
  double separation_sigmas = 6.0;
  double max_overlap = 1e-6;

  /// Throws ConfigError on any violated precondition.
  void validate() const;

  friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

struct OnticState {
  LabelPair labels;
  PacketPairSnapshot packets;
  Vec3 r1{};
  Vec3 r2{};
};

/// Weights that fix the label distribution at the configured settings.
BornWeights ontic_weights(const EnsembleSpec& spec);

/// Moves two thirds of the (-,-) weight onto (+,+) and (+,-) in equal parts:
/// w'++ = w++ + w--/3, w'+- = w+- + w--/3, w'-+ = w-+, w'-- = w--/3.
BornWeights redistributed_weights(const BornWeights& equilibrium);

/// Draws a label from the weights with one uniform variate.
LabelPair sample_label(const BornWeights& w, Rng& rng);

/// Samples pairs [begin, end) of the ensemble with the generator of chunk
/// `chunk`. Used by both sample_ontic_states and the experiment runner, so
/// both see identical states for a given seed.
void sample_chunk(const EnsembleSpec& spec, const BornWeights& weights, std::size_t chunk,
                  std::size_t begin, std::size_t end, std::vector<OnticState>& out);

std::vector<OnticState> sample_ontic_states(const EnsembleSpec& spec);

/// Empirical label frequencies.
BornWeights label_frequencies(std::span<const OnticState> states);

struct OutcomePair {
  Sign first = Sign::plus;
  Sign second = Sign::plus;
};

MeanEstimate estimate_correlator(std::span<const OutcomePair> outcomes);
MeanEstimate estimate_correlator(std::span<const PairRecord> records);

/// P(outcome = +) at one wing, with binomial standard error.
MeanEstimate outcome_rate(std::span<const PairRecord> records, Wing wing);

/// Total-variation distance between the label distributions the state
/// induces under two setting pairs. Nonzero means the hidden-variable
/// distribution depends on the settings.
double measurement_independence_divergence(const TwoQubitState& state, const SettingPair& s1,
                                           const SettingPair& s2);

/// Histogram of final positions at one wing, optionally restricted to one
/// local outcome. Throws std::invalid_argument if the selection is empty.
DensityHistogram marginal_position_density(std::span<const PairRecord> records, Wing wing,
                                           std::optional<Sign> conditioning,
                                           const HistogramGrid& grid);

/// Final x coordinates at one wing, optionally restricted to one outcome.
std::vector<double> final_coordinates(std::span<const PairRecord> records, Wing wing,
                                      std::optional<Sign> conditioning);

}  // namespace retrobell
