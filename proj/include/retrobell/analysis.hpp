#pragma once

// Multi-run analyses built on run_experiment: CHSH, setting sweeps and the
// no-signalling scan.

#include <array>
#include <string>
#include <vector>

#include "retrobell/ensemble.hpp"
#include "retrobell/experiment.hpp"

namespace retrobell {

struct SettingQuad {
  UnitVector3 a;
  UnitVector3 a2;
  UnitVector3 b;
  UnitVector3 b2;

  friend bool operator==(const SettingQuad&, const SettingQuad&) = default;
};

/// a = 0, a' = 90, b = 45, b' = 135 degrees in the x-z plane.
SettingQuad standard_chsh_settings();

/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b'), in the order (a,b), (a,b'), (a',b), (a',b').
double chsh_combination(const std::array<double, 4>& correlators);

double chsh_exact(const TwoQubitState& state, const SettingQuad& q);

struct ChshEstimate {
  double value = 0.0;
  double std_error = 0.0;  ///< pooled over the four independent runs
  std::array<MeanEstimate, 4> correlators{};
};

/// Four independent runs of the template, one per setting pair, each with its
/// own seed derived from the template seed.
ChshEstimate chsh(const EnsembleSpec& spec, const SettingQuad& q);

/// Grid spanning both branch spots at wing 1 (used for every spot histogram).
HistogramGrid spot_grid(const EnsembleSpec& spec, Wing wing, double bin_width);

struct SignallingReport {
  enum class Observable { outcome_rate, spot_shape };

  Observable observable = Observable::outcome_rate;
  Wing wing = Wing::first;
  double divergence = 0.0;  ///< total-variation distance, baseline vs probe
  SettingPair baseline;
  SettingPair probe;
  double standard_error = 0.0;  ///< spread of the divergence estimate
  double null_mean = 0.0;       ///< expected divergence with no setting dependence
  double null_sd = 0.0;

  /// Excess over the no-signalling level in units of its spread.
  double significance() const;
};

std::string to_string(SignallingReport::Observable o);

struct ScanOptions {
  double bin_width = 0.25;
  int bootstrap_resamples = 1000;
  Wing wing = Wing::first;
};

/// Compares each probe remote setting with the template's own setting pair.
/// Outcome-rate divergence is |P_base(+) - P_probe(+)| with binomial errors.
/// Spot-shape divergence is the larger of the two TV distances between the
/// outcome-conditioned spot histograms, with multinomial bootstrap errors.
/// Requires at least one probe.
std::vector<SignallingReport> signalling_scan(const EnsembleSpec& spec,
                                              const std::vector<UnitVector3>& probes,
                                              const ScanOptions& options = {});

struct SweepPoint {
  double cosine = 0.0;  ///< a . b
  double exact = 0.0;
  MeanEstimate estimate;
};

/// Correlator at `points` equally spaced values of a.b in [-1, 1]; b is
/// rotated about y away from a. points >= 2.
std::vector<SweepPoint> bell_curve(const EnsembleSpec& spec, int points);

/// Direction making angle acos(cosine) with a, rotated in the plane of a and y x a.
UnitVector3 rotate_towards(const UnitVector3& a, double cosine);

}  // namespace retrobell
