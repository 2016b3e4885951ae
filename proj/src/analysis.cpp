#include "retrobell/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace retrobell {

namespace {

constexpr std::uint64_t kChshSalt = 0x43485348;
constexpr std::uint64_t kScanSalt = 0x5343414e;
constexpr std::uint64_t kSweepSalt = 0x53574550;

SignallingReport shape_report(const RunResult& base, const RunResult& probe, Wing wing,
                              const HistogramGrid& grid, int resamples, Rng& rng) {
  SignallingReport best;
  best.observable = SignallingReport::Observable::spot_shape;
  best.wing = wing;
  best.divergence = -1.0;
  for (Sign s : {Sign::plus, Sign::minus}) {
    const auto h0 = marginal_position_density(base.records, wing, s, grid);
    const auto h1 = marginal_position_density(probe.records, wing, s, grid);
    const double tv = total_variation(h0, h1);
    const auto boot = bootstrap_tv(h0, h1, resamples, rng);
    SignallingReport r = best;
    r.divergence = tv;
    r.standard_error = boot.standard_error;
    r.null_mean = boot.null_mean;
    r.null_sd = boot.null_sd;
    if (best.divergence < 0.0 || r.significance() > best.significance()) best = r;
  }
  return best;
}

SignallingReport rate_report(const RunResult& base, const RunResult& probe, Wing wing) {
  const auto p0 = outcome_rate(base.records, wing);
  const auto p1 = outcome_rate(probe.records, wing);
  const double n0 = static_cast<double>(base.records.size());
  const double n1 = static_cast<double>(probe.records.size());
  const double pooled = (p0.value * n0 + p1.value * n1) / (n0 + n1);

  SignallingReport r;
  r.observable = SignallingReport::Observable::outcome_rate;
  r.wing = wing;
  r.divergence = std::abs(p0.value - p1.value);
  r.standard_error = std::hypot(p0.std_error, p1.std_error);
  r.null_mean = 0.0;
  r.null_sd = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n0 + 1.0 / n1));
  return r;
}

}  // namespace

SettingQuad standard_chsh_settings() {
  const double deg = std::numbers::pi / 180.0;
  return {UnitVector3::planar(0.0), UnitVector3::planar(90.0 * deg),
          UnitVector3::planar(45.0 * deg), UnitVector3::planar(135.0 * deg)};
}

double chsh_combination(const std::array<double, 4>& e) { return e[0] - e[1] + e[2] + e[3]; }

double chsh_exact(const TwoQubitState& state, const SettingQuad& q) {
  return chsh_combination({exact_correlator(state, q.a, q.b), exact_correlator(state, q.a, q.b2),
                           exact_correlator(state, q.a2, q.b), exact_correlator(state, q.a2, q.b2)});
}

ChshEstimate chsh(const EnsembleSpec& spec, const SettingQuad& q) {
  const std::array<SettingPair, 4> pairs{SettingPair{q.a, q.b}, SettingPair{q.a, q.b2},
                                         SettingPair{q.a2, q.b}, SettingPair{q.a2, q.b2}};
  ChshEstimate out;
  std::array<double, 4> values{};
  double var = 0.0;
  for (int k = 0; k < 4; ++k) {
    EnsembleSpec run = spec;
    run.settings = pairs[k];
    run.seed = derive_seed(spec.seed, kChshSalt + k);
    const auto result = run_experiment(run);
    out.correlators[k] = estimate_correlator(result.records);
    values[k] = out.correlators[k].value;
    var += out.correlators[k].std_error * out.correlators[k].std_error;
  }
  out.value = chsh_combination(values);
  out.std_error = std::sqrt(var);
  return out;
}

HistogramGrid spot_grid(const EnsembleSpec& spec, Wing wing, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
  const GaussianPacket& p = wing == Wing::first ? spec.packet1 : spec.packet2;
  const GaussianPacket start = spec.free_time > 0.0 ? evolve_free(p, spec.free_time) : p;
  double reach = spec.separation_sigmas * start.width().x;
  if (spec.positions) {
    const double stretch = start.width().x / p.waist.x;
    for (const auto& br : *spec.positions) {
      const auto& s = wing == Wing::first ? br.first : br.second;
      reach = std::max(reach, stretch * x_extent(s, spec.separation_sigmas));
    }
  }
  const double half = spec.coupling * spec.duration + reach;
  HistogramGrid g;
  g.axis = 0;
  g.bins = static_cast<int>(std::ceil(2.0 * half / bin_width));
  g.bin_width = bin_width;
  g.origin = start.center.x - 0.5 * g.bins * bin_width;
  return g;
}

double SignallingReport::significance() const {
  if (null_sd <= 0.0) return divergence > null_mean ? std::numeric_limits<double>::infinity() : 0.0;
  return (divergence - null_mean) / null_sd;
}

std::string to_string(SignallingReport::Observable o) {
  return o == SignallingReport::Observable::outcome_rate ? "outcome-rate" : "spot-shape";
}

std::vector<SignallingReport> signalling_scan(const EnsembleSpec& spec,
                                              const std::vector<UnitVector3>& probes,
                                              const ScanOptions& options) {
  if (probes.empty()) throw std::invalid_argument("signalling scan needs at least one probe setting");
  const HistogramGrid grid = spot_grid(spec, options.wing, options.bin_width);

  EnsembleSpec base_spec = spec;
  base_spec.seed = derive_seed(spec.seed, kScanSalt);
  const auto base = run_experiment(base_spec);
  Rng boot_rng = make_stream(derive_seed(spec.seed, kScanSalt + 1), 0);

  std::vector<SignallingReport> out;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    EnsembleSpec probe_spec = spec;
    probe_spec.settings.b = probes[k];
    probe_spec.seed = derive_seed(spec.seed, kScanSalt + 2 + k);
    const auto probe = run_experiment(probe_spec);
    for (auto r : {rate_report(base, probe, options.wing),
                   shape_report(base, probe, options.wing, grid, options.bootstrap_resamples,
                                boot_rng)}) {
      r.baseline = spec.settings;
      r.probe = probe_spec.settings;
      out.push_back(r);
    }
  }
  return out;
}

UnitVector3 rotate_towards(const UnitVector3& a, double cosine) {
  const double c = std::clamp(cosine, -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  // Any unit vector orthogonal to a; prefer y x a, fall back to x x a.
  Vec3 perp = cross(Vec3{0.0, 1.0, 0.0}, a.vec());
  if (norm(perp) < 1e-8) perp = cross(kUnitX, a.vec());
  perp *= 1.0 / norm(perp);
  return UnitVector3(a.vec() * c + perp * s);
}

std::vector<SweepPoint> bell_curve(const EnsembleSpec& spec, int points) {
  if (points < 2) throw std::invalid_argument("sweep needs at least two points");
  std::vector<SweepPoint> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double cosine = -1.0 + 2.0 * k / (points - 1);
    EnsembleSpec run = spec;
    run.settings.b = rotate_towards(spec.settings.a, cosine);
    run.seed = derive_seed(spec.seed, kSweepSalt + k);
    const auto result = run_experiment(run);
    out.push_back({dot(run.settings.a, run.settings.b),
                   exact_correlator(run.state, run.settings.a, run.settings.b),
                   estimate_correlator(result.records)});
  }
  return out;
}

}  // namespace retrobell
