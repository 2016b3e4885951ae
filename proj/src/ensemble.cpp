#include "retrobell/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "retrobell/parallel.hpp"

namespace retrobell {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool positive(const Vec3& v) { return v.x > 0.0 && v.y > 0.0 && v.z > 0.0 && is_finite(v); }

Vec3 gaussian_offset(const ShiftedGaussian& g, Rng& rng) {
  std::normal_distribution<double> normal;
  const double x = normal(rng);
  const double y = normal(rng);
  const double z = normal(rng);
  return g.offset + Vec3{g.width.x * x, g.width.y * y, g.width.z * z};
}

}  // namespace

void validate(const PositionSampler& s) {
  std::visit(overloaded{
                 [](const ShiftedGaussian& g) {
                   require(is_finite(g.offset) && positive(g.width),
                           "gaussian sampler needs finite offset and positive width");
                 },
                 [](const UniformBox& b) {
                   require(is_finite(b.offset) && positive(b.half_width),
                           "box sampler needs finite offset and positive half_width");
                 },
                 [](const GaussianMixture& m) {
                   validate(PositionSampler{m.first});
                   validate(PositionSampler{m.second});
                   require(m.first_weight >= 0.0 && m.first_weight <= 1.0,
                           "mixture weight must lie in [0, 1]");
                 },
             },
             s);
}

Vec3 sample_offset(const PositionSampler& s, Rng& rng) {
  return std::visit(
      overloaded{
          [&](const ShiftedGaussian& g) { return gaussian_offset(g, rng); },
          [&](const UniformBox& b) {
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            const double x = u(rng);
            const double y = u(rng);
            const double z = u(rng);
            return b.offset + Vec3{b.half_width.x * x, b.half_width.y * y, b.half_width.z * z};
          },
          [&](const GaussianMixture& m) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            return u(rng) < m.first_weight ? gaussian_offset(m.first, rng)
                                           : gaussian_offset(m.second, rng);
          },
      },
      s);
}

double x_extent(const PositionSampler& s, double sigmas) {
  return std::visit(
      overloaded{
          [&](const ShiftedGaussian& g) { return std::abs(g.offset.x) + sigmas * g.width.x; },
          [&](const UniformBox& b) { return std::abs(b.offset.x) + b.half_width.x; },
          [&](const GaussianMixture& m) {
            return std::max(std::abs(m.first.offset.x) + sigmas * m.first.width.x,
                            std::abs(m.second.offset.x) + sigmas * m.second.width.x);
          },
      },
      s);
}

PositionOverride branch_shifted_positions(double shift, double width) {
  PositionOverride out;
  for (const auto& label : kAllLabels) {
    const Vec3 w{width, width, width};
    out[label.index()] = {ShiftedGaussian{kUnitX * (value(label.second) * shift), w},
                          ShiftedGaussian{kUnitX * (value(label.first) * shift), w}};
  }
  return out;
}

void EnsembleSpec::validate() const {
  try {
    packet1.validate();
    packet2.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (weights.mode == OnticWeights::Mode::fixed) {
    try {
      weights.fixed.validate(1e-10);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("override weights: ") + e.what());
    }
  }
  if (positions) {
    for (const auto& br : *positions) {
      retrobell::validate(br.first);
      retrobell::validate(br.second);
    }
  }
  require(std::isfinite(coupling) && coupling > 0.0, "coupling g must be positive");
  require(std::isfinite(duration) && duration > 0.0, "duration T must be positive");
  require(std::isfinite(free_time) && free_time >= 0.0, "free_time must be non-negative");
  require(std::isfinite(step) && step > 0.0, "integration step must be positive");
  require(pair_count >= 1, "pair count N must be at least 1");
  require(std::isfinite(separation_sigmas) && separation_sigmas > 0.0,
          "separation_sigmas must be positive");
  require(max_overlap > 0.0 && max_overlap <= 1.0, "max_overlap must lie in (0, 1]");
}

BornWeights redistributed_weights(const BornWeights& eq) {
  const double moved = eq.w[3] / 3.0;
  BornWeights out;
  out.w = {eq.w[0] + moved, eq.w[1] + moved, eq.w[2], moved};
  return out;
}

BornWeights ontic_weights(const EnsembleSpec& spec) {
  switch (spec.weights.mode) {
    case OnticWeights::Mode::equilibrium:
      return born_weights(spec.state, spec.settings.a, spec.settings.b);
    case OnticWeights::Mode::redistributed:
      return redistributed_weights(born_weights(spec.state, spec.settings.a, spec.settings.b));
    case OnticWeights::Mode::fixed:
      return spec.weights.fixed;
  }
  throw ConfigError("unknown weight mode");
}

LabelPair sample_label(const BornWeights& w, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = u(rng) * w.sum();
  double acc = 0.0;
  int last = 0;
  for (int k = 0; k < 4; ++k) {
    if (w.w[k] <= 0.0) continue;
    last = k;
    acc += w.w[k];
    if (x < acc) return LabelPair::from_index(k);
  }
  return LabelPair::from_index(last);
}

void sample_chunk(const EnsembleSpec& spec, const BornWeights& weights, std::size_t chunk,
                  std::size_t begin, std::size_t end, std::vector<OnticState>& out) {
  Rng rng = make_stream(spec.seed, chunk);
  const PacketPairSnapshot packets{spec.packet1, spec.packet2, 0.0};
  for (std::size_t k = begin; k < end; ++k) {
    OnticState s;
    s.labels = sample_label(weights, rng);
    s.packets = packets;
    if (spec.positions) {
      const auto& br = (*spec.positions)[s.labels.index()];
      s.r1 = spec.packet1.center + sample_offset(br.first, rng);
      s.r2 = spec.packet2.center + sample_offset(br.second, rng);
    } else {
      s.r1 = sample_position(spec.packet1, rng);
      s.r2 = sample_position(spec.packet2, rng);
    }
    out.push_back(s);
  }
}

std::vector<OnticState> sample_ontic_states(const EnsembleSpec& spec) {
  spec.validate();
  const BornWeights w = ontic_weights(spec);
  const auto n = static_cast<std::size_t>(spec.pair_count);
  std::vector<OnticState> out(n);
  for_each_chunk(n, kPairChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::vector<OnticState> local;
    local.reserve(end - begin);
    sample_chunk(spec, w, chunk, begin, end, local);
    std::copy(local.begin(), local.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
  });
  return out;
}

BornWeights label_frequencies(std::span<const OnticState> states) {
  BornWeights f;
  if (states.empty()) return f;
  for (const auto& s : states) f.w[s.labels.index()] += 1.0;
  for (double& x : f.w) x /= static_cast<double>(states.size());
  return f;
}

MeanEstimate estimate_correlator(std::span<const OutcomePair> outcomes) {
  if (outcomes.size() < 2) throw std::invalid_argument("correlator needs at least two records");
  // Products are +-1, so the variance follows from the mean alone.
  double sum = 0.0;
  for (const auto& o : outcomes) sum += value(o.first) * value(o.second);
  const double n = static_cast<double>(outcomes.size());
  const double mean = sum / n;
  const double var = std::max(0.0, (1.0 - mean * mean) * n / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

MeanEstimate estimate_correlator(std::span<const PairRecord> records) {
  std::vector<OutcomePair> o;
  o.reserve(records.size());
  for (const auto& r : records) o.push_back({r.first.inferred_outcome, r.second.inferred_outcome});
  return estimate_correlator(o);
}

MeanEstimate outcome_rate(std::span<const PairRecord> records, Wing wing) {
  if (records.size() < 2) throw std::invalid_argument("outcome rate needs at least two records");
  double plus = 0.0;
  for (const auto& r : records) plus += r.at(wing).inferred_outcome == Sign::plus ? 1.0 : 0.0;
  const double n = static_cast<double>(records.size());
  const double p = plus / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

double measurement_independence_divergence(const TwoQubitState& state, const SettingPair& s1,
                                           const SettingPair& s2) {
  const auto w1 = born_weights(state, s1.a, s1.b);
  const auto w2 = born_weights(state, s2.a, s2.b);
  return total_variation(w1.w, w2.w);
}

DensityHistogram marginal_position_density(std::span<const PairRecord> records, Wing wing,
                                           std::optional<Sign> conditioning,
                                           const HistogramGrid& grid) {
  DensityHistogram h(grid);
  for (const auto& r : records) {
    const auto& w = r.at(wing);
    if (conditioning && w.inferred_outcome != *conditioning) continue;
    h.add(w.final_position);
  }
  if (h.total() <= 0.0) throw std::invalid_argument("no records left after conditioning");
  return h;
}

std::vector<double> final_coordinates(std::span<const PairRecord> records, Wing wing,
                                      std::optional<Sign> conditioning) {
  std::vector<double> xs;
  xs.reserve(records.size());
  for (const auto& r : records) {
    const auto& w = r.at(wing);
    if (conditioning && w.inferred_outcome != *conditioning) continue;
    xs.push_back(w.final_position.x);
  }
  return xs;
}

}  // namespace retrobell
