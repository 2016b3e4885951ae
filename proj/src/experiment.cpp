#include "retrobell/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "retrobell/dynamics.hpp"
#include "retrobell/parallel.hpp"

namespace retrobell {

namespace {

GaussianPacket packet_at_coupling_start(const GaussianPacket& p, double free_time) {
  return free_time > 0.0 ? evolve_free(p, free_time) : p;
}

std::string describe(const EnsembleSpec& spec, double sigma, const std::string& why) {
  std::ostringstream os;
  os << "branches do not separate (" << why << "): g = " << spec.coupling
     << ", T = " << spec.duration << ", sigma = " << sigma << ", g*T = "
     << spec.coupling * spec.duration << ", required >= " << spec.separation_sigmas
     << " sigma";
  return os.str();
}

}  // namespace

Sign plate_readout(const Vec3& final_position, const WingGeometry& geometry) {
  return final_position.x >= geometry.decision_x ? Sign::plus : Sign::minus;
}

WingEvolution evolve_wing(Sign label, const GaussianPacket& packet, const Vec3& start,
                          double coupling, double duration, double free_time, double step) {
  Vec3 r = start;
  GaussianPacket p = packet;
  if (free_time > 0.0) {
    r = advance(r, VelocityField::free(p, 0.0), 0.0, free_time, step);
    p = evolve_free(p, free_time);
  }
  const WingGeometry geometry{p.center.x};
  r = advance(r, VelocityField::coupling(label, coupling), free_time, free_time + duration, step);
  p = translate_under_coupling(p, label, coupling, duration);
  return {p, r, geometry};
}

WingRecord read_wing(Wing wing, Sign label, const GaussianPacket& packet, const Vec3& start,
                     double coupling, double duration, double free_time, double step) {
  const auto ev = evolve_wing(label, packet, start, coupling, duration, free_time, step);
  return {wing, ev.position, plate_readout(ev.position, ev.geometry), label};
}

void check_separation(const EnsembleSpec& spec) {
  const double travel = spec.coupling * spec.duration;
  const GaussianPacket packets[2] = {packet_at_coupling_start(spec.packet1, spec.free_time),
                                     packet_at_coupling_start(spec.packet2, spec.free_time)};
  for (const auto& p : packets) {
    const double sigma = p.width().x;
    if (travel < spec.separation_sigmas * sigma) {
      throw SeparationError(describe(spec, sigma, "shift below the separation criterion"));
    }
    const double overlap =
        branch_overlap(translate_under_coupling(p, Sign::plus, spec.coupling, spec.duration),
                       translate_under_coupling(p, Sign::minus, spec.coupling, spec.duration));
    if (overlap > spec.max_overlap) {
      throw SeparationError(describe(spec, sigma, "branch overlap above the readout limit"));
    }
  }
  if (spec.positions) {
    // The free flow stretches offsets from the center by width(t) / waist.
    const double stretch1 = packets[0].width().x / spec.packet1.waist.x;
    const double stretch2 = packets[1].width().x / spec.packet2.waist.x;
    for (const auto& br : *spec.positions) {
      const double e1 = stretch1 * x_extent(br.first, spec.separation_sigmas);
      const double e2 = stretch2 * x_extent(br.second, spec.separation_sigmas);
      if (std::max(e1, e2) >= travel) {
        throw SeparationError(describe(spec, packets[0].width().x,
                                       "position override extends past the branch shift"));
      }
    }
  }
}

RunResult run_experiment(const EnsembleSpec& spec) {
  spec.validate();
  check_separation(spec);

  RunResult result;
  result.spec = spec;
  const BornWeights weights = ontic_weights(spec);
  const auto n = static_cast<std::size_t>(spec.pair_count);
  result.records.resize(n);

  std::vector<std::int64_t> errors((n + kPairChunk - 1) / kPairChunk, 0);
  for_each_chunk(n, kPairChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::vector<OnticState> states;
    states.reserve(end - begin);
    sample_chunk(spec, weights, chunk, begin, end, states);
    for (std::size_t k = begin; k < end; ++k) {
      const OnticState& s = states[k - begin];
      PairRecord rec{
          read_wing(Wing::first, s.labels.first, s.packets.first, s.r1, spec.coupling,
                    spec.duration, spec.free_time, spec.step),
          read_wing(Wing::second, s.labels.second, s.packets.second, s.r2, spec.coupling,
                    spec.duration, spec.free_time, spec.step)};
      errors[chunk] += (rec.first.inferred_outcome != rec.first.true_label) +
                       (rec.second.inferred_outcome != rec.second.true_label);
      result.records[k] = rec;
    }
  });

  auto& d = result.diagnostics;
  for (auto e : errors) d.readout_errors += e;
  d.label_weights = weights;
  const auto start = epistemic_branch_centers(spec.state, spec.settings.a, spec.settings.b,
                                              spec.coupling, 0.0);
  const auto stop = epistemic_branch_centers(spec.state, spec.settings.a, spec.settings.b,
                                             spec.coupling, spec.duration);
  for (int k = 0; k < 4; ++k) {
    d.branch_weights_start.w[k] = start[k].weight;
    d.branch_weights_end.w[k] = stop[k].weight;
  }
  const GaussianPacket p1 = packet_at_coupling_start(spec.packet1, spec.free_time);
  const GaussianPacket p2 = packet_at_coupling_start(spec.packet2, spec.free_time);
  d.branch_overlap_first =
      branch_overlap(translate_under_coupling(p1, Sign::plus, spec.coupling, spec.duration),
                     translate_under_coupling(p1, Sign::minus, spec.coupling, spec.duration));
  d.branch_overlap_second =
      branch_overlap(translate_under_coupling(p2, Sign::plus, spec.coupling, spec.duration),
                     translate_under_coupling(p2, Sign::minus, spec.coupling, spec.duration));
  return result;
}

}  // namespace retrobell
