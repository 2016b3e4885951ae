#include <cmath>
#include <numbers>

#include "doctest.h"
#include "retrobell/experiment.hpp"
#include "retrobell/stats.hpp"
#include "support.hpp"

using namespace retrobell;

namespace {

EnsembleSpec base_spec(std::int64_t n, std::uint64_t seed) {
  EnsembleSpec s;
  s.settings = {UnitVector3(0, 0, 1), UnitVector3(1, 0, 0)};
  s.pair_count = n;
  s.seed = seed;
  return s;
}

std::int64_t mismatches(const RunResult& r) {
  std::int64_t bad = 0;
  for (const auto& p : r.records) {
    bad += p.first.inferred_outcome != p.first.true_label;
    bad += p.second.inferred_outcome != p.second.true_label;
  }
  return bad;
}

}  // namespace

TEST_CASE("plate readout") {
  const WingGeometry plate{0.5};
  CHECK(plate_readout({0.5 + 10.0, 0, 0}, plate) == Sign::plus);
  CHECK(plate_readout({0.5 - 10.0, 0, 0}, plate) == Sign::minus);
  CHECK(plate_readout({0.5, 3, -2}, plate) == Sign::plus);  // tie goes to +1
}

TEST_CASE("equilibrium correlator at 120 degrees") {
  auto spec = base_spec(100000, 11);
  spec.settings.b = UnitVector3::planar(2.0 * std::numbers::pi / 3.0);
  const auto r = run_experiment(spec);
  const auto e = estimate_correlator(r.records);
  const double exact = exact_correlator(spec.state, spec.settings.a, spec.settings.b);
  CHECK(exact == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(e.value - exact) < 3.0 * e.std_error);
  CHECK(r.records.size() == 100000);
  CHECK(mismatches(r) == 0);
  CHECK(r.diagnostics.readout_errors == 0);
  CHECK(r.diagnostics.branch_overlap_first < 1e-8);
}

TEST_CASE("labels are unchanged by the dynamics") {
  auto spec = base_spec(30000, 5);
  spec.settings.a = UnitVector3(0.3, -0.4, 0.5);
  const auto states = sample_ontic_states(spec);
  const auto r = run_experiment(spec);
  for (std::size_t k = 0; k < states.size(); ++k) {
    CHECK(r.records[k].first.true_label == states[k].labels.first);
    CHECK(r.records[k].second.true_label == states[k].labels.second);
  }
  for (int i = 0; i < 4; ++i) {
    CHECK(r.diagnostics.branch_weights_start.w[i] == r.diagnostics.branch_weights_end.w[i]);
  }
}

TEST_CASE("single pair is deterministic") {
  const auto spec = base_spec(1, 123);
  const auto a = run_experiment(spec);
  const auto b = run_experiment(spec);
  REQUIRE(a.records.size() == 1);
  CHECK(a.records == b.records);
  CHECK(std::abs(a.records[0].first.final_position.x) > 5.0);
}

TEST_CASE("wing records depend only on local data") {
  auto spec = base_spec(2000, 8);
  spec.settings = {UnitVector3(0.2, 0.3, 0.9), UnitVector3(-0.6, 0.1, 0.2)};
  spec.free_time = 0.5;
  spec.positions = branch_shifted_positions(1.0, 0.7);
  const auto states = sample_ontic_states(spec);
  const auto r = run_experiment(spec);
  const GaussianPacket dummy = GaussianPacket::at_rest({100, 100, 100}, 3.0);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& s = states[k];
    const auto w1 = read_wing(Wing::first, s.labels.first, s.packets.first, s.r1, spec.coupling,
                              spec.duration, spec.free_time, spec.step);
    // Wing-2 inputs replaced by unrelated values.
    const auto w2 = read_wing(Wing::second, flip(s.labels.second), dummy, {7, 7, 7}, spec.coupling,
                              spec.duration, spec.free_time, spec.step);
    (void)w2;
    CHECK(w1 == r.records[k].first);
  }
}

TEST_CASE("separation criterion") {
  auto spec = base_spec(100, 1);
  spec.duration = 5.0;  // g T = 5 < 6 sigma
  CHECK_THROWS_AS(run_experiment(spec), SeparationError);
  try {
    run_experiment(spec);
  } catch (const SeparationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("g = 1") != std::string::npos);
    CHECK(msg.find("T = 5") != std::string::npos);
    CHECK(msg.find("sigma = 1") != std::string::npos);
  }

  spec = base_spec(100, 1);
  spec.packet1.waist = {1.5, 1, 1};  // 10 >= 6 * 1.5, overlap 2 Phi(-20/3) ~ 2.6e-11
  spec.max_overlap = 1e-12;
  CHECK_THROWS_AS(run_experiment(spec), SeparationError);

  spec = base_spec(100, 1);
  PositionOverride wide;
  for (auto& br : wide) br = {UniformBox{{0, 0, 0}, {10.5, 1, 1}}, UniformBox{}};
  spec.positions = wide;
  CHECK_THROWS_AS(run_experiment(spec), SeparationError);

  spec = base_spec(100, 1);
  spec.free_time = 40.0;  // the packet spreads to sigma ~ 20
  CHECK_THROWS_AS(run_experiment(spec), SeparationError);
}

TEST_CASE("box initial positions still read out unambiguously") {
  auto spec = base_spec(50000, 2);
  PositionOverride boxes;
  // g T = 10 >= box half-width 3.5 + 6 sigma margin
  for (auto& br : boxes) br = {UniformBox{{0, 0, 0}, {3.5, 2, 2}}, UniformBox{{0.5, 0, 0}, {3.0, 1, 1}}};
  spec.positions = boxes;
  const auto r = run_experiment(spec);
  CHECK(mismatches(r) == 0);
}

TEST_CASE("free spreading before the coupling") {
  auto spec = base_spec(20000, 4);
  spec.free_time = 1.0;
  spec.duration = 12.0;
  const auto r = run_experiment(spec);
  CHECK(mismatches(r) == 0);
  // Spots are the spread packet shifted by +-gT.
  const double width = evolve_free(spec.packet1, 1.0).width().x;
  const auto xs = final_coordinates(r.records, Wing::first, Sign::plus);
  double mean = 0.0, sq = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  for (double x : xs) sq += (x - mean) * (x - mean);
  CHECK(mean == doctest::Approx(12.0).epsilon(0.01));
  CHECK(std::sqrt(sq / xs.size()) == doctest::Approx(width).epsilon(0.02));
}

TEST_CASE("equilibrium no-signalling with a setting-dependent correlator") {
  auto spec = base_spec(100000, 21);
  const auto base = run_experiment(spec);
  spec.settings.b = UnitVector3(0, 0, -1);
  spec.seed = 22;
  const auto probe = run_experiment(spec);

  const auto p0 = outcome_rate(base.records, Wing::first);
  const auto p1 = outcome_rate(probe.records, Wing::first);
  CHECK(std::abs(p0.value - p1.value) < 3.0 * std::hypot(p0.std_error, p1.std_error));

  const auto e0 = estimate_correlator(base.records);
  const auto e1 = estimate_correlator(probe.records);
  CHECK(std::abs(e0.value) < 3.0 * e0.std_error);
  CHECK(std::abs(e1.value - 1.0) < 1e-12);

  // Spot shapes at wing 1 for each local outcome.
  for (Sign s : {Sign::plus, Sign::minus}) {
    const auto a = final_coordinates(base.records, Wing::first, s);
    const auto b = final_coordinates(probe.records, Wing::first, s);
    CHECK(ks_statistic(a, b) < ks_critical(0.01, a.size(), b.size()));
  }
}

TEST_CASE("marginal spot histogram matches the shifted packet") {
  auto spec = base_spec(100000, 31);
  const auto r = run_experiment(spec);
  const auto xs = final_coordinates(r.records, Wing::first, Sign::plus);
  const auto target = translate_under_coupling(spec.packet1, Sign::plus, spec.coupling, spec.duration);
  CHECK(ks_statistic(xs, [&](double x) { return marginal_cdf(target, 0, x); }) <
        ks_critical(0.01, xs.size()));

  const HistogramGrid grid{0, -20.0, 0.5, 80};
  const auto h = marginal_position_density(r.records, Wing::first, Sign::plus, grid);
  CHECK(h.total() == double(xs.size()));
  const auto all = marginal_position_density(r.records, Wing::first, std::nullopt, grid);
  CHECK(all.total() == 100000.0);

  auto aligned = base_spec(1000, 3);
  aligned.state = triplet_up();
  aligned.settings = {UnitVector3(0, 0, 1), UnitVector3(0, 0, 1)};
  const auto up_only = run_experiment(aligned);
  CHECK_THROWS_AS(marginal_position_density(up_only.records, Wing::first, Sign::minus, grid),
                  std::invalid_argument);
}
