#include "retrobell/commands.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "retrobell/experiment.hpp"

namespace retrobell {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

ojson weights_json(const BornWeights& w) {
  ojson j;
  for (const auto& label : kAllLabels) j[label.name()] = w[label];
  return j;
}

ojson estimate_json(const MeanEstimate& e) { return {{"value", e.value}, {"std_error", e.std_error}}; }

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out.flush()) throw std::ios_base::failure("failed writing '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::ios_base::failure("cannot create output directory '" + dir.string() + "'");
}

std::string sign_text(Sign s) { return s == Sign::plus ? "1" : "-1"; }

std::string records_csv(const std::vector<PairRecord>& records) {
  std::string out =
      "pair,x1,y1,z1,outcome1,label1,x2,y2,z2,outcome2,label2\n";
  out.reserve(records.size() * 160);
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    out += std::to_string(k);
    for (const WingRecord* w : {&r.first, &r.second}) {
      out += ',' + format_number(w->final_position.x);
      out += ',' + format_number(w->final_position.y);
      out += ',' + format_number(w->final_position.z);
      out += ',' + sign_text(w->inferred_outcome);
      out += ',' + sign_text(w->true_label);
    }
    out += '\n';
  }
  return out;
}

// Like marginal_position_density, but an empty selection yields an empty histogram.
DensityHistogram spot_histogram(const std::vector<PairRecord>& records, Wing wing,
                                std::optional<Sign> outcome, const HistogramGrid& grid) {
  DensityHistogram h(grid);
  for (const auto& r : records) {
    const auto& w = r.at(wing);
    if (!outcome || w.inferred_outcome == *outcome) h.add(w.final_position);
  }
  return h;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string histogram_csv(const DensityHistogram& h) {
  const auto& g = h.grid();
  std::string out = "bin_lo,bin_hi,weight\n";
  out += "-inf," + format_number(g.lo(0)) + ',' + format_number(h.underflow()) + '\n';
  for (int i = 0; i < g.bins; ++i) {
    out += format_number(g.lo(i)) + ',' + format_number(g.hi(i)) + ',' +
           format_number(h.weights()[static_cast<std::size_t>(i)]) + '\n';
  }
  out += format_number(g.upper()) + ",inf," + format_number(h.overflow()) + '\n';
  return out;
}

ojson cmd_exact(const ScenarioConfig& config) {
  const EnsembleSpec& spec = config.spec;
  const auto& [a, b] = spec.settings;
  const BornWeights born = born_weights(spec.state, a, b);
  const BornWeights labels = ontic_weights(spec);
  const BornWeights shifted = redistributed_weights(born);
  const double gt = spec.coupling * spec.duration;

  ojson j;
  j["schema"] = kExactSchema;
  j["config"] = to_json(config);
  j["settings_dot"] = dot(a, b);
  j["born_weights"] = weights_json(born);
  j["correlator"] = correlator_from_weights(born);
  j["label_weights"] = weights_json(labels);
  j["label_correlator"] = correlator_from_weights(labels);
  j["outcome_rate"] = {{"wing1", labels.first_marginal(Sign::plus)},
                       {"wing2", labels.second_marginal(Sign::plus)}};
  j["chsh"] = {{"value", chsh_exact(spec.state, config.chsh)}};
  j["redistributed"] = {{"weights", weights_json(shifted)},
                        {"outcome_rate_wing1", shifted.first_marginal(Sign::plus)},
                        {"spot_mixture_wing1",
                         {{"plus", shifted.first_marginal(Sign::plus)},
                          {"minus", shifted.first_marginal(Sign::minus)}}}};
  const SettingPair aligned{a, a};
  const SettingPair orthogonal{a, rotate_towards(a, 0.0)};
  j["measurement_independence"] = {
      {"aligned_vs_orthogonal",
       measurement_independence_divergence(spec.state, aligned, orthogonal)},
      {"aligned_vs_configured", measurement_independence_divergence(spec.state, aligned, spec.settings)}};
  j["spot_centers_wing1"] = {{"plus", spec.packet1.center.x + gt}, {"minus", spec.packet1.center.x - gt}};
  j["spot_centers_wing2"] = {{"plus", spec.packet2.center.x + gt}, {"minus", spec.packet2.center.x - gt}};
  return j;
}

ojson cmd_run(const ScenarioConfig& config, const fs::path& out_dir) {
  const RunResult result = run_experiment(config.spec);
  ensure_dir(out_dir);

  BornWeights freq;
  for (const auto& r : result.records) {
    freq[LabelPair{r.first.true_label, r.second.true_label}] += 1.0;
  }
  for (double& f : freq.w) f /= static_cast<double>(result.records.size());

  ojson files = ojson::array();
  files.push_back({{"path", "records.csv"}, {"schema", kRecordsSchema}});
  write_file(out_dir / "records.csv", records_csv(result.records));
  for (Wing wing : {Wing::first, Wing::second}) {
    const HistogramGrid grid = spot_grid(config.spec, wing, config.bin_width);
    const std::string prefix = wing == Wing::first ? "hist_wing1_" : "hist_wing2_";
    const std::pair<const char*, std::optional<Sign>> selections[] = {
        {"all", std::nullopt}, {"plus", Sign::plus}, {"minus", Sign::minus}};
    for (const auto& [name, outcome] : selections) {
      const std::string file = prefix + name + ".csv";
      write_file(out_dir / file, histogram_csv(spot_histogram(result.records, wing, outcome, grid)));
      files.push_back({{"path", file}, {"schema", kHistogramSchema}});
    }
  }

  const auto& d = result.diagnostics;
  ojson j;
  j["schema"] = kRunSchema;
  j["config"] = to_json(config);
  j["pairs"] = result.records.size();
  if (result.records.size() >= 2) {
    j["correlator"] = estimate_json(estimate_correlator(result.records));
    j["outcome_rate"] = {{"wing1", estimate_json(outcome_rate(result.records, Wing::first))},
                         {"wing2", estimate_json(outcome_rate(result.records, Wing::second))}};
  } else {
    j["correlator"] = nullptr;
    j["outcome_rate"] = nullptr;
  }
  j["exact_correlator"] = correlator_from_weights(d.label_weights);
  j["label_weights"] = weights_json(d.label_weights);
  j["label_frequencies"] = weights_json(freq);
  j["diagnostics"] = {{"readout_errors", d.readout_errors},
                      {"branch_overlap", {d.branch_overlap_first, d.branch_overlap_second}},
                      {"branch_weights_start", weights_json(d.branch_weights_start)},
                      {"branch_weights_end", weights_json(d.branch_weights_end)}};
  j["files"] = files;
  write_file(out_dir / "summary.json", j.dump(2) + "\n");
  return j;
}

ojson cmd_scan(const ScenarioConfig& config, const fs::path& out_dir) {
  std::string csv;
  ojson j;
  j["schema"] = kScanSchema;
  j["config"] = to_json(config);
  if (config.scan.mode == ScanConfig::Mode::bell_curve) {
    const auto points = bell_curve(config.spec, config.scan.points);
    csv = "cosine,exact,estimate,std_error\n";
    std::size_t within = 0;
    for (const auto& p : points) {
      csv += format_number(p.cosine) + ',' + format_number(p.exact) + ',' +
             format_number(p.estimate.value) + ',' + format_number(p.estimate.std_error) + '\n';
      within += std::abs(p.estimate.value - p.exact) <= 3.0 * p.estimate.std_error;
    }
    j["mode"] = "bell-curve";
    j["points"] = points.size();
    j["points_within_3se"] = within;
  } else {
    if (config.scan.probes.empty()) throw ConfigError("/scan/probes: signal mode needs at least one probe");
    ScanOptions opts;
    opts.bin_width = config.bin_width;
    opts.bootstrap_resamples = config.scan.bootstrap_resamples;
    const auto reports = signalling_scan(config.spec, config.scan.probes, opts);
    csv = "probe_x,probe_y,probe_z,probe_dot,observable,wing,divergence,standard_error,null_mean,"
          "null_sd,significance\n";
    for (const auto& r : reports) {
      const auto& b = r.probe.b;
      csv += format_number(b.x()) + ',' + format_number(b.y()) + ',' + format_number(b.z()) + ',' +
             format_number(dot(r.probe.a, b)) + ',' + to_string(r.observable) + ',' +
             std::to_string(static_cast<int>(r.wing)) + ',' + format_number(r.divergence) + ',' +
             format_number(r.standard_error) + ',' + format_number(r.null_mean) + ',' +
             format_number(r.null_sd) + ',' + format_number(r.significance()) + '\n';
    }
    j["mode"] = "signal";
    j["reports"] = reports.size();
  }
  ensure_dir(out_dir);
  write_file(out_dir / "scan.csv", csv);
  j["files"] = ojson::array({{{"path", "scan.csv"}, {"schema", kScanSchema}}});
  write_file(out_dir / "scan_summary.json", j.dump(2) + "\n");
  return j;
}

}  // namespace retrobell
