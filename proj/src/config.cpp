#include "retrobell/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace retrobell {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError((path.empty() ? std::string("/") : path) + ": " + message);
}

void reject_unknown(const json& obj, const std::string& path, std::set<std::string> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) fail(path + "/" + key, "unknown field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

Vec3 vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected an array of three numbers");
  return {number(j[0], path + "/0"), number(j[1], path + "/1"), number(j[2], path + "/2")};
}

// A number means the same value on all three axes.
Vec3 widths(const json& j, const std::string& path) {
  if (j.is_number()) {
    const double w = number(j, path);
    return {w, w, w};
  }
  return vec3(j, path);
}

UnitVector3 direction(const json& j, const std::string& path) {
  const Vec3 v = vec3(j, path);
  try {
    return UnitVector3(v);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

const json* field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

ShiftedGaussian gaussian(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a gaussian sampler object");
  reject_unknown(j, path, {"type", "offset", "width"});
  ShiftedGaussian g;
  if (auto* v = field(j, "offset")) g.offset = vec3(*v, path + "/offset");
  if (auto* v = field(j, "width")) g.width = widths(*v, path + "/width");
  return g;
}

PositionSampler sampler(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a sampler object");
  const auto* type = field(j, "type");
  if (type == nullptr || !type->is_string()) fail(path + "/type", "expected gaussian, box or mixture");
  const std::string t = type->get<std::string>();
  PositionSampler out;
  if (t == "gaussian") {
    out = gaussian(j, path);
  } else if (t == "box") {
    reject_unknown(j, path, {"type", "offset", "half_width"});
    UniformBox b;
    if (auto* v = field(j, "offset")) b.offset = vec3(*v, path + "/offset");
    if (auto* v = field(j, "half_width")) b.half_width = widths(*v, path + "/half_width");
    out = b;
  } else if (t == "mixture") {
    reject_unknown(j, path, {"type", "first", "second", "first_weight"});
    GaussianMixture m;
    if (!field(j, "first") || !field(j, "second")) fail(path, "mixture needs first and second");
    m.first = gaussian(j["first"], path + "/first");
    m.second = gaussian(j["second"], path + "/second");
    if (auto* v = field(j, "first_weight")) m.first_weight = number(*v, path + "/first_weight");
    out = m;
  } else {
    fail(path + "/type", "unknown sampler type '" + t + "'");
  }
  try {
    validate(out);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
  return out;
}

BornWeights weight_table(const json& j, const std::string& path) {
  reject_unknown(j, path, {"++", "+-", "-+", "--"});
  BornWeights w;
  for (const auto& label : kAllLabels) {
    const std::string key = label.name();
    if (!field(j, key.c_str())) fail(path + "/" + key, "missing weight");
    w[label] = number(j[key], path + "/" + key);
  }
  try {
    w.validate(1e-10);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return w;
}

TwoQubitState state_from(const json& j, const std::string& path, std::string& name) {
  if (j.is_string()) {
    name = j.get<std::string>();
    if (name == "singlet") return singlet();
    if (name == "triplet0") return triplet_zero();
    if (name == "triplet_up") return triplet_up();
    fail(path, "unknown state preset '" + name + "' (singlet, triplet0, triplet_up)");
  }
  if (!j.is_object()) fail(path, "expected a preset name or {\"amplitudes\": ...}");
  reject_unknown(j, path, {"amplitudes"});
  const auto* amps = field(j, "amplitudes");
  if (!amps || !amps->is_array() || amps->size() != 4) {
    fail(path + "/amplitudes", "expected four [re, im] pairs");
  }
  std::array<Complex, 4> a{};
  for (std::size_t k = 0; k < 4; ++k) {
    const std::string p = path + "/amplitudes/" + std::to_string(k);
    const auto& c = (*amps)[k];
    if (!c.is_array() || c.size() != 2) fail(p, "expected [re, im]");
    a[k] = {number(c[0], p + "/0"), number(c[1], p + "/1")};
  }
  name = "custom";
  try {
    return TwoQubitState(a);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

ojson to_json(const Vec3& v) { return ojson::array({v.x, v.y, v.z}); }
ojson to_json(const UnitVector3& v) { return to_json(v.vec()); }

ojson to_json(const ShiftedGaussian& g) {
  return {{"type", "gaussian"}, {"offset", to_json(g.offset)}, {"width", to_json(g.width)}};
}

ojson to_json(const PositionSampler& s) {
  if (const auto* g = std::get_if<ShiftedGaussian>(&s)) return to_json(*g);
  if (const auto* b = std::get_if<UniformBox>(&s)) {
    return {{"type", "box"}, {"offset", to_json(b->offset)}, {"half_width", to_json(b->half_width)}};
  }
  const auto& m = std::get<GaussianMixture>(s);
  ojson first = to_json(m.first);
  ojson second = to_json(m.second);
  first.erase("type");
  second.erase("type");
  return {{"type", "mixture"}, {"first", first}, {"second", second}, {"first_weight", m.first_weight}};
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("syntax error at " + location(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                      e.what());
  }
  if (!doc.is_object()) fail("", "scenario must be a JSON object");
  reject_unknown(doc, "", {"schema_version", "state", "settings", "packet", "coupling", "duration",
                           "free_time", "step", "pairs", "seed", "weights", "positions",
                           "separation_sigmas", "max_overlap", "histogram", "scan", "chsh"});

  ScenarioConfig cfg;
  EnsembleSpec& spec = cfg.spec;

  if (auto* v = field(doc, "schema_version")) {
    if (integer(*v, "/schema_version") != kConfigSchemaVersion) {
      fail("/schema_version", "unsupported schema version");
    }
  }
  if (auto* v = field(doc, "state")) spec.state = state_from(*v, "/state", cfg.state_name);

  const json* settings = field(doc, "settings");
  if (!settings || !settings->is_object()) fail("/settings", "expected {\"a\": [...], \"b\": [...]}");
  reject_unknown(*settings, "/settings", {"a", "b"});
  if (!field(*settings, "a") || !field(*settings, "b")) fail("/settings", "both a and b are required");
  spec.settings = {direction((*settings)["a"], "/settings/a"),
                   direction((*settings)["b"], "/settings/b")};

  if (auto* p = field(doc, "packet")) {
    if (!p->is_object()) fail("/packet", "expected an object");
    reject_unknown(*p, "/packet", {"width", "center1", "center2"});
    Vec3 w{1.0, 1.0, 1.0};
    if (auto* v = field(*p, "width")) w = widths(*v, "/packet/width");
    if (!(w.x > 0.0 && w.y > 0.0 && w.z > 0.0)) fail("/packet/width", "width must be positive");
    spec.packet1.waist = w;
    spec.packet2.waist = w;
    if (auto* v = field(*p, "center1")) spec.packet1.center = vec3(*v, "/packet/center1");
    if (auto* v = field(*p, "center2")) spec.packet2.center = vec3(*v, "/packet/center2");
  }

  if (auto* v = field(doc, "coupling")) spec.coupling = number(*v, "/coupling");
  if (auto* v = field(doc, "duration")) spec.duration = number(*v, "/duration");
  if (auto* v = field(doc, "free_time")) spec.free_time = number(*v, "/free_time");
  if (auto* v = field(doc, "step")) spec.step = number(*v, "/step");
  if (auto* v = field(doc, "pairs")) spec.pair_count = integer(*v, "/pairs");
  if (auto* v = field(doc, "separation_sigmas")) spec.separation_sigmas = number(*v, "/separation_sigmas");
  if (auto* v = field(doc, "max_overlap")) spec.max_overlap = number(*v, "/max_overlap");

  const json* seed = field(doc, "seed");
  if (!seed) fail("/seed", "seed is required");
  if (!seed->is_number_unsigned()) fail("/seed", "expected a non-negative integer");
  spec.seed = seed->get<std::uint64_t>();

  if (auto* v = field(doc, "weights")) {
    if (v->is_string()) {
      const auto mode = v->get<std::string>();
      if (mode == "equilibrium") {
        spec.weights.mode = OnticWeights::Mode::equilibrium;
      } else if (mode == "redistributed") {
        spec.weights.mode = OnticWeights::Mode::redistributed;
      } else {
        fail("/weights", "unknown weight preset '" + mode + "' (equilibrium, redistributed)");
      }
    } else if (v->is_object()) {
      spec.weights.mode = OnticWeights::Mode::fixed;
      spec.weights.fixed = weight_table(*v, "/weights");
    } else {
      fail("/weights", "expected a preset name or a table of four weights");
    }
  }

  if (auto* v = field(doc, "positions")) {
    if (v->is_string()) {
      if (v->get<std::string>() != "equilibrium") fail("/positions", "expected \"equilibrium\"");
    } else if (v->is_object() && field(*v, "preset")) {
      reject_unknown(*v, "/positions", {"preset", "shift", "width"});
      if ((*v)["preset"] != "branch-shifted") fail("/positions/preset", "unknown preset (branch-shifted)");
      double shift = 1.0, width = 1.0;
      if (auto* s = field(*v, "shift")) shift = number(*s, "/positions/shift");
      if (auto* w = field(*v, "width")) width = number(*w, "/positions/width");
      if (!(width > 0.0)) fail("/positions/width", "width must be positive");
      spec.positions = branch_shifted_positions(shift, width);
    } else if (v->is_object()) {
      reject_unknown(*v, "/positions", {"++", "+-", "-+", "--"});
      PositionOverride po;
      for (const auto& label : kAllLabels) {
        const std::string key = label.name();
        const std::string p = "/positions/" + key;
        const auto* br = field(*v, key.c_str());
        if (!br || !br->is_object()) fail(p, "expected {\"first\": sampler, \"second\": sampler}");
        reject_unknown(*br, p, {"first", "second"});
        if (!field(*br, "first") || !field(*br, "second")) fail(p, "needs first and second");
        po[label.index()] = {sampler((*br)["first"], p + "/first"),
                             sampler((*br)["second"], p + "/second")};
      }
      spec.positions = po;
    } else {
      fail("/positions", "expected \"equilibrium\", a preset, or a per-branch table");
    }
  }

  if (auto* h = field(doc, "histogram")) {
    if (!h->is_object()) fail("/histogram", "expected an object");
    reject_unknown(*h, "/histogram", {"bin_width"});
    if (auto* v = field(*h, "bin_width")) cfg.bin_width = number(*v, "/histogram/bin_width");
    if (!(cfg.bin_width > 0.0)) fail("/histogram/bin_width", "bin width must be positive");
  }

  if (auto* s = field(doc, "scan")) {
    if (!s->is_object()) fail("/scan", "expected an object");
    reject_unknown(*s, "/scan", {"mode", "points", "probes", "bootstrap"});
    if (auto* v = field(*s, "mode")) {
      const auto mode = v->is_string() ? v->get<std::string>() : std::string();
      if (mode == "bell-curve") {
        cfg.scan.mode = ScanConfig::Mode::bell_curve;
      } else if (mode == "signal") {
        cfg.scan.mode = ScanConfig::Mode::signal;
      } else {
        fail("/scan/mode", "expected bell-curve or signal");
      }
    }
    if (auto* v = field(*s, "points")) cfg.scan.points = static_cast<int>(integer(*v, "/scan/points"));
    if (cfg.scan.points < 2) fail("/scan/points", "need at least two points");
    if (auto* v = field(*s, "bootstrap")) {
      cfg.scan.bootstrap_resamples = static_cast<int>(integer(*v, "/scan/bootstrap"));
    }
    if (cfg.scan.bootstrap_resamples < 2) fail("/scan/bootstrap", "need at least two resamples");
    if (auto* v = field(*s, "probes")) {
      if (!v->is_array()) fail("/scan/probes", "expected an array of directions");
      for (std::size_t k = 0; k < v->size(); ++k) {
        cfg.scan.probes.push_back(direction((*v)[k], "/scan/probes/" + std::to_string(k)));
      }
    }
  }

  if (auto* c = field(doc, "chsh")) {
    if (!c->is_object()) fail("/chsh", "expected {\"a\", \"a2\", \"b\", \"b2\"}");
    reject_unknown(*c, "/chsh", {"a", "a2", "b", "b2"});
    for (const char* k : {"a", "a2", "b", "b2"}) {
      if (!field(*c, k)) fail(std::string("/chsh/") + k, "missing direction");
    }
    cfg.chsh = {direction((*c)["a"], "/chsh/a"), direction((*c)["a2"], "/chsh/a2"),
                direction((*c)["b"], "/chsh/b"), direction((*c)["b2"], "/chsh/b2")};
  }

  spec.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::ordered_json to_json(const ScenarioConfig& cfg) {
  const EnsembleSpec& s = cfg.spec;
  ojson j;
  j["schema_version"] = kConfigSchemaVersion;
  if (cfg.state_name == "custom") {
    ojson amps = ojson::array();
    for (const auto& a : s.state.amplitudes()) amps.push_back({a.real(), a.imag()});
    j["state"] = {{"amplitudes", amps}};
  } else {
    j["state"] = cfg.state_name;
  }
  j["settings"] = {{"a", to_json(s.settings.a)}, {"b", to_json(s.settings.b)}};
  j["packet"] = {{"width", to_json(s.packet1.waist)},
                 {"center1", to_json(s.packet1.center)},
                 {"center2", to_json(s.packet2.center)}};
  j["coupling"] = s.coupling;
  j["duration"] = s.duration;
  j["free_time"] = s.free_time;
  j["step"] = s.step;
  j["pairs"] = s.pair_count;
  j["seed"] = s.seed;
  switch (s.weights.mode) {
    case OnticWeights::Mode::equilibrium:
      j["weights"] = "equilibrium";
      break;
    case OnticWeights::Mode::redistributed:
      j["weights"] = "redistributed";
      break;
    case OnticWeights::Mode::fixed: {
      ojson w;
      for (const auto& label : kAllLabels) w[label.name()] = s.weights.fixed[label];
      j["weights"] = w;
      break;
    }
  }
  if (s.positions) {
    ojson p;
    for (const auto& label : kAllLabels) {
      const auto& br = (*s.positions)[label.index()];
      p[label.name()] = {{"first", to_json(br.first)}, {"second", to_json(br.second)}};
    }
    j["positions"] = p;
  } else {
    j["positions"] = "equilibrium";
  }
  j["separation_sigmas"] = s.separation_sigmas;
  j["max_overlap"] = s.max_overlap;
  j["histogram"] = {{"bin_width", cfg.bin_width}};
  ojson probes = ojson::array();
  for (const auto& p : cfg.scan.probes) probes.push_back(to_json(p));
  j["scan"] = {{"mode", cfg.scan.mode == ScanConfig::Mode::bell_curve ? "bell-curve" : "signal"},
               {"points", cfg.scan.points},
               {"probes", probes},
               {"bootstrap", cfg.scan.bootstrap_resamples}};
  j["chsh"] = {{"a", to_json(cfg.chsh.a)},
               {"a2", to_json(cfg.chsh.a2)},
               {"b", to_json(cfg.chsh.b)},
               {"b2", to_json(cfg.chsh.b2)}};
  return j;
}

}  // namespace retrobell
