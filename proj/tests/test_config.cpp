#include <string>

#include "doctest.h"
#include "retrobell/config.hpp"

using namespace retrobell;

namespace {

const char* kMinimal = R"({
  "settings": {"a": [0, 0, 1], "b": [1, 0, 0]},
  "seed": 42
})";

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("minimal scenario takes the defaults") {
  const auto cfg = parse_config(kMinimal);
  CHECK(cfg.spec.seed == 42);
  CHECK(cfg.spec.coupling == 1.0);
  CHECK(cfg.spec.duration == 10.0);
  CHECK(cfg.spec.pair_count == 100000);
  CHECK(cfg.spec.weights.mode == OnticWeights::Mode::equilibrium);
  CHECK_FALSE(cfg.spec.positions.has_value());
  CHECK(cfg.state_name == "singlet");
  CHECK(cfg.spec.state.amplitudes() == singlet().amplitudes());
  CHECK(cfg.chsh == standard_chsh_settings());
}

TEST_CASE("full scenario round-trips through JSON") {
  const char* text = R"({
    "schema_version": 1,
    "state": {"amplitudes": [[0, 0], [0.6, 0.1], [-0.5, 0.3], [0.2, 0]]},
    "settings": {"a": [0.1, 0.2, 0.9], "b": [1, 0, 0.3]},
    "packet": {"width": [1.0, 0.5, 2.0], "center1": [0, 1, 0], "center2": [5, 0, 0]},
    "coupling": 1.5, "duration": 8, "free_time": 0.25, "step": 0.005,
    "pairs": 1234, "seed": 18446744073709551615,
    "weights": {"++": 0.1, "+-": 0.2, "-+": 0.3, "--": 0.4},
    "positions": {
      "++": {"first": {"type": "gaussian", "offset": [1, 0, 0], "width": [0.5, 0.5, 0.5]},
             "second": {"type": "box", "offset": [0, 0, 0], "half_width": [1, 1, 1]}},
      "+-": {"first": {"type": "mixture", "first": {"offset": [1, 0, 0], "width": [1, 1, 1]},
                       "second": {"offset": [-1, 0, 0], "width": [0.5, 1, 1]}, "first_weight": 0.25},
             "second": {"type": "gaussian", "offset": [0, 0, 0], "width": [1, 1, 1]}},
      "-+": {"first": {"type": "gaussian", "offset": [0, 0, 0], "width": [1, 1, 1]},
             "second": {"type": "gaussian", "offset": [0, 0, 0], "width": [1, 1, 1]}},
      "--": {"first": {"type": "gaussian", "offset": [0, 0, 0], "width": [1, 1, 1]},
             "second": {"type": "gaussian", "offset": [0, 0, 0], "width": [1, 1, 1]}}
    },
    "separation_sigmas": 5, "max_overlap": 1e-7,
    "histogram": {"bin_width": 0.125},
    "scan": {"mode": "signal", "points": 5, "probes": [[0, 0, 1], [0, 1, 1]], "bootstrap": 200},
    "chsh": {"a": [0, 0, 1], "a2": [1, 0, 0], "b": [1, 0, 1], "b2": [-1, 0, 1]}
  })";
  const auto cfg = parse_config(text);
  CHECK(cfg.state_name == "custom");
  CHECK(cfg.spec.seed == 18446744073709551615ull);
  CHECK(cfg.spec.weights.mode == OnticWeights::Mode::fixed);
  CHECK(cfg.scan.probes.size() == 2);
  CHECK(cfg.bin_width == 0.125);

  const auto again = parse_config(to_json(cfg).dump(2));
  CHECK(again == cfg);
  CHECK(to_json(again).dump() == to_json(cfg).dump());
}

TEST_CASE("presets round-trip") {
  for (const char* extra : {R"("state": "triplet0", "weights": "redistributed")",
                            R"("state": "triplet_up", "positions": {"preset": "branch-shifted", "shift": 0.5, "width": 0.8})",
                            R"("positions": "equilibrium", "scan": {"mode": "bell-curve", "points": 3})"}) {
    const std::string text = std::string(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 3, )") + extra + "}";
    const auto cfg = parse_config(text);
    CHECK(parse_config(to_json(cfg).dump()) == cfg);
  }
}

TEST_CASE("syntax errors report line and column") {
  const auto msg = error_of("{\n  \"seed\": 1,\n  \"settings\": {,}\n}");
  CHECK(contains(msg, "line 3"));
  CHECK(contains(msg, "column"));
}

TEST_CASE("invalid fields report their path") {
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}})"), "/seed"));
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": -1})"), "/seed"));
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1.5})"), "/seed"));
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1, "bogus": 2})"), "/bogus"));
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,0], "b": [1,0,0]}, "seed": 1})"), "/settings/a"));
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0]}, "seed": 1})"), "/settings/b"));
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1, "state": "bell"})"), "/state"));
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1, "packet": {"width": -1}})"),
                 "/packet/width"));
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1, "scan": {"mode": "x"}})"),
                 "/scan/mode"));
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1, "scan": {"probes": [[0,0,0]]}})"),
                 "/scan/probes/0"));
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1, "weights": {"++": 1}})"),
                 "/weights/+-"));
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1, "schema_version": 7})"),
                 "/schema_version"));
  CHECK(contains(error_of("[1, 2]"), "JSON object"));
}

TEST_CASE("ensemble validation failures are config errors") {
  CHECK(contains(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1, "pairs": 0})"), "pair count"));
  CHECK_FALSE(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1, "coupling": 0})").empty());
  CHECK_FALSE(error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1, "step": -0.1})").empty());
  CHECK_FALSE(
      error_of(R"({"settings": {"a": [0,0,1], "b": [1,0,0]}, "seed": 1, "weights": {"++": 1, "+-": 1, "-+": 0, "--": 0}})")
          .empty());
}

TEST_CASE("missing file is an I/O failure") {
  CHECK_THROWS_AS(load_config("/nonexistent/scenario.json"), std::ios_base::failure);
}
