#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "phi4/config.hpp"

using namespace phi4;

namespace {

const char* kMinimal = R"({
  "grid": {"d": 2, "N": 8, "L": 1.0},
  "schedule": {"g": {"base": 0.1, "exponent": 0.0},
               "m": {"base": 0.0, "exponent": 0.0},
               "a": {"base": 0.0, "exponent": 0.0}},
  "n_list": [2],
  "sampler": {"sweeps": 100, "burn_in": 50, "seed": 7, "proposal_width": 1.0},
  "experiment": "sample"
})";

std::string errors_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    std::string all;
    for (const auto& err : e.errors()) all += err + "\n";
    return all;
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config parses and hashes deterministically") {
  RunConfig a = parse_config_text(kMinimal);
  RunConfig b = parse_config_text(kMinimal);
  CHECK(a.d == 2);
  CHECK(a.N == 8);
  CHECK(a.seed == 7);
  CHECK(a.n_list == std::vector<int>{2});
  CHECK(a.experiment == "sample");
  CHECK(canonical_config(a) == canonical_config(b));
  CHECK(config_hash(a) == config_hash(b));

  RunConfig c = a;
  c.seed = 8;
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("unknown keys are named with their path") {
  std::string text = kMinimal;
  text.insert(text.rfind('}'), ", \"extra_key\": 1");
  auto errs = errors_of(text);
  CHECK(errs.find("extra_key") != std::string::npos);

  std::string nested(kMinimal);
  nested.replace(nested.find("\"d\": 2"), 6, "\"d\": 2, \"bogus\": 3");
  auto nerrs = errors_of(nested);
  CHECK(nerrs.find("$.grid") != std::string::npos);
  CHECK(nerrs.find("bogus") != std::string::npos);
}

TEST_CASE("seed is mandatory") {
  std::string text(kMinimal);
  text.replace(text.find("\"seed\": 7, "), 11, "");
  auto errs = errors_of(text);
  CHECK(errs.find("seed") != std::string::npos);
}

TEST_CASE("several invalid fields are all reported") {
  std::string text = R"({
    "grid": {"d": 9, "N": 0, "L": -1.0},
    "sampler": {"sweeps": 10, "burn_in": 50, "seed": 1, "proposal_width": 0.0},
    "experiment": "explode"
  })";
  auto errs = errors_of(text);
  CHECK(errs.find("$.grid.d") != std::string::npos);
  CHECK(errs.find("$.grid.N") != std::string::npos);
  CHECK(errs.find("$.grid.L") != std::string::npos);
  CHECK(errs.find("burn_in") != std::string::npos);
  CHECK(errs.find("proposal_width") != std::string::npos);
  CHECK(errs.find("experiment") != std::string::npos);
}

TEST_CASE("shapes are validated against the grid") {
  std::string text = kMinimal;
  text.insert(text.rfind('}'),
              R"(, "shapes": [{"name": "probe", "kind": "gaussian-bump",
                              "center": [0.5, 0.5], "width": 0.2}])");
  RunConfig cfg = parse_config_text(text);
  REQUIRE(cfg.shapes.size() == 1);
  Grid grid(cfg.d, cfg.N, cfg.L);
  Field f = build_shape(grid, cfg.shapes[0]);
  CHECK(f.max_abs() > 0.0);

  std::string bad = kMinimal;
  bad.insert(bad.rfind('}'),
             R"(, "shapes": [{"name": "p", "kind": "gaussian-bump",
                             "center": [0.5, 0.5], "width": -1.0}])");
  CHECK(errors_of(bad).find("width") != std::string::npos);

  std::string unk = kMinimal;
  unk.insert(unk.rfind('}'), R"(, "shapes": [{"name": "p", "kind": "wavelet"}])");
  CHECK(errors_of(unk).find("wavelet") != std::string::npos);
}

TEST_CASE("shape kinds build the documented fields") {
  Grid grid(2, 8, 1.0);
  ShapeSpec box;
  box.name = "box";
  box.kind = "indicator";
  box.lo = {0.0, 0.0};
  box.hi = {1.0, 1.0};
  Field full = build_shape(grid, box);
  CHECK(inner_product(full, full) == doctest::Approx(grid.volume()));

  ShapeSpec c;
  c.name = "c";
  c.kind = "constant";
  c.value = 2.0;
  Field cf = build_shape(grid, c);
  CHECK(cf[5] == doctest::Approx(2.0));

  ShapeSpec bad;
  bad.kind = "nope";
  CHECK_THROWS(build_shape(grid, bad));
}

TEST_CASE("tabulated schedules parse") {
  std::string text = kMinimal;
  auto pos = text.find("{\"base\": 0.1, \"exponent\": 0.0}");
  text.replace(pos, std::string("{\"base\": 0.1, \"exponent\": 0.0}").size(),
               "{\"table\": {\"2\": 0.5, \"4\": 0.25}}");
  RunConfig cfg = parse_config_text(text);
  CHECK(cfg.schedule.g_at(2) == doctest::Approx(0.5));
  CHECK(cfg.schedule.g_at(4) == doctest::Approx(0.25));
  CHECK_THROWS(cfg.schedule.g_at(8));
}
