#include "ncg/experiments.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace ncg;

namespace {

ExperimentConfig config_from_string(const std::string& text) {
  return parse_config(nlohmann::json::parse(text));
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("builtin model with overrides") {
    const auto cfg = config_from_string(R"({
      "experiment": "chern",
      "model": {"builtin": "chern2d", "m": 1.0, "W": 0.5},
      "sizes": [8, 12],
      "seeds": [1, 2, 3],
      "tolerance": 0.02
    })");
    CHECK(cfg.experiment == "chern");
    CHECK(cfg.model.Q == 2);
    CHECK(cfg.sizes == std::vector<int>{8, 12});
    CHECK(cfg.seeds.size() == 3);
    CHECK(cfg.tolerance == 0.02);
  }
  SUBCASE("explicit hopping list") {
    const auto cfg = config_from_string(R"({
      "experiment": "oracle",
      "model": {"d": 2, "Q": 1, "hoppings": [
        {"q": [1, 0], "re": [[0.5]]},
        {"q": [-1, 0], "re": [[0.5]]},
        {"q": [0, 0], "re": [[1.0]]}
      ]},
      "sizes": [12]
    })");
    CHECK(cfg.model.d == 2);
    CHECK(cfg.model.hoppings.size() == 3);
  }
  SUBCASE("disordered model without seeds is rejected") {
    CHECK_THROWS_AS(config_from_string(R"({
      "experiment": "chern",
      "model": {"builtin": "chern2d", "W": 1.0},
      "sizes": [8]
    })"),
                    std::invalid_argument);
  }
  SUBCASE("unknown builtin is rejected") {
    CHECK_THROWS_AS(config_from_string(R"({
      "experiment": "chern",
      "model": {"builtin": "nonsense"},
      "sizes": [8]
    })"),
                    std::invalid_argument);
  }
  SUBCASE("non-self-adjoint hopping list is rejected") {
    CHECK_THROWS_AS(config_from_string(R"({
      "experiment": "oracle",
      "model": {"d": 2, "Q": 1, "hoppings": [{"q": [1, 0], "re": [[1.0]]}]},
      "sizes": [8]
    })"),
                    std::invalid_argument);
  }
}

TEST_CASE("unknown experiment kind throws") {
  auto cfg = config_from_string(R"({"experiment": "frobnicate", "sizes": [4]})");
  cfg.model = models::atomic2d();
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("chern experiment runs and repeats bit-identically") {
  auto cfg = config_from_string(R"({
    "experiment": "chern",
    "model": {"builtin": "chern2d", "m": 1.0, "W": 0.5},
    "sizes": [8],
    "seeds": [7, 8]
  })");
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  REQUIRE(a.size() == 2);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].error.empty());
    CHECK(a[i].values.at("value").get<double>() == b[i].values.at("value").get<double>());
  }
}

TEST_CASE("failures are captured per record, not thrown") {
  // fermi level inside a band closes the gap at every size
  auto cfg = config_from_string(R"({
    "experiment": "chern",
    "model": {"builtin": "chern2d", "m": 1.0},
    "sizes": [6],
    "fermi_level": 1.0
  })");
  const auto recs = run_experiment(cfg);
  REQUIRE(recs.size() == 1);
  CHECK_FALSE(recs[0].error.empty());
  CHECK(recs[0].values.is_null());
}

TEST_CASE("identity-check experiment uses the default point set") {
  auto cfg = config_from_string(R"({"experiment": "identity-check", "cutoff": 20})");
  cfg.model = models::chern2d(1.0);
  const auto recs = run_experiment(cfg);
  REQUIRE(recs.size() == 3);
  for (const auto& r : recs) {
    CHECK(r.error.empty());
    CHECK(r.values.contains("rel_error"));
  }
}

TEST_CASE("oracle experiment emits the invariant") {
  auto cfg = config_from_string(R"({
    "experiment": "oracle",
    "model": {"builtin": "chern2d", "m": 1.0},
    "sizes": [16]
  })");
  const auto recs = run_experiment(cfg);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].error.empty());
  CHECK(std::abs(recs[0].values.at("value").get<int>()) == 1);
}

TEST_CASE("emission: json roundtrip and csv layout") {
  auto cfg = config_from_string(R"({
    "experiment": "oracle",
    "model": {"builtin": "atomic2d"},
    "sizes": [8]
  })");
  const auto recs = run_experiment(cfg);

  SUBCASE("json serialization is lossless") {
    const auto j = to_json(recs);
    CHECK(j.at("schema_version").get<int>() == result_schema_version);
    const auto back = nlohmann::json::parse(j.dump());
    REQUIRE(back.at("records").size() == recs.size());
    CHECK(back.at("records")[0].at("values") == recs[0].values);
    CHECK(back.at("records")[0].at("params") == recs[0].params);
  }
  SUBCASE("csv has a header and one row per record") {
    std::ostringstream os;
    write_csv(recs, os);
    const std::string text = os.str();
    CHECK(text.rfind("schema_version,experiment", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + static_cast<long>(recs.size()));
  }
  SUBCASE("emit_results writes both files") {
    const auto dir = std::filesystem::temp_directory_path() / "ncg_emit_test";
    std::filesystem::remove_all(dir);
    emit_results(recs, dir.string());
    CHECK(std::filesystem::exists(dir / "results.json"));
    CHECK(std::filesystem::exists(dir / "results.csv"));
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("decay experiment reports a locality exponent on the torus") {
  auto cfg = config_from_string(R"({
    "experiment": "decay",
    "model": {"builtin": "chern2d", "m": 1.0},
    "sizes": [10]
  })");
  const auto recs = run_experiment(cfg);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].error.empty());
  const double alpha = recs[0].values.at("alpha").get<double>();
  CHECK(alpha > 0.0);
  CHECK(alpha < 1.0);
}
