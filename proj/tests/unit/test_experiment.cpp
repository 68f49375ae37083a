#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rrmc/errors.h"
#include "rrmc/experiment.h"

using namespace rrmc;
using nlohmann::json;

namespace {

json small_put() {
  return {{"product", {{"type", "put"}}},
          {"method", "reinforced-tvr"},
          {"basis", "constant-linear-quadratic"},
          {"paths", 2000},
          {"test_paths", 2000},
          {"outer_paths", 20},
          {"inner_paths", 20},
          {"seed", 7}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("defaults follow the product type") {
    const ExperimentConfig maxcall = parse_config(json::object());
    CHECK(maxcall.product.type == "max-call");
    CHECK(maxcall.product.dim == 2);
    CHECK(maxcall.product.num_dates == 9);
    CHECK(maxcall.product.dividend == 0.1);
    CHECK(maxcall.inner_paths == 1000);
    CHECK(maxcall.basis == BasisFamily::constant_linear);

    const ExperimentConfig swap = parse_config({{"product", {{"type", "swap"}}}});
    CHECK(swap.product.dim == 20);
    CHECK(swap.product.num_dates == 10);
    CHECK(swap.basis == BasisFamily::swap_order_stats);
  }

  TEST_CASE("schema violations are configuration errors") {
    CHECK_THROWS_AS(parse_config({{"pathz", 10}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"product", {{"type", "put"}, {"colour", 1}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"output", {{"html", "x"}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"paths", "many"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"paths", 1.5}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"method", "reinforced"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"basis", "swap-order-stats"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"basis", "constant-linear-payoff"}, {"method", "reinforced-tvr"}}), ConfigError);
    CHECK_NOTHROW(parse_config({{"basis", "1, X_i, g(X)"}, {"method", "standard-tvr"}}));
    CHECK_THROWS_AS(parse_config({{"outer_paths", 10}, {"inner_paths", 1}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"product", {{"type", "bond"}}}}), ConfigError);
    CHECK(parse_config({{"paths", 1e5}}).paths == 100000);
  }

  TEST_CASE("config echo parses back to the same hash") {
    const ExperimentConfig c = parse_config(small_put());
    const ExperimentConfig back = parse_config(config_to_json(c));
    CHECK(config_hash(back) == config_hash(c));
    ExperimentConfig other = c;
    other.seed = 8;
    CHECK(config_hash(other) != config_hash(c));
    other = c;
    other.output.csv = "elsewhere.csv";
    CHECK(config_hash(other) == config_hash(c));
  }

  TEST_CASE("runs are reproducible apart from timings") {
    const ExperimentConfig c = parse_config(small_put());
    ExperimentResult a = run_experiment(c);
    ExperimentResult b = run_experiment(c);
    REQUIRE(a.lower);
    REQUIRE(a.upper);
    CHECK(a.lower->value <= a.upper->value + 3 * a.upper->std_error);
    a.report.erase("timings");
    b.report.erase("timings");
    CHECK(a.report.dump() == b.report.dump());
    CHECK(a.report.at("cost").at("K").get<double>() == 3.0);
  }

  TEST_CASE("training only skips the bounds") {
    json doc = small_put();
    doc["test_paths"] = 0;
    const ExperimentResult r = run_experiment(parse_config(doc));
    CHECK_FALSE(r.lower);
    CHECK_FALSE(r.upper);
    CHECK(r.model.coeffs.size() == 3);
    CHECK(r.report.at("bounds").empty());
  }

  TEST_CASE("log receives one event per regression date") {
    std::size_t train_events = 0;
    RunOptions options;
    options.log = [&](const json& e) {
      if (e.value("stage", "") == "train" && e.contains("date")) {
        ++train_events;
        CHECK(e.contains("condition_estimate"));
      }
    };
    json doc = small_put();
    doc["outer_paths"] = 0;
    run_experiment(parse_config(doc), options);
    CHECK(train_events == 3);
  }

  TEST_CASE("outputs are written") {
    const auto dir = std::filesystem::temp_directory_path() / "rrmc_experiment_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    json doc = small_put();
    doc["outer_paths"] = 0;
    doc["output"] = {{"report", (dir / "report.json").string()},
                     {"csv", (dir / "table.csv").string()},
                     {"model", (dir / "model.json").string()}};
    const ExperimentConfig c = parse_config(doc);
    run_experiment(c);
    run_experiment(c);
    CHECK(json::parse(read_file((dir / "report.json").string())).at("bounds").contains("lower"));
    CHECK(json::parse(read_file((dir / "model.json").string())).at("format") == "rrmc.continuation_model");
    const std::string csv = read_file((dir / "table.csv").string());
    CHECK(csv.rfind(csv_header() + "\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("table sweeps") {
    const json empty = run_table(small_put(), {});
    CHECK(empty.at("cells").empty());
    CHECK(empty.at("csv") == csv_header() + "\n");

    json base = small_put();
    base["outer_paths"] = 0;
    const json table = run_table(base, {{{"method", "standard-tvr"}}, {{"basis", "swap-order-stats"}}});
    REQUIRE(table.at("cells").size() == 2);
    CHECK(table.at("cells")[0].at("status") == "ok");
    CHECK(table.at("cells")[1].at("status") == "failed");
    const std::string csv = table.at("csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find(",failed,") != std::string::npos);
  }

  TEST_CASE("stage is named in errors") {
    json doc = small_put();
    doc["memory_cap_mb"] = 0;
    try {
      run_experiment(parse_config(doc));
      FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
      CHECK(std::string(e.what()).find("[train]") != std::string::npos);
    }
  }

  TEST_CASE("cost report") {
    json doc = {{"product", {{"dim", 10}}}, {"paths", 1000}, {"test_paths", 1000}};
    const json cost = cost_report(parse_config(doc));
    CHECK(cost.at("K").get<double>() == 66.0);
    CHECK(cost.at("K_r").get<double>() == 11.0);
    CHECK(cost.at("max_call_reduction").get<double>() == doctest::Approx(29.0 / 110.0));
  }
}
